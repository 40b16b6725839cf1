#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fallacy/prompt.hpp"

namespace fallacy {

/// Generation is always greedy; there is no sampling knob to set.
enum class Decoding { Greedy };

inline constexpr std::size_t kLabelMaxNewTokens = 64;
inline constexpr std::size_t kFewShotMaxNewTokens = 150;

struct CompletionRequest {
    std::string prompt;
    std::size_t max_new_tokens = kLabelMaxNewTokens;
    Decoding decoding = Decoding::Greedy;
    std::optional<std::string> stop;
};

struct CompletionResponse {
    std::string text;
    std::string backend_id;
    double latency_ms = 0.0;
};

/// Body of `POST /v1/complete`: {prompt, max_new_tokens, decoding, stop?}.
std::string serialize_request(const CompletionRequest& request);
/// Rejects unknown keys (e.g. sampling parameters) and non-greedy decoding.
CompletionRequest parse_request(std::string_view body);
std::string serialize_response(const CompletionResponse& response);
CompletionResponse parse_response(std::string_view body);

class BackendError : public std::runtime_error {
public:
    enum class Kind { Transport, Status, Malformed };

    BackendError(Kind kind, int status, const std::string& what);

    Kind kind() const noexcept { return kind_; }
    int status() const noexcept { return status_; }
    /// Transport failures, 429 and 5xx.
    bool retryable() const noexcept;

private:
    Kind kind_;
    int status_;
};

/// A completion backend; implementations must tolerate concurrent calls.
class Backend {
public:
    virtual ~Backend() = default;
    virtual CompletionResponse complete(const CompletionRequest& request) = 0;
    virtual std::string id() const = 0;
};

/// The reference test backend's rule, see MockBackend.
std::string mock_complete(std::string_view prompt);

/// Stateless deterministic backend. A «name» marker anywhere in the prompt is
/// echoed as "name". Otherwise the text after the label list is searched
/// (case-insensitively) for the listed label occurring earliest; without a
/// hit the first listed label is returned. Output is cut to max_new_tokens
/// whitespace-separated tokens.
class MockBackend final : public Backend {
public:
    CompletionResponse complete(const CompletionRequest& request) override;
    std::string id() const override { return "mock"; }
};

/// Wraps a backend and fails the first `times` calls whose prompt contains
/// `trigger` with the given HTTP-like status.
class ScriptedFailureBackend final : public Backend {
public:
    struct Rule {
        std::string trigger;
        std::size_t times = 0;
        int status = 503;
    };

    ScriptedFailureBackend(std::shared_ptr<Backend> inner, std::vector<Rule> rules);

    CompletionResponse complete(const CompletionRequest& request) override;
    std::string id() const override;

private:
    std::shared_ptr<Backend> inner_;
    std::vector<Rule> rules_;
    std::vector<std::size_t> fired_;
    std::mutex mutex_;
};

/// Client for a remote `POST /v1/complete` endpoint.
class HttpBackend final : public Backend {
public:
    struct Options {
        std::chrono::milliseconds connect_timeout{2000};
        std::chrono::milliseconds read_timeout{60000};
    };

    /// `url` like "http://127.0.0.1:8080"; throws std::invalid_argument otherwise.
    explicit HttpBackend(std::string url);
    HttpBackend(std::string url, Options options);

    CompletionResponse complete(const CompletionRequest& request) override;
    std::string id() const override { return url_; }

private:
    std::string url_;
    std::string host_;
    int port_ = 80;
    Options options_;
};

/// Serves a backend over HTTP. Malformed requests get 400, retryable backend
/// failures their status (default 503), other failures 500.
class CompletionServer {
public:
    explicit CompletionServer(std::shared_ptr<Backend> backend);
    ~CompletionServer();

    CompletionServer(const CompletionServer&) = delete;
    CompletionServer& operator=(const CompletionServer&) = delete;

    /// Binds to `host`; port 0 picks a free port. Returns the bound port.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------
// Batch runs

struct RetryPolicy {
    std::size_t retry_limit = 3;
    std::chrono::milliseconds backoff_base{500};
};

struct RunOptions {
    std::size_t parallelism = 1;
    RetryPolicy retry;
    std::size_t max_new_tokens = kLabelMaxNewTokens;
    std::optional<std::string> stop;
};

struct ManifestEntry {
    std::string record_id;
    std::string text;
    double latency_ms = 0.0;
    std::size_t retries = 0;
    bool failed = false;
    std::string error;
};

struct ManifestMeta {
    std::string run_id;
    std::string backend;
    std::string variant;
    std::size_t max_new_tokens = kLabelMaxNewTokens;
    std::string started;
    std::string finished;
};

struct RunManifest {
    ManifestMeta meta;
    /// In submission order, one per instance.
    std::vector<ManifestEntry> entries;

    std::size_t failed_count() const;
    std::map<std::string, std::string> texts() const;
    const ManifestEntry* find(std::string_view record_id) const;
};

/// At most `parallelism` requests in flight; failed requests are retried up to
/// retry_limit times with exponential backoff and then recorded as failed
/// with empty text. Throws std::invalid_argument for duplicate record ids.
RunManifest run_batch(const std::vector<RenderedInstance>& instances, Backend& backend,
                      const RunOptions& options);

/// First line is a metadata object ("kind": "meta"), one entry per line after.
void write_manifest(std::ostream& out, const RunManifest& manifest);
RunManifest read_manifest(std::istream& in);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace fallacy
