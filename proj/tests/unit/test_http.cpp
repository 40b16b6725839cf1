#include <gtest/gtest.h>

#include <thread>

#include "fallacy/gateway.hpp"
#include "httplib.h"

using namespace fallacy;
using namespace std::chrono_literals;

namespace {

class Served {
public:
    explicit Served(std::shared_ptr<Backend> backend) : server_(std::move(backend)) {
        port_ = server_.bind("127.0.0.1", 0);
        thread_ = std::thread([this] { server_.listen(); });
    }
    ~Served() {
        server_.stop();
        thread_.join();
    }
    int port() const { return port_; }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

private:
    CompletionServer server_;
    int port_ = 0;
    std::thread thread_;
};

const std::string kPrompt = "Given a text segment\n- Doubt\n- Slogans\n\nText: slogans\nFallacy type:";

}  // namespace

TEST(Http, ClientServerRoundTrip) {
    Served s(std::make_shared<MockBackend>());
    ASSERT_GT(s.port(), 0);
    HttpBackend client(s.url());
    const auto r = client.complete({kPrompt, 64, Decoding::Greedy, {}});
    EXPECT_EQ(r.text, "Slogans");
    EXPECT_EQ(r.backend_id, "mock");
    EXPECT_EQ(client.id(), s.url());
}

TEST(Http, NonGreedyRequestIs400) {
    Served s(std::make_shared<MockBackend>());
    httplib::Client raw("127.0.0.1", s.port());
    auto res = raw.Post("/v1/complete", R"({"prompt":"p","max_new_tokens":4,"decoding":"sample"})",
                        "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400);
    res = raw.Post("/v1/complete", R"({"prompt":"p","max_new_tokens":4,"decoding":"greedy","top_p":0.9})",
                   "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400);
}

TEST(Http, RetryableStatusPropagatesAndRetries) {
    auto flaky = std::make_shared<ScriptedFailureBackend>(std::make_shared<MockBackend>(),
                                                          std::vector<ScriptedFailureBackend::Rule>{{"slogans", 2, 503}});
    Served s(flaky);
    HttpBackend client(s.url());
    try {
        client.complete({kPrompt, 64, Decoding::Greedy, {}});
        FAIL() << "expected BackendError";
    } catch (const BackendError& e) {
        EXPECT_EQ(e.status(), 503);
        EXPECT_TRUE(e.retryable());
    }
    RenderedInstance inst;
    inst.record_id = "a";
    inst.source = kPrompt;
    RunOptions opts;
    opts.retry.backoff_base = 1ms;
    const auto m = run_batch({inst}, client, opts);
    EXPECT_EQ(m.entries[0].retries, 1u);
    EXPECT_EQ(m.entries[0].text, "Slogans");
}

TEST(Http, UnreachableEndpointIsTransport) {
    int port = 0;
    {
        CompletionServer probe(std::make_shared<MockBackend>());
        port = probe.bind("127.0.0.1", 0);
    }
    HttpBackend client("http://127.0.0.1:" + std::to_string(port), {200ms, 500ms});
    try {
        client.complete({"x", 4, Decoding::Greedy, {}});
        FAIL() << "expected BackendError";
    } catch (const BackendError& e) {
        EXPECT_EQ(e.kind(), BackendError::Kind::Transport);
        EXPECT_TRUE(e.retryable());
    }
}

TEST(Http, BadUrl) {
    EXPECT_THROW(HttpBackend("ftp://x"), std::invalid_argument);
    EXPECT_THROW(HttpBackend("https://host:1"), std::invalid_argument);
    EXPECT_NO_THROW(HttpBackend("http://localhost"));
}
