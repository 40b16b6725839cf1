#include "fallacy/gateway.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <ctime>
#include <set>
#include <sstream>
#include <thread>

#include "fallacy/error.hpp"
#include "fallacy/text.hpp"
#include "json.hpp"

namespace fallacy {

using nlohmann::json;

std::string serialize_request(const CompletionRequest& request) {
    nlohmann::ordered_json obj;
    obj["prompt"] = request.prompt;
    obj["max_new_tokens"] = request.max_new_tokens;
    obj["decoding"] = "greedy";
    if (request.stop) obj["stop"] = *request.stop;
    return obj.dump();
}

CompletionRequest parse_request(std::string_view body) {
    json obj;
    try {
        obj = json::parse(body);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("request: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError("request: body must be a JSON object");
    static const std::set<std::string, std::less<>> allowed = {"prompt", "max_new_tokens", "decoding", "stop"};
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) throw ParseError("request: unsupported field \"" + key + "\"");
    }
    CompletionRequest request;
    auto prompt = obj.find("prompt");
    if (prompt == obj.end() || !prompt->is_string()) throw ParseError("request: \"prompt\" must be a string");
    request.prompt = prompt->get<std::string>();
    auto tokens = obj.find("max_new_tokens");
    if (tokens == obj.end() || !tokens->is_number_integer() || tokens->get<long long>() <= 0) {
        throw ParseError("request: \"max_new_tokens\" must be a positive integer");
    }
    request.max_new_tokens = tokens->get<std::size_t>();
    auto decoding = obj.find("decoding");
    if (decoding == obj.end() || !decoding->is_string() || decoding->get<std::string>() != "greedy") {
        throw ParseError("request: \"decoding\" must be \"greedy\"");
    }
    if (auto stop = obj.find("stop"); stop != obj.end() && !stop->is_null()) {
        if (!stop->is_string()) throw ParseError("request: \"stop\" must be a string");
        request.stop = stop->get<std::string>();
    }
    return request;
}

std::string serialize_response(const CompletionResponse& response) {
    nlohmann::ordered_json obj;
    obj["text"] = response.text;
    obj["backend_id"] = response.backend_id;
    obj["latency_ms"] = response.latency_ms;
    return obj.dump();
}

CompletionResponse parse_response(std::string_view body) {
    try {
        const auto obj = json::parse(body);
        CompletionResponse response;
        response.text = obj.at("text").get<std::string>();
        if (auto it = obj.find("backend_id"); it != obj.end() && it->is_string()) {
            response.backend_id = it->get<std::string>();
        }
        if (auto it = obj.find("latency_ms"); it != obj.end() && it->is_number()) {
            response.latency_ms = it->get<double>();
        }
        return response;
    } catch (const json::exception& e) {
        throw BackendError(BackendError::Kind::Malformed, 0, std::string("malformed response: ") + e.what());
    }
}

BackendError::BackendError(Kind kind, int status, const std::string& what)
    : std::runtime_error(what), kind_(kind), status_(status) {}

bool BackendError::retryable() const noexcept {
    switch (kind_) {
        case Kind::Transport: return true;
        case Kind::Status: return status_ == 429 || status_ >= 500;
        case Kind::Malformed: return false;
    }
    return false;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kMarkerOpen = "\xC2\xAB";   // «
constexpr std::string_view kMarkerClose = "\xC2\xBB";  // »

std::string first_tokens(std::string_view s, std::size_t n) {
    std::istringstream in{std::string(s)};
    std::string token;
    std::string out;
    for (std::size_t i = 0; i < n && in >> token; ++i) {
        if (!out.empty()) out += ' ';
        out += token;
    }
    return out;
}

}  // namespace

std::string mock_complete(std::string_view prompt) {
    if (const auto open = prompt.find(kMarkerOpen); open != std::string_view::npos) {
        const auto from = open + kMarkerOpen.size();
        if (const auto close = prompt.find(kMarkerClose, from); close != std::string_view::npos) {
            return std::string(prompt.substr(from, close - from));
        }
    }

    // The first run of bullet lines is the label list; what follows is the
    // final text block.
    std::vector<std::string> labels;
    std::size_t block_start = std::string_view::npos;
    std::size_t at = 0;
    bool in_list = false;
    while (at < prompt.size()) {
        auto eol = prompt.find('\n', at);
        if (eol == std::string_view::npos) eol = prompt.size();
        const auto line = prompt.substr(at, eol - at);
        if (text::starts_with(line, kLabelBullet)) {
            auto name = line.substr(kLabelBullet.size());
            if (auto sep = name.find(kDefinitionSeparator); sep != std::string_view::npos) name = name.substr(0, sep);
            labels.emplace_back(text::trim(name));
            in_list = true;
        } else if (in_list) {
            block_start = at;
            break;
        }
        at = eol + 1;
    }
    if (labels.empty()) return {};
    const auto block = block_start == std::string_view::npos ? std::string_view{} : prompt.substr(block_start);

    const std::string* best = nullptr;
    std::size_t best_at = std::string_view::npos;
    for (const auto& label : labels) {
        const auto found = text::ifind(block, label);
        if (found == std::string_view::npos) continue;
        if (found < best_at || (found == best_at && label.size() > best->size())) {
            best = &label;
            best_at = found;
        }
    }
    return best != nullptr ? *best : labels.front();
}

CompletionResponse MockBackend::complete(const CompletionRequest& request) {
    return {first_tokens(mock_complete(request.prompt), request.max_new_tokens), id(), 0.0};
}

ScriptedFailureBackend::ScriptedFailureBackend(std::shared_ptr<Backend> inner, std::vector<Rule> rules)
    : inner_(std::move(inner)), rules_(std::move(rules)), fired_(rules_.size(), 0) {}

CompletionResponse ScriptedFailureBackend::complete(const CompletionRequest& request) {
    {
        std::lock_guard lock(mutex_);
        for (std::size_t i = 0; i < rules_.size(); ++i) {
            if (request.prompt.find(rules_[i].trigger) == std::string::npos) continue;
            if (fired_[i] < rules_[i].times) {
                ++fired_[i];
                throw BackendError(BackendError::Kind::Status, rules_[i].status,
                                   "scripted failure " + std::to_string(fired_[i]) + " for \"" +
                                       rules_[i].trigger + "\"");
            }
        }
    }
    return inner_->complete(request);
}

std::string ScriptedFailureBackend::id() const { return inner_->id() + "+scripted"; }

// ---------------------------------------------------------------------------

std::size_t RunManifest::failed_count() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.failed; }));
}

std::map<std::string, std::string> RunManifest::texts() const {
    std::map<std::string, std::string> out;
    for (const auto& e : entries) out[e.record_id] = e.text;
    return out;
}

const ManifestEntry* RunManifest::find(std::string_view record_id) const {
    for (const auto& e : entries) {
        if (e.record_id == record_id) return &e;
    }
    return nullptr;
}

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string run_id_for(const std::vector<RenderedInstance>& instances, const std::string& backend) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= 0xff;
        h *= 0x100000001b3ULL;
    };
    feed(backend);
    for (const auto& instance : instances) {
        feed(instance.record_id);
        feed(instance.source);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ManifestEntry run_one(const RenderedInstance& instance, Backend& backend, const RunOptions& options) {
    ManifestEntry entry;
    entry.record_id = instance.record_id;
    CompletionRequest request{instance.source, options.max_new_tokens, Decoding::Greedy, options.stop};
    for (std::size_t attempt = 0;; ++attempt) {
        entry.retries = attempt;
        const auto begin = std::chrono::steady_clock::now();
        try {
            auto response = backend.complete(request);
            entry.latency_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - begin).count();
            entry.text = std::move(response.text);
            entry.failed = false;
            entry.error.clear();
            return entry;
        } catch (const BackendError& e) {
            entry.error = e.what();
            if (!e.retryable() || attempt >= options.retry.retry_limit) break;
        } catch (const std::exception& e) {
            entry.error = e.what();
            break;
        }
        std::this_thread::sleep_for(options.retry.backoff_base * (std::int64_t{1} << std::min<std::size_t>(attempt, 20)));
    }
    entry.failed = true;
    entry.text.clear();
    return entry;
}

}  // namespace

RunManifest run_batch(const std::vector<RenderedInstance>& instances, Backend& backend, const RunOptions& options) {
    if (options.parallelism == 0) throw std::invalid_argument("parallelism must be positive");
    std::set<std::string, std::less<>> ids;
    std::set<std::string> variants;
    for (const auto& instance : instances) {
        if (!ids.insert(instance.record_id).second) {
            throw std::invalid_argument("duplicate record_id \"" + instance.record_id + "\" in batch");
        }
        variants.insert(to_string(instance.variant));
    }

    RunManifest manifest;
    manifest.meta.backend = backend.id();
    manifest.meta.run_id = run_id_for(instances, manifest.meta.backend);
    manifest.meta.max_new_tokens = options.max_new_tokens;
    for (const auto& v : variants) {
        if (!manifest.meta.variant.empty()) manifest.meta.variant += ',';
        manifest.meta.variant += v;
    }
    manifest.meta.started = utc_now();

    manifest.entries.resize(instances.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < instances.size(); i = next++) {
            manifest.entries[i] = run_one(instances[i], backend, options);
        }
    };
    const std::size_t workers = std::min(options.parallelism, instances.size());
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    manifest.meta.finished = utc_now();
    return manifest;
}

}  // namespace fallacy
