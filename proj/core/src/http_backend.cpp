#include <regex>

#include "fallacy/error.hpp"
#include "fallacy/gateway.hpp"
#include "httplib.h"
#include "json.hpp"

namespace fallacy {

HttpBackend::HttpBackend(std::string url) : HttpBackend(std::move(url), Options{}) {}

HttpBackend::HttpBackend(std::string url, Options options) : url_(std::move(url)), options_(options) {
    static const std::regex pattern(R"(^http://([^/:]+)(?::(\d+))?/?$)");
    std::smatch m;
    if (!std::regex_match(url_, m, pattern)) {
        throw std::invalid_argument("backend url must look like http://host:port, got \"" + url_ + "\"");
    }
    host_ = m[1].str();
    port_ = m[2].matched ? std::stoi(m[2].str()) : 80;
}

CompletionResponse HttpBackend::complete(const CompletionRequest& request) {
    httplib::Client client(host_, port_);
    client.set_connection_timeout(options_.connect_timeout);
    client.set_read_timeout(options_.read_timeout);
    client.set_write_timeout(options_.read_timeout);

    const auto result = client.Post("/v1/complete", serialize_request(request), "application/json");
    if (!result) {
        throw BackendError(BackendError::Kind::Transport, 0,
                           "transport error talking to " + url_ + ": " + httplib::to_string(result.error()));
    }
    if (result->status != 200) {
        throw BackendError(BackendError::Kind::Status, result->status,
                           "backend " + url_ + " answered " + std::to_string(result->status) + ": " + result->body);
    }
    auto response = parse_response(result->body);
    if (response.backend_id.empty()) response.backend_id = url_;
    return response;
}

struct CompletionServer::Impl {
    std::shared_ptr<Backend> backend;
    httplib::Server server;
};

CompletionServer::CompletionServer(std::shared_ptr<Backend> backend) : impl_(std::make_unique<Impl>()) {
    impl_->backend = std::move(backend);
    impl_->server.Post("/v1/complete", [impl = impl_.get()](const httplib::Request& req, httplib::Response& res) {
        CompletionRequest request;
        try {
            request = parse_request(req.body);
        } catch (const ParseError& e) {
            res.status = 400;
            res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
            return;
        }
        try {
            auto response = impl->backend->complete(request);
            res.set_content(serialize_response(response), "application/json");
        } catch (const BackendError& e) {
            res.status = e.kind() == BackendError::Kind::Status && e.status() != 0 ? e.status()
                         : e.retryable()                                          ? 503
                                                                                  : 500;
            res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
        } catch (const std::exception& e) {
            res.status = 500;
            res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
        }
    });
}

CompletionServer::~CompletionServer() { stop(); }

int CompletionServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = impl_->server.bind_to_any_port(host);
        if (bound < 0) throw std::runtime_error("cannot bind " + host);
        return bound;
    }
    if (!impl_->server.bind_to_port(host, port)) {
        throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    }
    return port;
}

void CompletionServer::listen() { impl_->server.listen_after_bind(); }

void CompletionServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace fallacy
