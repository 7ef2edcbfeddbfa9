#include "smellhunter/gateway/http_server.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <httplib.h>

namespace smellhunter::gateway {

namespace {

void reply(httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
}

Params params_of(const httplib::Request& req) { return Params(req.params.begin(), req.params.end()); }

bool parse_count(const char* s, std::size_t& out) {
    std::string_view v(s);
    auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    return r.ec == std::errc{} && r.ptr == v.data() + v.size();
}

}  // namespace

Expected<ServerConfig, std::string> apply_env(ServerConfig c) {
    if (const char* v = std::getenv("SMELLHUNTER_LISTEN")) {
        std::string_view s(v);
        auto colon = s.rfind(':');
        if (colon == std::string_view::npos) return unexpected(std::string("SMELLHUNTER_LISTEN must be host:port"));
        c.host = std::string(s.substr(0, colon));
        auto port_text = s.substr(colon + 1);
        auto r = std::from_chars(port_text.data(), port_text.data() + port_text.size(), c.port);
        if (r.ec != std::errc{} || c.port < 0 || c.port > 65535)
            return unexpected(std::string("invalid port in SMELLHUNTER_LISTEN"));
    }
    if (const char* v = std::getenv("SMELLHUNTER_STORE")) c.store_dir = v;
    if (const char* v = std::getenv("SMELLHUNTER_STATIC")) c.static_dir = v;
    if (const char* v = std::getenv("SMELLHUNTER_PAYLOAD_LIMIT")) {
        if (!parse_count(v, c.payload_limit)) return unexpected(std::string("invalid SMELLHUNTER_PAYLOAD_LIMIT"));
    }
    if (const char* v = std::getenv("SMELLHUNTER_PIPELINE_TIMEOUT_MS")) {
        std::size_t ms = 0;
        if (!parse_count(v, ms) || ms == 0) return unexpected(std::string("invalid SMELLHUNTER_PIPELINE_TIMEOUT_MS"));
        c.pipeline_timeout = std::chrono::milliseconds(ms);
    }
    return c;
}

struct HttpServer::Impl {
    Gateway gateway;
    httplib::Server server;

    // stop() may race with a listen() that has not started yet
    enum class Phase { idle, listening, stopped };
    std::mutex mu;
    Phase phase = Phase::idle;
    std::atomic<bool> listen_returned{false};

    Impl(services::Platform& platform, const ServerConfig& cfg) : gateway(platform, Limits{cfg.payload_limit}) {}
};

HttpServer::HttpServer(services::Platform& platform, ServerConfig config)
    : platform_(platform), config_(std::move(config)), impl_(std::make_unique<Impl>(platform, config_)) {
    auto& srv = impl_->server;
    auto& gw = impl_->gateway;

    // Leave headroom for multipart framing; the gateway enforces the exact limit on part contents.
    srv.set_payload_max_length(config_.payload_limit + 64 * 1024);

    srv.Post("/analyses", [&gw](const httplib::Request& req, httplib::Response& res) {
        if (!req.is_multipart_form_data()) {
            reply(res, {400, R"({"error":"expected multipart/form-data"})"});
            return;
        }
        std::map<std::string, std::string> parts;
        for (const auto& [name, file] : req.files) {
            if (parts.count(name)) {
                reply(res, {400, nlohmann::json{{"error", "repeated part '" + name + "'"}}.dump()});
                return;
            }
            parts.emplace(name, file.content);
        }
        reply(res, gw.submit(parts));
    });
    srv.Get(R"(/analyses/([0-9A-Za-z_-]+))", [&gw](const httplib::Request& req, httplib::Response& res) {
        reply(res, gw.status(req.matches[1]));
    });
    srv.Get(R"(/analyses/([0-9A-Za-z_-]+)/trace)", [&gw](const httplib::Request& req, httplib::Response& res) {
        reply(res, gw.trace(req.matches[1]));
    });
    srv.Get("/detections", [&gw](const httplib::Request& req, httplib::Response& res) {
        reply(res, gw.detections(params_of(req)));
    });
    srv.Get("/detections/histogram", [&gw](const httplib::Request& req, httplib::Response& res) {
        reply(res, gw.histogram(params_of(req)));
    });
    srv.Get("/executions", [&gw](const httplib::Request& req, httplib::Response& res) {
        reply(res, gw.executions(params_of(req)));
    });
    srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) {
            std::string msg = res.status == 413 ? "payload too large" : httplib::status_message(res.status);
            res.set_content(nlohmann::json{{"error", msg}}.dump(), "application/json");
        }
    });

    if (config_.static_dir) srv.set_mount_point("/", config_.static_dir->string());
}

HttpServer::~HttpServer() { stop(); }

std::optional<int> HttpServer::bind() {
    auto& srv = impl_->server;
    if (config_.port == 0) {
        int port = srv.bind_to_any_port(config_.host);
        if (port <= 0) return std::nullopt;
        config_.port = port;
        return port;
    }
    if (!srv.bind_to_port(config_.host, config_.port)) return std::nullopt;
    return config_.port;
}

bool HttpServer::listen() {
    {
        std::lock_guard lock(impl_->mu);
        if (impl_->phase == Impl::Phase::stopped) return true;
        impl_->phase = Impl::Phase::listening;
    }
    const bool ok = impl_->server.listen_after_bind();
    impl_->listen_returned = true;
    return ok;
}

void HttpServer::stop() {
    if (!impl_) return;
    Impl::Phase previous;
    {
        std::lock_guard lock(impl_->mu);
        previous = impl_->phase;
        impl_->phase = Impl::Phase::stopped;
    }
    if (previous != Impl::Phase::listening) return;
    while (!impl_->listen_returned && !impl_->server.is_running()) std::this_thread::yield();
    impl_->server.stop();
}

bool HttpServer::drain() {
    const auto deadline = std::chrono::steady_clock::now() + config_.pipeline_timeout;
    for (const auto& id : platform_.bus().correlation_ids()) {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0 || !platform_.await_terminal(id, left)) return false;
    }
    return true;
}

}  // namespace smellhunter::gateway
