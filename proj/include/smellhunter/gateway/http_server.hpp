#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "smellhunter/gateway/gateway.hpp"

namespace smellhunter::gateway {

struct ServerConfig {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    std::optional<std::filesystem::path> store_dir;
    std::optional<std::filesystem::path> static_dir;  // dashboard assets served under /
    std::size_t payload_limit = 8u << 20;
    std::chrono::milliseconds pipeline_timeout{30'000};
};

// Overrides from SMELLHUNTER_LISTEN (host:port), SMELLHUNTER_STORE, SMELLHUNTER_STATIC,
// SMELLHUNTER_PAYLOAD_LIMIT (bytes) and SMELLHUNTER_PIPELINE_TIMEOUT_MS.
Expected<ServerConfig, std::string> apply_env(ServerConfig config);

// Routes:
//   POST /analyses                      multipart: script, metrics, thresholds, metadata [, label]
//   GET  /analyses/{id}                 status view
//   GET  /analyses/{id}/trace           bus events and annotations
//   GET  /detections                    filtered page
//   GET  /detections/histogram          smell name -> count
//   GET  /executions                    execution history page
//   GET  /                              static dashboard assets (if configured)
class HttpServer {
public:
    HttpServer(services::Platform& platform, ServerConfig config);
    ~HttpServer();

    // Binds the socket; returns the bound port or nullopt.
    std::optional<int> bind();
    // Serves until stop(). Blocks.
    bool listen();
    void stop();
    // Waits up to the pipeline timeout for in-flight runs to reach a terminal stage.
    bool drain();

    const ServerConfig& config() const { return config_; }

private:
    struct Impl;
    services::Platform& platform_;
    ServerConfig config_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace smellhunter::gateway
