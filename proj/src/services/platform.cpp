#include "smellhunter/services/platform.hpp"

#include <cstdio>
#include <random>

namespace smellhunter::services {

std::string new_correlation_id() {
    thread_local std::mt19937_64 gen{std::random_device{}()};
    std::uniform_int_distribution<std::uint64_t> dis;
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(dis(gen)),
                  static_cast<unsigned long long>(dis(gen)));
    return buf;
}

Expected<std::unique_ptr<Platform>, std::string> Platform::create(const Options& options) {
    std::unique_ptr<store::ContextStore> store;
    if (options.store_dir) {
        auto opened = store::ContextStore::open(*options.store_dir);
        if (!opened) return unexpected(opened.error().message);
        store = std::move(*opened);
    } else {
        store = std::make_unique<store::ContextStore>();
    }
    return std::make_unique<Platform>(std::move(store), options.bus_workers);
}

Platform::Platform(std::unique_ptr<store::ContextStore> store, std::size_t bus_workers)
    : bus_(bus_workers),
      store_(std::move(store)),
      validation_(bus_),
      interpretation_(bus_),
      persistence_(bus_, *store_) {}

Platform::~Platform() { bus_.wait_idle(std::chrono::minutes(1)); }

Expected<std::string, bus::BusError> Platform::submit(inputs::AnalysisRequest request) {
    auto id = new_correlation_id();
    if (request.submitted_at == Timestamp{}) request.submitted_at = now_utc();
    auto seq = bus_.publish(id, bus::AnalysisRequested{std::make_shared<const inputs::AnalysisRequest>(std::move(request))});
    if (!seq) return unexpected(std::move(seq.error()));
    return id;
}

}  // namespace smellhunter::services
