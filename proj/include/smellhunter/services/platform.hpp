#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "smellhunter/bus/smell_bus.hpp"
#include "smellhunter/services/interpretation_service.hpp"
#include "smellhunter/services/persistence_service.hpp"
#include "smellhunter/services/validation_service.hpp"
#include "smellhunter/store/context_store.hpp"

namespace smellhunter::services {

// 128-bit random id, lowercase hex.
std::string new_correlation_id();

// The server side in one object: bus, the three pipeline services and the store.
class Platform {
public:
    struct Options {
        std::optional<std::filesystem::path> store_dir;  // in-memory store when absent
        std::size_t bus_workers = 0;
    };

    static Expected<std::unique_ptr<Platform>, std::string> create(const Options& options);

    Platform(std::unique_ptr<store::ContextStore> store, std::size_t bus_workers);
    ~Platform();

    // Publishes AnalysisRequested under a fresh correlation id.
    Expected<std::string, bus::BusError> submit(inputs::AnalysisRequest request);

    bool await_terminal(const std::string& correlation_id, std::chrono::milliseconds timeout) const {
        return bus_.wait_terminal(correlation_id, timeout);
    }

    bus::SmellBus& bus() { return bus_; }
    const bus::SmellBus& bus() const { return bus_; }
    store::ContextStore& store() { return *store_; }
    const store::ContextStore& store() const { return *store_; }
    const InterpretationService& interpretation() const { return interpretation_; }
    const ValidationService& validation() const { return validation_; }

private:
    bus::SmellBus bus_;
    std::unique_ptr<store::ContextStore> store_;
    ValidationService validation_;
    InterpretationService interpretation_;
    PersistenceService persistence_;
};

}  // namespace smellhunter::services
