#pragma once

#include <atomic>

#include "smellhunter/bus/smell_bus.hpp"
#include "smellhunter/services/types.hpp"

namespace smellhunter::services {

// Second stage: ValidationCompleted -> InterpretationCompleted.
// An interpreter fault ends the run with ValidationFailed carrying an "internal" diagnostic.
class InterpretationService {
public:
    explicit InterpretationService(bus::SmellBus& bus);

    void on_validation_completed(const bus::EventEnvelope& event);

    std::uint64_t invocations() const { return invocations_; }

private:
    bus::SmellBus& bus_;
    std::atomic<std::uint64_t> invocations_{0};
    bus::Subscription subscription_;
};

InterpretationResult interpret(const std::string& correlation_id, const ValidatedRequest& validated);

}  // namespace smellhunter::services
