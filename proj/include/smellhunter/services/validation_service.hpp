#pragma once

#include <atomic>

#include "smellhunter/bus/smell_bus.hpp"
#include "smellhunter/expected.hpp"
#include "smellhunter/services/types.hpp"

namespace smellhunter::services {

// Accepted iff the script parses, every `$NAME` exists in the threshold config, every metric the
// script names is a table column, and table/threshold/metadata invariants hold. All failures are
// collected into a single report.
Expected<ValidatedRequest, ValidationReport> validate(std::shared_ptr<const inputs::AnalysisRequest> request);

// First pipeline stage: AnalysisRequested -> ValidationCompleted | ValidationFailed.
class ValidationService {
public:
    explicit ValidationService(bus::SmellBus& bus);

    void on_analysis_requested(const bus::EventEnvelope& event);
    std::uint64_t handled() const { return handled_; }

private:
    bus::SmellBus& bus_;
    std::atomic<std::uint64_t> handled_{0};
    bus::Subscription subscription_;
};

}  // namespace smellhunter::services
