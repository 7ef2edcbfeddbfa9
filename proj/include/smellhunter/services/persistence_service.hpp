#pragma once

#include "smellhunter/bus/smell_bus.hpp"
#include "smellhunter/store/context_store.hpp"

namespace smellhunter::services {

// Final stage. InterpretationCompleted -> detection records + one execution record, then
// PersistenceCompleted. ValidationFailed -> one failed execution record (no further event).
class PersistenceService {
public:
    PersistenceService(bus::SmellBus& bus, store::ContextStore& store);

    void on_interpretation_completed(const bus::EventEnvelope& event);
    void on_validation_failed(const bus::EventEnvelope& event);

private:
    bus::SmellBus& bus_;
    store::ContextStore& store_;
    bus::Subscription subscription_;
};

// First definition name unless the client supplied a label.
std::string script_name(const inputs::AnalysisRequest& request);

}  // namespace smellhunter::services
