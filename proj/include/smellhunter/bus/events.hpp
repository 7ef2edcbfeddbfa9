#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "smellhunter/services/types.hpp"

namespace smellhunter::bus {

enum class EventKind {
    analysis_requested,
    validation_completed,
    validation_failed,
    interpretation_completed,
    persistence_completed,
};

std::string_view to_string(EventKind k);

struct AnalysisRequested {
    std::shared_ptr<const inputs::AnalysisRequest> request;
};

struct ValidationCompleted {
    std::shared_ptr<const services::ValidatedRequest> validated;
};

// Terminal. Also used for internal faults in later stages.
struct ValidationFailed {
    services::ValidationReport report;
    std::shared_ptr<const inputs::AnalysisRequest> request;
};

struct InterpretationCompleted {
    services::InterpretationResult result;
    std::shared_ptr<const services::ValidatedRequest> validated;
};

struct PersistenceCompleted {
    std::string correlation_id;
    std::vector<std::string> record_ids;
};

// Alternative index matches EventKind.
using Payload = std::variant<AnalysisRequested, ValidationCompleted, ValidationFailed, InterpretationCompleted,
                             PersistenceCompleted>;

inline EventKind kind_of(const Payload& p) { return static_cast<EventKind>(p.index()); }

struct EventEnvelope {
    std::string correlation_id;
    std::uint64_t sequence = 0;
    EventKind kind = EventKind::analysis_requested;
    std::shared_ptr<const Payload> payload;
    Timestamp emitted_at{};

    template <class T>
    const T* as() const {
        return payload ? std::get_if<T>(payload.get()) : nullptr;
    }
};

}  // namespace smellhunter::bus
