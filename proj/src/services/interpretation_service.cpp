#include "smellhunter/services/interpretation_service.hpp"

#include <algorithm>
#include <stdexcept>

namespace smellhunter::services {

InterpretationResult interpret(const std::string& correlation_id, const ValidatedRequest& validated) {
    const auto& req = *validated.request;
    InterpretationResult result;
    result.correlation_id = correlation_id;
    result.started_at = now_utc();
    auto detections = dsl::detect(validated.script, req.table, req.thresholds);
    if (!detections) throw std::runtime_error(detections.error().message());
    result.detections = std::move(*detections);
    result.evaluated_entities = req.table.rows.size();
    result.evaluated_rules = validated.script.definitions.size();
    result.finished_at = std::max(now_utc(), result.started_at);
    return result;
}

InterpretationService::InterpretationService(bus::SmellBus& bus) : bus_(bus) {
    auto sub = bus_.subscribe("interpretation-service", {bus::EventKind::validation_completed},
                              [this](const bus::EventEnvelope& e) { on_validation_completed(e); });
    subscription_ = std::move(sub.value());
}

void InterpretationService::on_validation_completed(const bus::EventEnvelope& event) {
    const auto* ev = event.as<bus::ValidationCompleted>();
    if (!ev) return;
    ++invocations_;
    bus::Payload next;
    try {
        next = bus::InterpretationCompleted{interpret(event.correlation_id, *ev->validated), ev->validated};
    } catch (const std::exception& e) {
        ValidationReport report{ValidationReport::Outcome::rejected,
                                {{DiagnosticSource::cross_ref, std::string("internal: ") + e.what(), std::nullopt}}};
        next = bus::ValidationFailed{std::move(report), ev->validated->request};
    }
    auto published = bus_.publish(event.correlation_id, std::move(next));
    if (!published) bus_.annotate(event.correlation_id, "interpretation-service", published.error().message);
}

}  // namespace smellhunter::services
