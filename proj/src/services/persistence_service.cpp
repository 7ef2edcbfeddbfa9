#include "smellhunter/services/persistence_service.hpp"

#include "smellhunter/dsl/parser.hpp"

namespace smellhunter::services {

std::string script_name(const inputs::AnalysisRequest& request) {
    if (request.label && !request.label->empty()) return *request.label;
    if (auto name = dsl::first_smell_name(request.script_source)) return *name;
    return "(unnamed)";
}

namespace {

store::ExecutionRecord execution_for(const std::string& correlation_id, const inputs::AnalysisRequest& req) {
    store::ExecutionRecord e;
    e.correlation_id = correlation_id;
    e.executed_at = now_utc();
    e.script_name = script_name(req);
    e.project_id = req.context.project_id;
    e.org_id = req.context.org_id;
    return e;
}

}  // namespace

PersistenceService::PersistenceService(bus::SmellBus& bus, store::ContextStore& store) : bus_(bus), store_(store) {
    auto sub = bus_.subscribe("persistence-service",
                              {bus::EventKind::interpretation_completed, bus::EventKind::validation_failed},
                              [this](const bus::EventEnvelope& e) {
                                  if (e.kind == bus::EventKind::interpretation_completed)
                                      on_interpretation_completed(e);
                                  else
                                      on_validation_failed(e);
                              });
    subscription_ = std::move(sub.value());
}

void PersistenceService::on_interpretation_completed(const bus::EventEnvelope& event) {
    const auto* ev = event.as<bus::InterpretationCompleted>();
    if (!ev) return;
    const auto& req = *ev->validated->request;

    auto exec = execution_for(event.correlation_id, req);
    const auto& found = ev->result.detections;
    exec.result = found.empty() ? store::RunResult::no_smell : store::RunResult::smell_detected;
    exec.status = store::RunStatus::completed;

    std::vector<store::DetectionRecord> records;
    records.reserve(found.size());
    for (const auto& d : found) {
        store::DetectionRecord r;
        r.correlation_id = event.correlation_id;
        r.entity_id = d.entity_id;
        r.smell_name = d.smell_name;
        r.severity = d.severity;
        r.context = req.context;
        r.detected_at = ev->result.finished_at;
        records.push_back(std::move(r));
    }

    auto ids = store_.append_run(exec, std::move(records));
    if (!ids) {
        exec.result = store::RunResult::failed;
        exec.status = store::RunStatus::failed;
        auto retry = store_.append_run(exec, {});
        if (!retry)
            bus_.annotate(event.correlation_id, "persistence-service",
                          "failed execution record not written: " + retry.error().message);
        bus_.halt(event.correlation_id, "persistence-service", "write failed: " + ids.error().message);
        return;
    }
    auto published = bus_.publish(event.correlation_id, bus::PersistenceCompleted{event.correlation_id, *ids});
    if (!published) bus_.annotate(event.correlation_id, "persistence-service", published.error().message);
}

void PersistenceService::on_validation_failed(const bus::EventEnvelope& event) {
    const auto* ev = event.as<bus::ValidationFailed>();
    if (!ev || !ev->request) return;
    auto exec = execution_for(event.correlation_id, *ev->request);
    exec.result = store::RunResult::failed;
    exec.status = store::RunStatus::failed;
    auto ok = store_.append_run(exec, {});
    if (!ok) bus_.annotate(event.correlation_id, "persistence-service", "write failed: " + ok.error().message);
}

}  // namespace smellhunter::services
