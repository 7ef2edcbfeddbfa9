#include "smellhunter/services/validation_service.hpp"

#include "smellhunter/dsl/parser.hpp"
#include "smellhunter/inputs/parse.hpp"

namespace smellhunter::services {

std::string_view to_string(DiagnosticSource s) {
    switch (s) {
        case DiagnosticSource::script: return "script";
        case DiagnosticSource::metrics: return "metrics";
        case DiagnosticSource::thresholds: return "thresholds";
        case DiagnosticSource::metadata: return "metadata";
        case DiagnosticSource::cross_ref: return "crossRef";
    }
    return "script";
}

namespace {

Position from_input(const inputs::InputError& e) {
    Position p;
    p.line = e.line;
    p.column = e.column;
    p.field = e.field;
    if (e.row && !p.line) p.line = e.row;
    return p;
}

void add_input_errors(DiagnosticSource source, const inputs::InputErrors& errors, ValidationReport& report) {
    for (const auto& e : errors) report.diagnostics.push_back({source, e.describe(), from_input(e)});
}

}  // namespace

Expected<ValidatedRequest, ValidationReport> validate(std::shared_ptr<const inputs::AnalysisRequest> request) {
    ValidationReport report;
    report.outcome = ValidationReport::Outcome::rejected;
    const auto& req = *request;

    // (a) script
    auto parsed = dsl::parse_script(req.script_source);
    dsl::References refs;
    if (parsed) {
        refs = dsl::collect_references(*parsed);
    } else {
        for (const auto& d : parsed.error())
            report.diagnostics.push_back({DiagnosticSource::script,
                                          std::string(dsl::to_string(d.kind)) + ": " + d.message,
                                          Position{d.line, d.column, std::nullopt}});
        refs = dsl::scan_references(req.script_source);
    }

    // structural invariants of the other inputs
    add_input_errors(DiagnosticSource::metrics, inputs::check_metric_table(req.table), report);
    add_input_errors(DiagnosticSource::thresholds, inputs::check_thresholds(req.thresholds), report);

    // (b) thresholds, (c) metrics
    std::set<std::string> metrics, thresholds, reported;
    for (const auto& t : refs.thresholds) {
        thresholds.insert(t.name);
        if (!req.thresholds.entries.count(t.name) && reported.insert("$" + t.name).second)
            report.diagnostics.push_back({DiagnosticSource::cross_ref,
                                          "threshold '$" + t.name + "' is not defined in the threshold configuration",
                                          Position{t.loc.line, t.loc.column, t.name}});
    }
    for (const auto& m : refs.metrics) {
        metrics.insert(m.name);
        if (!req.table.column_index(m.name) && reported.insert(m.name).second)
            report.diagnostics.push_back({DiagnosticSource::cross_ref,
                                          "metric '" + m.name + "' is not a column of the metric table",
                                          Position{m.loc.line, m.loc.column, m.name}});
    }

    // (d) metadata
    add_input_errors(DiagnosticSource::metadata, inputs::check_metadata(req.context), report);

    if (!report.diagnostics.empty()) return unexpected(std::move(report));
    return ValidatedRequest{std::move(request), std::move(*parsed), std::move(metrics), std::move(thresholds)};
}

ValidationService::ValidationService(bus::SmellBus& bus) : bus_(bus) {
    auto sub = bus_.subscribe("validation-service", {bus::EventKind::analysis_requested},
                              [this](const bus::EventEnvelope& e) { on_analysis_requested(e); });
    subscription_ = std::move(sub.value());
}

void ValidationService::on_analysis_requested(const bus::EventEnvelope& event) {
    const auto* ev = event.as<bus::AnalysisRequested>();
    if (!ev) return;
    ++handled_;
    bus::Payload next;
    try {
        auto result = validate(ev->request);
        if (result) {
            next = bus::ValidationCompleted{std::make_shared<const ValidatedRequest>(std::move(*result))};
        } else {
            next = bus::ValidationFailed{std::move(result.error()), ev->request};
        }
    } catch (const std::exception& e) {
        ValidationReport report{ValidationReport::Outcome::rejected,
                                {{DiagnosticSource::cross_ref, "internal", std::nullopt}}};
        bus_.annotate(event.correlation_id, "validation-service", e.what());
        next = bus::ValidationFailed{std::move(report), ev->request};
    }
    auto published = bus_.publish(event.correlation_id, std::move(next));
    if (!published) bus_.annotate(event.correlation_id, "validation-service", published.error().message);
}

}  // namespace smellhunter::services
