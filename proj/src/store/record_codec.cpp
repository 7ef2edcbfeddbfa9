#include "smellhunter/store/record_codec.hpp"

#include <stdexcept>

namespace smellhunter::store {

using nlohmann::json;

std::string_view to_string(RunResult r) {
    switch (r) {
        case RunResult::smell_detected: return "smellDetected";
        case RunResult::no_smell: return "noSmell";
        case RunResult::failed: return "failed";
    }
    return "failed";
}

std::string_view to_string(RunStatus s) { return s == RunStatus::completed ? "completed" : "failed"; }

std::optional<RunResult> parse_run_result(std::string_view s) {
    if (s == "smellDetected") return RunResult::smell_detected;
    if (s == "noSmell") return RunResult::no_smell;
    if (s == "failed") return RunResult::failed;
    return std::nullopt;
}

std::optional<RunStatus> parse_run_status(std::string_view s) {
    if (s == "completed") return RunStatus::completed;
    if (s == "failed") return RunStatus::failed;
    return std::nullopt;
}

namespace {

Timestamp timestamp_field(const json& j, const char* key) {
    auto t = parse_timestamp(j.at(key).get<std::string>());
    if (!t) throw std::invalid_argument(std::string("bad timestamp in '") + key + "'");
    return *t;
}

}  // namespace

json to_json(const inputs::ContextMetadata& c) {
    json j = {{"user_id", c.user_id},     {"org_id", c.org_id},     {"project_id", c.project_id},
              {"file_path", c.file_path}, {"language", c.language}};
    if (c.location) {
        j["latitude"] = c.location->latitude;
        j["longitude"] = c.location->longitude;
    }
    return j;
}

json to_json(const DetectionRecord& r) {
    return {{"record_id", r.record_id},
            {"correlation_id", r.correlation_id},
            {"entity_id", r.entity_id},
            {"smell", r.smell_name},
            {"severity", std::string(dsl::to_string(r.severity))},
            {"context", to_json(r.context)},
            {"detected_at", format_timestamp(r.detected_at)}};
}

json to_json(const ExecutionRecord& r) {
    return {{"correlation_id", r.correlation_id},
            {"executed_at", format_timestamp(r.executed_at)},
            {"script", r.script_name},
            {"result", std::string(to_string(r.result))},
            {"status", std::string(to_string(r.status))},
            {"detection_count", r.detection_count},
            {"project_id", r.project_id},
            {"org_id", r.org_id}};
}

inputs::ContextMetadata context_from_json(const json& j) {
    inputs::ContextMetadata c;
    c.user_id = j.at("user_id").get<std::string>();
    c.org_id = j.at("org_id").get<std::string>();
    c.project_id = j.at("project_id").get<std::string>();
    c.file_path = j.at("file_path").get<std::string>();
    c.language = j.at("language").get<std::string>();
    if (j.contains("latitude") && j.contains("longitude"))
        c.location = inputs::GeoPoint{j.at("latitude").get<double>(), j.at("longitude").get<double>()};
    return c;
}

DetectionRecord detection_from_json(const json& j) {
    DetectionRecord r;
    r.record_id = j.at("record_id").get<std::string>();
    r.correlation_id = j.at("correlation_id").get<std::string>();
    r.entity_id = j.at("entity_id").get<std::string>();
    r.smell_name = j.at("smell").get<std::string>();
    auto sev = dsl::parse_severity(j.at("severity").get<std::string>());
    if (!sev) throw std::invalid_argument("bad severity");
    r.severity = *sev;
    r.context = context_from_json(j.at("context"));
    r.detected_at = timestamp_field(j, "detected_at");
    return r;
}

ExecutionRecord execution_from_json(const json& j) {
    ExecutionRecord r;
    r.correlation_id = j.at("correlation_id").get<std::string>();
    r.executed_at = timestamp_field(j, "executed_at");
    r.script_name = j.at("script").get<std::string>();
    auto result = parse_run_result(j.at("result").get<std::string>());
    auto status = parse_run_status(j.at("status").get<std::string>());
    if (!result || !status) throw std::invalid_argument("bad result/status");
    r.result = *result;
    r.status = *status;
    r.detection_count = j.at("detection_count").get<std::size_t>();
    r.project_id = j.value("project_id", "");
    r.org_id = j.value("org_id", "");
    return r;
}

}  // namespace smellhunter::store
