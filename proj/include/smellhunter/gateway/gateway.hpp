#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "smellhunter/inputs/parse.hpp"
#include "smellhunter/services/platform.hpp"

namespace smellhunter::gateway {

enum class Stage { requested, validated, interpreted, persisted, failed };

std::string_view to_string(Stage s);

// Client-facing view of one run, derived only from its bus trace.
struct StatusView {
    std::string correlation_id;
    Stage stage = Stage::requested;
    std::optional<services::ValidationReport> diagnostics;  // present when failed
    std::optional<std::vector<dsl::Detection>> detections;  // present once interpreted
};

// nullopt for an empty trace. A halted run that never reached a terminal event reports `failed`
// with the halt note as its diagnostic.
std::optional<StatusView> status_from_trace(const std::vector<bus::EventEnvelope>& trace,
                                            const std::optional<bus::Annotation>& halt = std::nullopt);

nlohmann::json to_json(const StatusView& v);
nlohmann::json to_json(const services::ValidationReport& r);
nlohmann::json to_json(const inputs::InputError& e, std::string_view part);

struct Response {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

using Params = std::multimap<std::string, std::string>;

// Query-string encodings shared with the CLI and dashboard:
//   smell=<name> severity=<low|medium|high|critical> org=<id> project=<id>
//   bbox=<minLat>,<maxLat>,<minLon>,<maxLon> from=<timestamp> to=<timestamp>
//   offset=<n> (default 0) limit=<1..1000> (default 100)
// Timestamps use YYYY-MM-DDTHH:MM:SS[.ffffff]Z. Unknown or repeated keys are rejected.
Expected<store::DetectionFilter, std::string> filter_from_query(const Params& params);
Expected<store::PageRequest, std::string> page_from_query(const Params& params);
Params filter_to_query(const store::DetectionFilter& filter);

struct Limits {
    std::size_t payload_bytes = 8u << 20;
};

// Transport-independent request handling for the HTTP surface.
class Gateway {
public:
    Gateway(services::Platform& platform, Limits limits = {});

    // parts: script, metrics, thresholds, metadata (required) and label (optional).
    Response submit(const std::map<std::string, std::string>& parts);
    Response status(const std::string& correlation_id) const;
    Response trace(const std::string& correlation_id) const;
    Response detections(const Params& params) const;
    Response histogram(const Params& params) const;
    Response executions(const Params& params) const;

    const Limits& limits() const { return limits_; }

private:
    services::Platform& platform_;
    Limits limits_;
};

}  // namespace smellhunter::gateway
