#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "smellhunter/dsl/ast.hpp"
#include "smellhunter/inputs/model.hpp"
#include "smellhunter/time.hpp"

namespace smellhunter::store {

struct DetectionRecord {
    std::string record_id;
    std::string correlation_id;
    std::string entity_id;
    std::string smell_name;
    dsl::Severity severity = dsl::Severity::medium;
    inputs::ContextMetadata context;
    Timestamp detected_at{};

    friend bool operator==(const DetectionRecord&, const DetectionRecord&) = default;
};

enum class RunResult { smell_detected, no_smell, failed };
enum class RunStatus { completed, failed };

std::string_view to_string(RunResult r);
std::string_view to_string(RunStatus s);
std::optional<RunResult> parse_run_result(std::string_view s);
std::optional<RunStatus> parse_run_status(std::string_view s);

struct ExecutionRecord {
    std::string correlation_id;
    Timestamp executed_at{};
    std::string script_name;
    RunResult result = RunResult::no_smell;
    RunStatus status = RunStatus::completed;
    std::size_t detection_count = 0;
    std::string project_id;
    std::string org_id;

    friend bool operator==(const ExecutionRecord&, const ExecutionRecord&) = default;
};

// result == smell_detected <=> detection_count > 0 && status == completed; failed => count 0;
// result == failed <=> status == failed.
bool consistent(const ExecutionRecord& r);

struct BoundingBox {
    double min_lat = -90;
    double max_lat = 90;
    double min_lon = -180;
    double max_lon = 180;

    bool contains(const inputs::GeoPoint& p) const {
        return p.latitude >= min_lat && p.latitude <= max_lat && p.longitude >= min_lon && p.longitude <= max_lon;
    }
};

// Half-open [from, to).
struct TimeRange {
    Timestamp from{};
    Timestamp to{};
};

// Conjunction of the clauses that are present.
struct DetectionFilter {
    std::optional<std::string> smell_name;
    std::optional<dsl::Severity> severity;
    std::optional<std::string> org_id;
    std::optional<std::string> project_id;
    std::optional<BoundingBox> bbox;
    std::optional<TimeRange> time_range;
};

inline constexpr std::size_t kMaxPageLimit = 1000;

struct PageRequest {
    std::size_t offset = 0;
    std::size_t limit = 100;
};

struct QueryError {
    std::string message;
};

std::optional<QueryError> check_filter(const DetectionFilter& f);
std::optional<QueryError> check_page(const PageRequest& p);

bool matches(const DetectionFilter& f, const DetectionRecord& r);

}  // namespace smellhunter::store
