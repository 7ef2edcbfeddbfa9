#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "smellhunter/time.hpp"

namespace smellhunter::inputs {

struct MetricRow {
    std::string entity_id;
    std::vector<double> values;  // aligned with MetricTable::columns

    friend bool operator==(const MetricRow&, const MetricRow&) = default;
};

// Per-entity metric values. Rectangular: every row carries one value per column.
struct MetricTable {
    std::vector<std::string> columns;
    std::vector<MetricRow> rows;

    std::optional<std::size_t> column_index(std::string_view name) const;
    std::unordered_map<std::string, double> row_values(std::size_t row) const;

    friend bool operator==(const MetricTable&, const MetricTable&) = default;
};

struct ThresholdConfig {
    std::map<std::string, double, std::less<>> entries;

    friend bool operator==(const ThresholdConfig&, const ThresholdConfig&) = default;
};

struct GeoPoint {
    double latitude = 0;
    double longitude = 0;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct ContextMetadata {
    std::string user_id;
    std::string org_id;
    std::string project_id;
    std::string file_path;
    std::string language;
    std::optional<GeoPoint> location;

    friend bool operator==(const ContextMetadata&, const ContextMetadata&) = default;
};

struct AnalysisRequest {
    std::string script_source;
    MetricTable table;
    ThresholdConfig thresholds;
    ContextMetadata context;
    Timestamp submitted_at{};
    std::optional<std::string> label;  // client-supplied script name for history views
};

}  // namespace smellhunter::inputs
