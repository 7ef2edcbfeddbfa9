#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smellhunter/expected.hpp"
#include "smellhunter/inputs/model.hpp"

namespace smellhunter::inputs {

enum class InputErrorKind {
    malformed,
    missing_header,
    missing_entity_id,
    invalid_identifier,
    duplicate_column,
    ragged_row,
    empty_entity_id,
    duplicate_entity,
    non_numeric,
    non_finite,
    duplicate_key,
    unknown_key,
    missing_key,
    empty_value,
    wrong_type,
    out_of_range,
    unpaired_coordinate,
};

std::string_view to_string(InputErrorKind k);

struct InputError {
    InputErrorKind kind = InputErrorKind::malformed;
    std::optional<std::size_t> row;     // CSV record number; the header is row 1
    std::optional<std::string> field;   // CSV column name or document key
    std::optional<std::size_t> line;    // 1-based text position, when known
    std::optional<std::size_t> column;
    std::string message;

    bool positioned() const { return row || field || line; }
    std::string describe() const;
};

using InputErrors = std::vector<InputError>;

// RFC-4180 CSV. First header cell must be `entity_id`; remaining header cells are metric identifiers.
Expected<MetricTable, InputErrors> parse_metric_table(std::string_view bytes);

// Flat object of identifier -> number.
Expected<ThresholdConfig, InputErrors> parse_thresholds(std::string_view bytes);

// Object with exactly the keys user_id, org_id, project_id, file_path, language and
// optionally latitude + longitude.
Expected<ContextMetadata, InputErrors> parse_metadata(std::string_view bytes);

std::string emit_metric_table(const MetricTable& table);
std::string emit_thresholds(const ThresholdConfig& config);
std::string emit_metadata(const ContextMetadata& meta);

// Invariant checks for values that did not come through the parsers above.
InputErrors check_metric_table(const MetricTable& table);
InputErrors check_thresholds(const ThresholdConfig& config);
InputErrors check_metadata(const ContextMetadata& meta);

}  // namespace smellhunter::inputs
