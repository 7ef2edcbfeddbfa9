#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smellhunter/dsl/ast.hpp"
#include "smellhunter/dsl/interpreter.hpp"
#include "smellhunter/inputs/model.hpp"
#include "smellhunter/time.hpp"

namespace smellhunter::services {

enum class DiagnosticSource { script, metrics, thresholds, metadata, cross_ref };

std::string_view to_string(DiagnosticSource s);

struct Position {
    std::optional<std::size_t> line;
    std::optional<std::size_t> column;
    std::optional<std::string> field;  // CSV column or document key
};

struct ValidationDiagnostic {
    DiagnosticSource source = DiagnosticSource::script;
    std::string detail;
    std::optional<Position> position;
};

struct ValidationReport {
    enum class Outcome { accepted, rejected };
    Outcome outcome = Outcome::accepted;
    std::vector<ValidationDiagnostic> diagnostics;  // non-empty iff rejected
};

struct ValidatedRequest {
    std::shared_ptr<const inputs::AnalysisRequest> request;
    dsl::SmellScript script;
    std::set<std::string> referenced_metrics;
    std::set<std::string> referenced_thresholds;
};

struct InterpretationResult {
    std::string correlation_id;
    std::vector<dsl::Detection> detections;
    std::size_t evaluated_entities = 0;
    std::size_t evaluated_rules = 0;
    Timestamp started_at{};
    Timestamp finished_at{};
};

}  // namespace smellhunter::services
