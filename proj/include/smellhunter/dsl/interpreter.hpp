#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "smellhunter/dsl/ast.hpp"
#include "smellhunter/expected.hpp"
#include "smellhunter/inputs/model.hpp"

namespace smellhunter::dsl {

struct ResolutionError {
    std::string name;
    Location loc{};

    friend bool operator==(const ResolutionError& a, const ResolutionError& b) { return a.name == b.name; }
};

// Replaces every `$NAME` with the configured literal. Pure: the input is not modified.
// Every missing name is reported once, in order of first occurrence.
Expected<SmellScript, std::vector<ResolutionError>> resolve_thresholds(const SmellScript& script,
                                                                       const inputs::ThresholdConfig& thresholds);

struct EvalError {
    enum class Kind { unknown_metric, unresolved_threshold };
    Kind kind = Kind::unknown_metric;
    std::string name;

    std::string message() const;
    friend bool operator==(const EvalError&, const EvalError&) = default;
};

using MetricValues = std::unordered_map<std::string, double>;

// Strict evaluation: every child is evaluated, so a missing metric is reported even
// when an earlier sibling already decides the result.
Expected<bool, EvalError> evaluate(const Expr& condition, const MetricValues& metrics);

bool compare(double lhs, CmpOp op, double rhs);

struct Detection {
    std::string entity_id;
    std::string smell_name;
    Severity severity = Severity::medium;

    friend bool operator==(const Detection&, const Detection&) = default;
};

struct DetectError {
    std::vector<ResolutionError> unresolved;
    std::optional<EvalError> eval;

    std::string message() const;
};

// One detection per (row, definition) pair whose condition holds, ordered by row then definition.
// Rows are evaluated in parallel.
Expected<std::vector<Detection>, DetectError> detect(const SmellScript& script, const inputs::MetricTable& table,
                                                     const inputs::ThresholdConfig& thresholds);

// Single-threaded reference that evaluates the AST row by row through `evaluate`.
Expected<std::vector<Detection>, DetectError> detect_serial(const SmellScript& script,
                                                            const inputs::MetricTable& table,
                                                            const inputs::ThresholdConfig& thresholds);

}  // namespace smellhunter::dsl
