#include "smellhunter/dsl/ast.hpp"

#include <algorithm>

namespace smellhunter::dsl {

std::string_view to_string(Severity s) {
    switch (s) {
        case Severity::low: return "low";
        case Severity::medium: return "medium";
        case Severity::high: return "high";
        case Severity::critical: return "critical";
    }
    return "medium";
}

std::optional<Severity> parse_severity(std::string_view text) {
    if (text == "low") return Severity::low;
    if (text == "medium") return Severity::medium;
    if (text == "high") return Severity::high;
    if (text == "critical") return Severity::critical;
    return std::nullopt;
}

std::string_view to_string(CmpOp op) {
    switch (op) {
        case CmpOp::gt: return ">";
        case CmpOp::ge: return ">=";
        case CmpOp::lt: return "<";
        case CmpOp::le: return "<=";
        case CmpOp::eq: return "==";
        case CmpOp::ne: return "!=";
    }
    return "?";
}

Expr make_compare(Operand lhs, CmpOp op, Operand rhs) {
    return Expr{Compare{std::move(lhs), op, std::move(rhs)}};
}

Expr make_not(Expr operand) { return Expr{Not{Box<Expr>(std::move(operand))}}; }

Expr make_and(std::vector<Expr> children) { return Expr{And{std::move(children)}}; }

Expr make_or(std::vector<Expr> children) { return Expr{Or{std::move(children)}}; }

namespace {

void collect_operand(const Operand& op, References& out) {
    if (auto* m = std::get_if<MetricRef>(&op)) out.metrics.push_back(*m);
    else if (auto* t = std::get_if<ThresholdRef>(&op)) out.thresholds.push_back(*t);
}

void collect(const Expr& e, References& out) {
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, Or> || std::is_same_v<N, And>) {
                for (const auto& c : n.children) collect(c, out);
            } else if constexpr (std::is_same_v<N, Not>) {
                collect(*n.operand, out);
            } else {
                collect_operand(n.lhs, out);
                collect_operand(n.rhs, out);
            }
        },
        e.node);
}

}  // namespace

References collect_references(const Expr& e) {
    References out;
    collect(e, out);
    return out;
}

References collect_references(const SmellScript& s) {
    References out;
    for (const auto& d : s.definitions) collect(d.condition, out);
    return out;
}

std::size_t depth(const Expr& e) {
    return std::visit(
        [](const auto& n) -> std::size_t {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, Or> || std::is_same_v<N, And>) {
                std::size_t d = 0;
                for (const auto& c : n.children) d = std::max(d, depth(c));
                return d + 1;
            } else if constexpr (std::is_same_v<N, Not>) {
                return depth(*n.operand) + 1;
            } else {
                return 1;
            }
        },
        e.node);
}

}  // namespace smellhunter::dsl
