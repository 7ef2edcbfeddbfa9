#include "smellhunter/dsl/interpreter.hpp"

namespace smellhunter::dsl {

std::string EvalError::message() const {
    if (kind == Kind::unresolved_threshold) return "unresolved threshold '$" + name + "'";
    return "unknown metric '" + name + "'";
}

std::string DetectError::message() const {
    if (eval) return eval->message();
    std::string out = "missing thresholds:";
    for (const auto& r : unresolved) out += " " + r.name;
    return out;
}

bool compare(double lhs, CmpOp op, double rhs) {
    switch (op) {
        case CmpOp::gt: return lhs > rhs;
        case CmpOp::ge: return lhs >= rhs;
        case CmpOp::lt: return lhs < rhs;
        case CmpOp::le: return lhs <= rhs;
        case CmpOp::eq: return lhs == rhs;
        case CmpOp::ne: return lhs != rhs;
    }
    return false;
}

namespace {

struct Evaluator {
    const MetricValues& metrics;
    std::optional<EvalError> error;

    double value(const Operand& op) {
        if (const auto* lit = std::get_if<Literal>(&op)) return lit->value;
        if (const auto* m = std::get_if<MetricRef>(&op)) {
            if (auto it = metrics.find(m->name); it != metrics.end()) return it->second;
            if (!error) error = EvalError{EvalError::Kind::unknown_metric, m->name};
            return 0;
        }
        const auto& t = std::get<ThresholdRef>(op);
        if (!error) error = EvalError{EvalError::Kind::unresolved_threshold, t.name};
        return 0;
    }

    bool eval(const Expr& e) {
        return std::visit(
            [&](const auto& n) -> bool {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, Or>) {
                    bool any = false;
                    for (const auto& c : n.children) any = eval(c) || any;
                    return any;
                } else if constexpr (std::is_same_v<N, And>) {
                    bool all = true;
                    for (const auto& c : n.children) all = eval(c) && all;
                    return all;
                } else if constexpr (std::is_same_v<N, Not>) {
                    return !eval(*n.operand);
                } else {
                    const double l = value(n.lhs);
                    const double r = value(n.rhs);
                    return compare(l, n.op, r);
                }
            },
            e.node);
    }
};

}  // namespace

Expected<bool, EvalError> evaluate(const Expr& condition, const MetricValues& metrics) {
    Evaluator ev{metrics, std::nullopt};
    bool result = ev.eval(condition);
    if (ev.error) return unexpected(std::move(*ev.error));
    return result;
}

}  // namespace smellhunter::dsl
