#include <set>

#include "smellhunter/dsl/interpreter.hpp"

namespace smellhunter::dsl {

namespace {

class Resolver {
public:
    explicit Resolver(const inputs::ThresholdConfig& cfg) : cfg_(cfg) {}

    Expr rewrite(const Expr& e) {
        return std::visit(
            [&](const auto& n) -> Expr {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, Or> || std::is_same_v<N, And>) {
                    N out;
                    out.children.reserve(n.children.size());
                    for (const auto& c : n.children) out.children.push_back(rewrite(c));
                    return Expr{std::move(out)};
                } else if constexpr (std::is_same_v<N, Not>) {
                    return make_not(rewrite(*n.operand));
                } else {
                    return make_compare(rewrite(n.lhs), n.op, rewrite(n.rhs));
                }
            },
            e.node);
    }

    Operand rewrite(const Operand& op) {
        const auto* t = std::get_if<ThresholdRef>(&op);
        if (!t) return op;
        if (auto it = cfg_.entries.find(t->name); it != cfg_.entries.end()) return Literal{it->second};
        if (reported_.insert(t->name).second) errors_.push_back({t->name, t->loc});
        return op;
    }

    std::vector<ResolutionError> errors_;

private:
    const inputs::ThresholdConfig& cfg_;
    std::set<std::string> reported_;
};

}  // namespace

Expected<SmellScript, std::vector<ResolutionError>> resolve_thresholds(const SmellScript& script,
                                                                       const inputs::ThresholdConfig& thresholds) {
    Resolver r(thresholds);
    SmellScript out;
    out.definitions.reserve(script.definitions.size());
    for (const auto& d : script.definitions)
        out.definitions.push_back(SmellDefinition{d.name, d.severity, r.rewrite(d.condition), d.loc});
    if (!r.errors_.empty()) return unexpected(std::move(r.errors_));
    return out;
}

}  // namespace smellhunter::dsl
