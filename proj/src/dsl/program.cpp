#include "program.hpp"

#include <algorithm>

namespace smellhunter::dsl::detail {

namespace {

struct Compiler {
    const inputs::MetricTable& table;
    Program prog;
    std::size_t height = 0;
    std::optional<EvalError> error;

    void push() { prog.max_stack = std::max(prog.max_stack, ++height); }

    void bind(const Operand& op, bool& is_column, std::uint32_t& column, double& value) {
        if (const auto* lit = std::get_if<Literal>(&op)) {
            value = lit->value;
            return;
        }
        if (const auto* m = std::get_if<MetricRef>(&op)) {
            if (auto idx = table.column_index(m->name)) {
                is_column = true;
                column = static_cast<std::uint32_t>(*idx);
            } else if (!error) {
                error = EvalError{EvalError::Kind::unknown_metric, m->name};
            }
            return;
        }
        if (!error) error = EvalError{EvalError::Kind::unresolved_threshold, std::get<ThresholdRef>(op).name};
    }

    void emit(const Expr& e) {
        std::visit(
            [&](const auto& n) {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, Or> || std::is_same_v<N, And>) {
                    for (const auto& c : n.children) emit(c);
                    Instr in;
                    in.op = std::is_same_v<N, Or> ? Instr::Op::any_of : Instr::Op::all_of;
                    in.count = static_cast<std::uint32_t>(n.children.size());
                    prog.code.push_back(in);
                    height -= n.children.size() - 1;
                } else if constexpr (std::is_same_v<N, Not>) {
                    emit(*n.operand);
                    Instr in;
                    in.op = Instr::Op::negate;
                    prog.code.push_back(in);
                } else {
                    Instr in;
                    in.op = Instr::Op::compare;
                    in.cmp = n.op;
                    bind(n.lhs, in.lhs_is_column, in.lhs_column, in.lhs_value);
                    bind(n.rhs, in.rhs_is_column, in.rhs_column, in.rhs_value);
                    prog.code.push_back(in);
                    push();
                }
            },
            e.node);
    }
};

}  // namespace

Expected<Program, EvalError> compile(const Expr& resolved, const inputs::MetricTable& table) {
    Compiler c{table, {}, 0, std::nullopt};
    c.emit(resolved);
    if (c.error) return unexpected(std::move(*c.error));
    return std::move(c.prog);
}

bool run(const Program& program, std::span<const double> row, std::span<std::uint8_t> stack) {
    std::size_t top = 0;
    for (const Instr& in : program.code) {
        switch (in.op) {
            case Instr::Op::compare: {
                const double l = in.lhs_is_column ? row[in.lhs_column] : in.lhs_value;
                const double r = in.rhs_is_column ? row[in.rhs_column] : in.rhs_value;
                stack[top++] = compare(l, in.cmp, r) ? 1 : 0;
                break;
            }
            case Instr::Op::all_of: {
                std::uint8_t v = 1;
                for (std::uint32_t i = 0; i < in.count; ++i) v &= stack[top - 1 - i];
                top -= in.count;
                stack[top++] = v;
                break;
            }
            case Instr::Op::any_of: {
                std::uint8_t v = 0;
                for (std::uint32_t i = 0; i < in.count; ++i) v |= stack[top - 1 - i];
                top -= in.count;
                stack[top++] = v;
                break;
            }
            case Instr::Op::negate: stack[top - 1] ^= 1; break;
        }
    }
    return stack[0] != 0;
}

}  // namespace smellhunter::dsl::detail
