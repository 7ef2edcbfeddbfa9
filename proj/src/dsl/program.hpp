#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smellhunter/dsl/interpreter.hpp"

namespace smellhunter::dsl::detail {

// A threshold-free condition lowered to postfix form with metric names bound to table columns.
struct Instr {
    enum class Op : std::uint8_t { compare, all_of, any_of, negate };
    Op op = Op::compare;
    CmpOp cmp = CmpOp::gt;
    bool lhs_is_column = false;
    bool rhs_is_column = false;
    std::uint32_t count = 0;  // operand count for all_of / any_of
    std::uint32_t lhs_column = 0;
    std::uint32_t rhs_column = 0;
    double lhs_value = 0;
    double rhs_value = 0;
};

struct Program {
    std::vector<Instr> code;
    std::size_t max_stack = 0;
};

Expected<Program, EvalError> compile(const Expr& resolved, const inputs::MetricTable& table);

// `stack` must hold at least program.max_stack entries.
bool run(const Program& program, std::span<const double> row, std::span<std::uint8_t> stack);

}  // namespace smellhunter::dsl::detail
