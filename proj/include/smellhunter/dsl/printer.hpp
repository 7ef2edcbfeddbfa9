#pragma once

#include <string>

#include "smellhunter/dsl/ast.hpp"

namespace smellhunter::dsl {

// Canonical source form. Severity is always written out; re-parsing yields an equal AST.
std::string pretty_print(const SmellScript& script);
std::string pretty_print(const Expr& expr);

// Shortest fixed-notation text that reads back to exactly `value`.
std::string format_number(double value);

}  // namespace smellhunter::dsl
