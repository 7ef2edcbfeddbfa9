#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smellhunter/dsl/ast.hpp"
#include "smellhunter/expected.hpp"

namespace smellhunter::dsl {

enum class DiagnosticKind { syntax, duplicate_definition, empty_script };

std::string_view to_string(DiagnosticKind k);

struct ParseDiagnostic {
    DiagnosticKind kind = DiagnosticKind::syntax;
    std::size_t line = 1;
    std::size_t column = 1;
    std::string message;
};

// Parenthesis / `not` nesting beyond this is rejected as a syntax error.
inline constexpr std::size_t kMaxNesting = 256;

// Grammar:
//   script     := definition+
//   definition := "smell" IDENT "{" ["severity" SEV] "when" expr "}"
//   expr       := and_expr ("or" and_expr)*
//   and_expr   := unary ("and" unary)*
//   unary      := "not" unary | "(" expr ")" | comparison
//   comparison := operand CMP operand          (non-associative)
//   operand    := IDENT | "$" IDENT | NUMBER
// On failure no partial AST is returned; all diagnostics found in one pass are.
Expected<SmellScript, std::vector<ParseDiagnostic>> parse_script(std::string_view source);

// Name following the first `smell` keyword, if any, even when the script is otherwise invalid.
std::optional<std::string> first_smell_name(std::string_view source);

}  // namespace smellhunter::dsl

namespace smellhunter::dsl {

// Token-level approximation of collect_references for scripts that do not parse:
// `$ word` is a threshold reference; any other identifier not naming a smell or severity is a metric.
References scan_references(std::string_view source);

}  // namespace smellhunter::dsl
