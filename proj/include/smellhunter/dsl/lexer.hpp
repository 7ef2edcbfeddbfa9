#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "smellhunter/dsl/ast.hpp"

namespace smellhunter::dsl {

enum class TokenKind {
    kw_smell,
    kw_severity,
    kw_when,
    kw_and,
    kw_or,
    kw_not,
    ident,
    dollar,
    number,
    cmp,
    lbrace,
    rbrace,
    lparen,
    rparen,
    invalid,
    end,
};

struct Token {
    TokenKind kind = TokenKind::end;
    std::string_view text;
    Location loc{};
    CmpOp op = CmpOp::gt;  // valid when kind == cmp
};

// Tokenizes the whole input. Always ends with a single `end` token positioned at end-of-input.
// Characters that cannot start a token become `invalid` tokens; lexing never fails.
std::vector<Token> tokenize(std::string_view source);

std::string describe(const Token& t);

bool is_identifier(std::string_view text);

}  // namespace smellhunter::dsl
