#include "smellhunter/dsl/parser.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "smellhunter/dsl/lexer.hpp"

namespace smellhunter::dsl {

std::string_view to_string(DiagnosticKind k) {
    switch (k) {
        case DiagnosticKind::syntax: return "syntax";
        case DiagnosticKind::duplicate_definition: return "duplicateDefinition";
        case DiagnosticKind::empty_script: return "emptyScript";
    }
    return "syntax";
}

namespace {

struct SyntaxError {
    Location loc;
    std::string message;
};

bool is_word(TokenKind k) {
    switch (k) {
        case TokenKind::ident:
        case TokenKind::kw_smell:
        case TokenKind::kw_severity:
        case TokenKind::kw_when:
        case TokenKind::kw_and:
        case TokenKind::kw_or:
        case TokenKind::kw_not: return true;
        default: return false;
    }
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    Expected<SmellScript, std::vector<ParseDiagnostic>> run() {
        std::vector<ParseDiagnostic> diags;
        SmellScript script;

        if (cur().kind == TokenKind::end) {
            diags.push_back({DiagnosticKind::empty_script, cur().loc.line, cur().loc.column,
                             "script contains no smell definitions"});
            return unexpected(std::move(diags));
        }

        std::set<std::string, std::less<>> seen;
        while (cur().kind != TokenKind::end) {
            try {
                auto def = definition();
                if (!seen.insert(def.name).second) {
                    diags.push_back({DiagnosticKind::duplicate_definition, def.loc.line, def.loc.column,
                                     "duplicate smell definition '" + def.name + "'"});
                }
                script.definitions.push_back(std::move(def));
            } catch (const SyntaxError& e) {
                diags.push_back({DiagnosticKind::syntax, e.loc.line, e.loc.column, e.message});
                recover();
            }
        }

        if (!diags.empty()) return unexpected(std::move(diags));
        return script;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    const Token& bump() {
        const Token& t = toks_[pos_];
        if (t.kind != TokenKind::end) ++pos_;
        return t;
    }

    [[noreturn]] void fail(const std::string& expected) const {
        throw SyntaxError{cur().loc, "expected " + expected + " but found " + describe(cur())};
    }

    const Token& expect(TokenKind k, const char* what) {
        if (cur().kind != k) fail(what);
        return bump();
    }

    // skip to the next `smell` keyword; always makes progress past the failed definition's start
    void recover() {
        if (pos_ == def_start_ && cur().kind != TokenKind::end) bump();
        while (cur().kind != TokenKind::end && cur().kind != TokenKind::kw_smell) bump();
    }

    SmellDefinition definition() {
        depth_ = 0;
        def_start_ = pos_;
        SmellDefinition def;
        def.loc = cur().loc;
        expect(TokenKind::kw_smell, "'smell'");
        const Token& name = expect(TokenKind::ident, "smell name");
        def.name = std::string(name.text);
        def.loc = name.loc;
        expect(TokenKind::lbrace, "'{'");
        if (cur().kind == TokenKind::kw_severity) {
            bump();
            auto sev = is_word(cur().kind) ? parse_severity(cur().text) : std::nullopt;
            if (!sev) fail("severity level (low, medium, high, critical)");
            bump();
            def.severity = *sev;
        }
        expect(TokenKind::kw_when, "'when'");
        def.condition = expr();
        expect(TokenKind::rbrace, "'}'");
        return def;
    }

    Expr expr() {
        std::vector<Expr> items;
        items.push_back(and_expr());
        while (cur().kind == TokenKind::kw_or) {
            bump();
            items.push_back(and_expr());
        }
        if (items.size() == 1) return std::move(items.front());
        return make_or(std::move(items));
    }

    Expr and_expr() {
        std::vector<Expr> items;
        items.push_back(unary());
        while (cur().kind == TokenKind::kw_and) {
            bump();
            items.push_back(unary());
        }
        if (items.size() == 1) return std::move(items.front());
        return make_and(std::move(items));
    }

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : p(p) {
            if (++p.depth_ > kMaxNesting)
                throw SyntaxError{p.cur().loc, "expression nesting exceeds " + std::to_string(kMaxNesting)};
        }
        ~DepthGuard() { --p.depth_; }
        Parser& p;
    };

    Expr unary() {
        DepthGuard guard(*this);
        if (cur().kind == TokenKind::kw_not) {
            bump();
            return make_not(unary());
        }
        if (cur().kind == TokenKind::lparen) {
            bump();
            Expr inner = expr();
            expect(TokenKind::rparen, "')'");
            return inner;
        }
        return comparison();
    }

    Expr comparison() {
        Operand lhs = operand();
        if (cur().kind != TokenKind::cmp) fail("comparison operator");
        CmpOp op = bump().op;
        Operand rhs = operand();
        if (cur().kind == TokenKind::cmp)
            throw SyntaxError{cur().loc, "comparisons cannot be chained; use 'and'"};
        return make_compare(std::move(lhs), op, std::move(rhs));
    }

    Operand operand() {
        const Token& t = cur();
        switch (t.kind) {
            case TokenKind::ident: bump(); return MetricRef{std::string(t.text), t.loc};
            case TokenKind::dollar: {
                bump();
                if (!is_word(cur().kind)) fail("threshold name after '$'");
                const Token& name = bump();
                return ThresholdRef{std::string(name.text), t.loc};
            }
            case TokenKind::number: {
                bump();
                std::string_view text = t.text;
                if (!text.empty() && text.front() == '+') text.remove_prefix(1);
                double v = 0;
                auto r = std::from_chars(text.data(), text.data() + text.size(), v);
                if (r.ec != std::errc{} || !std::isfinite(v))
                    throw SyntaxError{t.loc, "number out of range: " + std::string(t.text)};
                return Literal{v};
            }
            default: fail("metric, $threshold or number");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::size_t depth_ = 0;
    std::size_t def_start_ = 0;
};

}  // namespace

Expected<SmellScript, std::vector<ParseDiagnostic>> parse_script(std::string_view source) {
    return Parser(tokenize(source)).run();
}

std::optional<std::string> first_smell_name(std::string_view source) {
    auto toks = tokenize(source);
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
        if (toks[i].kind == TokenKind::kw_smell && toks[i + 1].kind == TokenKind::ident)
            return std::string(toks[i + 1].text);
    }
    return std::nullopt;
}

}  // namespace smellhunter::dsl

namespace smellhunter::dsl {

References scan_references(std::string_view source) {
    References out;
    auto toks = tokenize(source);
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const auto& t = toks[i];
        if (t.kind == TokenKind::dollar && i + 1 < toks.size() && is_word(toks[i + 1].kind)) {
            out.thresholds.push_back({std::string(toks[i + 1].text), t.loc});
            ++i;
        } else if (t.kind == TokenKind::ident) {
            const TokenKind prev = i ? toks[i - 1].kind : TokenKind::end;
            if (prev != TokenKind::kw_smell && prev != TokenKind::kw_severity)
                out.metrics.push_back({std::string(t.text), t.loc});
        }
    }
    return out;
}

}  // namespace smellhunter::dsl
