#include "smellhunter/dsl/lexer.hpp"

namespace smellhunter::dsl {

namespace {

bool ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

TokenKind keyword_or_ident(std::string_view w) {
    if (w == "smell") return TokenKind::kw_smell;
    if (w == "severity") return TokenKind::kw_severity;
    if (w == "when") return TokenKind::kw_when;
    if (w == "and") return TokenKind::kw_and;
    if (w == "or") return TokenKind::kw_or;
    if (w == "not") return TokenKind::kw_not;
    return TokenKind::ident;
}

class Scanner {
public:
    explicit Scanner(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            if (pos_ >= src_.size()) {
                out.push_back(Token{TokenKind::end, {}, here()});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    Location here() const { return {line_, col_}; }

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
            // count code points, not UTF-8 continuation bytes
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    Token make(TokenKind kind, std::size_t start, Location loc) {
        return Token{kind, src_.substr(start, pos_ - start), loc};
    }

    Token next() {
        const Location loc = here();
        const std::size_t start = pos_;
        const char c = peek();

        if (ident_start(c)) {
            while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
            auto t = make(TokenKind::ident, start, loc);
            t.kind = keyword_or_ident(t.text);
            return t;
        }
        if (digit(c) || ((c == '-' || c == '+') && digit(peek(1)))) {
            advance();
            while (digit(peek())) advance();
            if (peek() == '.') {
                if (!digit(peek(1))) {
                    advance();
                    return make(TokenKind::invalid, start, loc);
                }
                advance();
                while (digit(peek())) advance();
            }
            // a number glued to an identifier ("12abc") is not a number
            if (ident_start(peek())) {
                while (ident_char(peek())) advance();
                return make(TokenKind::invalid, start, loc);
            }
            return make(TokenKind::number, start, loc);
        }

        auto single = [&](TokenKind k) {
            advance();
            return make(k, start, loc);
        };
        auto cmp = [&](CmpOp op, std::size_t len) {
            for (std::size_t i = 0; i < len; ++i) advance();
            auto t = make(TokenKind::cmp, start, loc);
            t.op = op;
            return t;
        };

        switch (c) {
            case '{': return single(TokenKind::lbrace);
            case '}': return single(TokenKind::rbrace);
            case '(': return single(TokenKind::lparen);
            case ')': return single(TokenKind::rparen);
            case '$': return single(TokenKind::dollar);
            case '>': return peek(1) == '=' ? cmp(CmpOp::ge, 2) : cmp(CmpOp::gt, 1);
            case '<': return peek(1) == '=' ? cmp(CmpOp::le, 2) : cmp(CmpOp::lt, 1);
            case '=':
                if (peek(1) == '=') return cmp(CmpOp::eq, 2);
                break;
            case '!':
                if (peek(1) == '=') return cmp(CmpOp::ne, 2);
                break;
            default: break;
        }
        // swallow one whole UTF-8 sequence so the diagnostic shows a full character
        advance();
        while (pos_ < src_.size() && (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80) advance();
        return make(TokenKind::invalid, start, loc);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Scanner(source).run(); }

std::string describe(const Token& t) {
    switch (t.kind) {
        case TokenKind::end: return "end of input";
        case TokenKind::invalid: return "invalid token '" + std::string(t.text) + "'";
        default: return "'" + std::string(t.text) + "'";
    }
}

bool is_identifier(std::string_view text) {
    if (text.empty() || !ident_start(text.front())) return false;
    for (char c : text)
        if (!ident_char(c)) return false;
    return true;
}

}  // namespace smellhunter::dsl
