#include "smellhunter/dsl/printer.hpp"

#include <charconv>

namespace smellhunter::dsl {

std::string format_number(double value) {
    // fixed notation can need ~330 chars for tiny magnitudes
    char buf[400];
    auto r = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    return std::string(buf, r.ptr);
}

namespace {

int precedence(const Expr& e) {
    switch (e.node.index()) {
        case 0: return 1;  // or
        case 1: return 2;  // and
        case 2: return 3;  // not
        default: return 4;
    }
}

void print_operand(const Operand& op, std::string& out) {
    std::visit(
        [&](const auto& o) {
            using O = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<O, MetricRef>) out += o.name;
            else if constexpr (std::is_same_v<O, ThresholdRef>) out += "$" + o.name;
            else out += format_number(o.value);
        },
        op);
}

void print(const Expr& e, std::string& out);

// Same-level children get parentheses so nesting survives a re-parse.
void print_child(const Expr& child, int parent_prec, std::string& out) {
    bool parens = precedence(child) <= parent_prec && precedence(child) < 3;
    if (parens) out += '(';
    print(child, out);
    if (parens) out += ')';
}

void print(const Expr& e, std::string& out) {
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, Or> || std::is_same_v<N, And>) {
                const int prec = std::is_same_v<N, Or> ? 1 : 2;
                const char* sep = std::is_same_v<N, Or> ? " or " : " and ";
                for (std::size_t i = 0; i < n.children.size(); ++i) {
                    if (i) out += sep;
                    print_child(n.children[i], prec, out);
                }
            } else if constexpr (std::is_same_v<N, Not>) {
                out += "not ";
                print_child(*n.operand, 2, out);
            } else {
                print_operand(n.lhs, out);
                out += ' ';
                out += to_string(n.op);
                out += ' ';
                print_operand(n.rhs, out);
            }
        },
        e.node);
}

}  // namespace

std::string pretty_print(const Expr& expr) {
    std::string out;
    print(expr, out);
    return out;
}

std::string pretty_print(const SmellScript& script) {
    std::string out;
    for (std::size_t i = 0; i < script.definitions.size(); ++i) {
        const auto& d = script.definitions[i];
        if (i) out += '\n';
        out += "smell " + d.name + " {\n";
        out += "  severity ";
        out += to_string(d.severity);
        out += "\n  when " + pretty_print(d.condition) + "\n}\n";
    }
    return out;
}

}  // namespace smellhunter::dsl
