#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace smellhunter::dsl {

enum class Severity { low, medium, high, critical };

std::string_view to_string(Severity s);
std::optional<Severity> parse_severity(std::string_view text);

enum class CmpOp { gt, ge, lt, le, eq, ne };

std::string_view to_string(CmpOp op);

// 1-based position in the script text. Not part of structural equality.
struct Location {
    std::size_t line = 0;
    std::size_t column = 0;
};

// Heap-allocated value with deep-copy semantics; gives recursive variants value semantics.
template <class T>
class Box {
public:
    Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
    Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& other) {
        if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;
    ~Box() = default;

    T& operator*() { return *ptr_; }
    const T& operator*() const { return *ptr_; }
    T* operator->() { return ptr_.get(); }
    const T* operator->() const { return ptr_.get(); }

private:
    std::unique_ptr<T> ptr_;
};

struct MetricRef {
    std::string name;
    Location loc{};
    friend bool operator==(const MetricRef& a, const MetricRef& b) { return a.name == b.name; }
};

struct ThresholdRef {
    std::string name;
    Location loc{};
    friend bool operator==(const ThresholdRef& a, const ThresholdRef& b) { return a.name == b.name; }
};

struct Literal {
    double value = 0.0;
    friend bool operator==(const Literal& a, const Literal& b) { return a.value == b.value; }
};

using Operand = std::variant<MetricRef, ThresholdRef, Literal>;

struct Expr;

struct Or {
    std::vector<Expr> children;  // >= 2
};
struct And {
    std::vector<Expr> children;  // >= 2
};
struct Not {
    Box<Expr> operand;
};
struct Compare {
    Operand lhs;
    CmpOp op = CmpOp::gt;
    Operand rhs;
};

struct Expr {
    std::variant<Or, And, Not, Compare> node;
};

bool operator==(const Expr& a, const Expr& b);
inline bool operator==(const Or& a, const Or& b) { return a.children == b.children; }
inline bool operator==(const And& a, const And& b) { return a.children == b.children; }
inline bool operator==(const Not& a, const Not& b) { return *a.operand == *b.operand; }
inline bool operator==(const Compare& a, const Compare& b) {
    return a.op == b.op && a.lhs == b.lhs && a.rhs == b.rhs;
}
inline bool operator==(const Expr& a, const Expr& b) { return a.node == b.node; }

struct SmellDefinition {
    std::string name;
    Severity severity = Severity::medium;
    Expr condition;
    Location loc{};

    friend bool operator==(const SmellDefinition& a, const SmellDefinition& b) {
        return a.name == b.name && a.severity == b.severity && a.condition == b.condition;
    }
};

struct SmellScript {
    std::vector<SmellDefinition> definitions;

    friend bool operator==(const SmellScript&, const SmellScript&) = default;
};

// Convenience builders, mostly for tests and programmatic construction.
Expr make_compare(Operand lhs, CmpOp op, Operand rhs);
Expr make_not(Expr operand);
Expr make_and(std::vector<Expr> children);
Expr make_or(std::vector<Expr> children);
inline Operand metric(std::string name) { return MetricRef{std::move(name)}; }
inline Operand threshold(std::string name) { return ThresholdRef{std::move(name)}; }
inline Operand literal(double v) { return Literal{v}; }

struct References {
    std::vector<MetricRef> metrics;        // every occurrence, source order
    std::vector<ThresholdRef> thresholds;  // every occurrence, source order
};

References collect_references(const Expr& e);
References collect_references(const SmellScript& s);

std::size_t depth(const Expr& e);

}  // namespace smellhunter::dsl
