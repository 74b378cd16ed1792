#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hessquot {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what), offset_(offset) {}
    /// 1-based byte offset of the offending character.
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class EvalDomainError : public std::domain_error {
    using std::domain_error::domain_error;
};

/// Arithmetic expressions over x1..xn with + - * / ^ (right-associative,
/// binding tighter than unary minus), sin, cos, exp, sqrt, abs and pi.
/// Interpreted by tree walk; division by zero and sqrt of a negative value
/// raise EvalDomainError at evaluation time.
class Expression {
public:
    /// max_dim bounds the variable indices accepted (x1..x{max_dim}).
    static Expression parse(std::string_view text, int max_dim);

    double eval(std::span<const double> x) const;
    std::string print() const;
    bool structurally_equal(const Expression& other) const;
    /// Highest variable index used (1-based); 0 for constants.
    int max_variable() const noexcept { return max_var_; }

private:
    enum class Op { number, variable, add, sub, mul, div, pow, neg, sin, cos, exp, sqrt, abs };
    struct Node {
        Op op;
        double value = 0.0;  // number
        int index = 0;       // variable (0-based)
        int a = -1, b = -1;  // children
    };
    std::vector<Node> nodes_;
    int root_ = -1;
    int max_var_ = 0;

    friend class ExpressionParser;
    double eval_node(int id, std::span<const double> x) const;
    void print_node(int id, std::string& out) const;
};

}  // namespace hessquot
