#include "hessquot/expression.hpp"

#include <cctype>
#include <cmath>
#include <charconv>

namespace hessquot {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

class ExpressionParser {
public:
    ExpressionParser(std::string_view text, int max_dim, Expression& out)
        : text_(text), max_dim_(max_dim), out_(out) {}

    void run() {
        skip_ws();
        out_.root_ = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int max_dim_;
    Expression& out_;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what, pos_ + 1);  // 1-based offsets
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    int add_node(Expression::Node n) {
        out_.nodes_.push_back(n);
        return static_cast<int>(out_.nodes_.size()) - 1;
    }

    int parse_expr() {
        int lhs = parse_term();
        for (;;) {
            if (consume('+'))
                lhs = add_node({Expression::Op::add, 0, 0, lhs, parse_term()});
            else if (consume('-'))
                lhs = add_node({Expression::Op::sub, 0, 0, lhs, parse_term()});
            else
                return lhs;
        }
    }

    int parse_term() {
        int lhs = parse_unary();
        for (;;) {
            if (consume('*'))
                lhs = add_node({Expression::Op::mul, 0, 0, lhs, parse_unary()});
            else if (consume('/'))
                lhs = add_node({Expression::Op::div, 0, 0, lhs, parse_unary()});
            else
                return lhs;
        }
    }

    int parse_unary() {
        if (consume('-')) return add_node({Expression::Op::neg, 0, 0, parse_unary(), -1});
        return parse_power();
    }

    int parse_power() {
        int base = parse_primary();
        if (consume('^')) {
            // right-associative; the exponent may start with a unary minus
            int expo = parse_unary();
            return add_node({Expression::Op::pow, 0, 0, base, expo});
        }
        return base;
    }

    int parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            int inner = parse_expr();
            if (!consume(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    int parse_number() {
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{}) fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        return add_node({Expression::Op::number, value, 0, -1, -1});
    }

    int parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "pi") return add_node({Expression::Op::number, kPi, 0, -1, -1});
        const auto fn = [&](Expression::Op op) {
            if (!consume('(')) fail("expected '(' after function name");
            int arg = parse_expr();
            if (!consume(')')) fail("expected ')'");
            return add_node({op, 0, 0, arg, -1});
        };
        if (name == "sin") return fn(Expression::Op::sin);
        if (name == "cos") return fn(Expression::Op::cos);
        if (name == "exp") return fn(Expression::Op::exp);
        if (name == "sqrt") return fn(Expression::Op::sqrt);
        if (name == "abs") return fn(Expression::Op::abs);
        if (name.size() >= 2 && name[0] == 'x') {
            int idx = 0;
            auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
            if (ec == std::errc{} && ptr == name.data() + name.size() && idx >= 1) {
                if (idx > max_dim_) {
                    pos_ = start;
                    fail("variable index exceeds the problem dimension");
                }
                out_.max_var_ = std::max(out_.max_var_, idx);
                return add_node({Expression::Op::variable, 0, idx - 1, -1, -1});
            }
        }
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
    }
};

Expression Expression::parse(std::string_view text, int max_dim) {
    Expression e;
    ExpressionParser p(text, max_dim, e);
    p.run();
    return e;
}

double Expression::eval_node(int id, std::span<const double> x) const {
    const Node& n = nodes_[id];
    switch (n.op) {
        case Op::number: return n.value;
        case Op::variable:
            if (n.index >= static_cast<int>(x.size()))
                throw EvalDomainError("expression: evaluation point has too few coordinates");
            return x[n.index];
        case Op::add: return eval_node(n.a, x) + eval_node(n.b, x);
        case Op::sub: return eval_node(n.a, x) - eval_node(n.b, x);
        case Op::mul: return eval_node(n.a, x) * eval_node(n.b, x);
        case Op::div: {
            const double d = eval_node(n.b, x);
            if (d == 0.0) throw EvalDomainError("expression: division by zero");
            return eval_node(n.a, x) / d;
        }
        case Op::pow: return std::pow(eval_node(n.a, x), eval_node(n.b, x));
        case Op::neg: return -eval_node(n.a, x);
        case Op::sin: return std::sin(eval_node(n.a, x));
        case Op::cos: return std::cos(eval_node(n.a, x));
        case Op::exp: return std::exp(eval_node(n.a, x));
        case Op::sqrt: {
            const double v = eval_node(n.a, x);
            if (v < 0.0) throw EvalDomainError("expression: sqrt of a negative value");
            return std::sqrt(v);
        }
        case Op::abs: return std::abs(eval_node(n.a, x));
    }
    throw std::logic_error("expression: corrupt node");
}

double Expression::eval(std::span<const double> x) const { return eval_node(root_, x); }

void Expression::print_node(int id, std::string& out) const {
    const Node& n = nodes_[id];
    const auto binary = [&](const char* op) {
        out += '(';
        print_node(n.a, out);
        out += op;
        print_node(n.b, out);
        out += ')';
    };
    const auto call = [&](const char* name) {
        out += name;
        out += '(';
        print_node(n.a, out);
        out += ')';
    };
    switch (n.op) {
        case Op::number: {
            char buf[32];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), n.value);
            out.append(buf, ptr);
            return;
        }
        case Op::variable: out += "x" + std::to_string(n.index + 1); return;
        case Op::add: binary("+"); return;
        case Op::sub: binary("-"); return;
        case Op::mul: binary("*"); return;
        case Op::div: binary("/"); return;
        case Op::pow: binary("^"); return;
        case Op::neg:
            out += "(-";
            print_node(n.a, out);
            out += ')';
            return;
        case Op::sin: call("sin"); return;
        case Op::cos: call("cos"); return;
        case Op::exp: call("exp"); return;
        case Op::sqrt: call("sqrt"); return;
        case Op::abs: call("abs"); return;
    }
}

std::string Expression::print() const {
    std::string out;
    print_node(root_, out);
    return out;
}

bool Expression::structurally_equal(const Expression& other) const {
    // compare by simultaneous traversal
    struct Cmp {
        const std::vector<Node>&a, &b;
        bool eq(int x, int y) const {
            if ((x < 0) != (y < 0)) return false;
            if (x < 0) return true;
            const Node&na = a[x], &nb = b[y];
            if (na.op != nb.op) return false;
            if (na.op == Op::number) return na.value == nb.value;
            if (na.op == Op::variable) return na.index == nb.index;
            return eq(na.a, nb.a) && eq(na.b, nb.b);
        }
    };
    return Cmp{nodes_, other.nodes_}.eq(root_, other.root_);
}

}  // namespace hessquot
