#include "dca/expr.hpp"

#include "dca/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace dca {

struct Expression::Node {
    enum class Kind { Number, X, Y, Z, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
    std::complex<double> number;
    std::string function;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, std::vector<NodePtr> args = {}) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = kind;
    n->args = std::move(args);
    return n;
}

NodePtr make_number(std::complex<double> v) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Number;
    n->number = v;
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        NodePtr e = expression();
        skip();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorCode::ParseError, "column " + std::to_string(pos_ + 1) + ": " + what + " in \"" +
                                               std::string(text_) + "\"");
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expression() {
        NodePtr left = term();
        for (;;) {
            if (accept('+')) left = make(Kind::Add, {left, term()});
            else if (accept('-')) left = make(Kind::Sub, {left, term()});
            else return left;
        }
    }

    NodePtr term() {
        NodePtr left = unary();
        for (;;) {
            if (accept('*')) left = make(Kind::Mul, {left, unary()});
            else if (accept('/')) left = make(Kind::Div, {left, unary()});
            else return left;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Kind::Neg, {unary()});
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Kind::Pow, {base, unary()});
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expression();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0.0;
            const char* first = text_.data() + pos_;
            const auto [end, ec] = std::from_chars(first, text_.data() + text_.size(), v);
            if (ec != std::errc()) fail("malformed number");
            pos_ += static_cast<std::size_t>(end - first);
            return make_number(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const std::string name(text_.substr(start, pos_ - start));
            if (name == "x") return make(Kind::X);
            if (name == "y") return make(Kind::Y);
            if (name == "z") return make(Kind::Z);
            if (name == "i") return make_number({0.0, 1.0});
            if (name == "pi") return make_number(std::numbers::pi);
            static const char* const functions[] = {"re", "im", "abs", "conj", "exp", "sin", "cos", "sqrt"};
            for (const char* f : functions) {
                if (name == f) {
                    if (!accept('(')) fail("expected '(' after " + name);
                    NodePtr arg = expression();
                    if (!accept(')')) fail("expected ')'");
                    auto n = std::make_shared<Expression::Node>();
                    n->kind = Kind::Call;
                    n->function = name;
                    n->args = {arg};
                    return n;
                }
            }
            pos_ = start;
            fail("unknown name '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::complex<double> evaluate(const Expression::Node& n, Point2 z) {
    auto arg = [&](std::size_t k) { return evaluate(*n.args[k], z); };
    switch (n.kind) {
    case Kind::Number: return n.number;
    case Kind::X: return z.real();
    case Kind::Y: return z.imag();
    case Kind::Z: return z;
    case Kind::Neg: return -arg(0);
    case Kind::Add: return arg(0) + arg(1);
    case Kind::Sub: return arg(0) - arg(1);
    case Kind::Mul: return arg(0) * arg(1);
    case Kind::Div: return arg(0) / arg(1);
    case Kind::Pow: {
        const auto base = arg(0);
        const auto exponent = arg(1);
        if (exponent.imag() == 0.0 && exponent.real() == std::round(exponent.real()) &&
            std::abs(exponent.real()) <= 64.0) {
            const int k = static_cast<int>(exponent.real());
            std::complex<double> out = 1.0;
            for (int j = 0; j < std::abs(k); ++j) out *= base;
            return k < 0 ? 1.0 / out : out;
        }
        return std::pow(base, exponent);
    }
    case Kind::Call: {
        const auto a = arg(0);
        if (n.function == "re") return a.real();
        if (n.function == "im") return a.imag();
        if (n.function == "abs") return std::abs(a);
        if (n.function == "conj") return std::conj(a);
        if (n.function == "exp") return std::exp(a);
        if (n.function == "sin") return std::sin(a);
        if (n.function == "cos") return std::cos(a);
        return std::sqrt(a);
    }
    }
    return 0.0;
}

} // namespace

Expression Expression::parse(std::string_view text) {
    Expression e;
    e.root_ = Parser(text).parse();
    e.source_ = std::string(text);
    return e;
}

std::complex<double> Expression::operator()(Point2 z) const { return evaluate(*root_, z); }

} // namespace dca
