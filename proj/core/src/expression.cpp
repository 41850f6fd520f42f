#include "projflat/expression.hpp"

#include "projflat/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace projflat {

struct Expression::Node {
  enum class Kind { kNumber, kVariable, kAdd, kSub, kMul, kDiv, kPow, kNeg, kExp, kLog, kSqrt };
  Kind kind;
  double number = 0.0;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;
using Kind = Node::Kind;

NodePtr make(Kind kind, std::vector<NodePtr> args = {}, double number = 0.0) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  n->number = number;
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, std::string_view variable)
      : text_(text), variable_(variable) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError("expression '" + std::string(text_) + "': " + what +
                          " at offset " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Kind::kAdd, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(Kind::kSub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Kind::kMul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Kind::kDiv, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::kNeg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Kind::kPow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (accept('(')) {
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(text_.substr(pos_));
      char* end = nullptr;
      const double value = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return make(Kind::kNumber, {}, value);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view ident = text_.substr(start, pos_ - start);
      if (ident == variable_) return make(Kind::kVariable);
      if (ident == "exp" || ident == "log" || ident == "sqrt") {
        expect('(');
        NodePtr arg = expr();
        expect(')');
        const Kind kind = ident == "exp" ? Kind::kExp : ident == "log" ? Kind::kLog : Kind::kSqrt;
        return make(kind, {arg});
      }
      if (ident == "pow") {
        expect('(');
        NodePtr base = expr();
        expect(',');
        NodePtr exponent = expr();
        expect(')');
        return make(Kind::kPow, {base, exponent});
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(ident) + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::string_view variable_;
  std::size_t pos_ = 0;
};

// Chain rule for an outer function with derivatives (g, g′, g″) at a.value.
Jet2 compose(const Jet2& a, double g, double g1, double g2) {
  return {g, g1 * a.d1, g2 * a.d1 * a.d1 + g1 * a.d2};
}

Jet2 multiply(const Jet2& a, const Jet2& b) {
  return {a.value * b.value, a.d1 * b.value + a.value * b.d1,
          a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2};
}

Jet2 evaluate(const Node& node, double t) {
  switch (node.kind) {
    case Kind::kNumber:
      return {node.number, 0.0, 0.0};
    case Kind::kVariable:
      return {t, 1.0, 0.0};
    case Kind::kAdd: {
      const Jet2 a = evaluate(*node.args[0], t);
      const Jet2 b = evaluate(*node.args[1], t);
      return {a.value + b.value, a.d1 + b.d1, a.d2 + b.d2};
    }
    case Kind::kSub: {
      const Jet2 a = evaluate(*node.args[0], t);
      const Jet2 b = evaluate(*node.args[1], t);
      return {a.value - b.value, a.d1 - b.d1, a.d2 - b.d2};
    }
    case Kind::kNeg: {
      const Jet2 a = evaluate(*node.args[0], t);
      return {-a.value, -a.d1, -a.d2};
    }
    case Kind::kMul:
      return multiply(evaluate(*node.args[0], t), evaluate(*node.args[1], t));
    case Kind::kDiv: {
      const Jet2 b = evaluate(*node.args[1], t);
      if (b.value == 0.0) throw DomainError("expression: division by zero");
      const double inv = 1.0 / b.value;
      const Jet2 reciprocal = compose(b, inv, -inv * inv, 2.0 * inv * inv * inv);
      return multiply(evaluate(*node.args[0], t), reciprocal);
    }
    case Kind::kPow: {
      const Jet2 base = evaluate(*node.args[0], t);
      const Jet2 exponent = evaluate(*node.args[1], t);
      if (exponent.d1 == 0.0 && exponent.d2 == 0.0) {
        const double p = exponent.value;
        const double x = base.value;
        if (p == 0.0) return {1.0, 0.0, 0.0};
        return compose(base, std::pow(x, p), p * std::pow(x, p - 1.0),
                       p * (p - 1.0) * std::pow(x, p - 2.0));
      }
      if (base.value <= 0.0) throw DomainError("expression: pow with non-positive base");
      // base^exponent = exp(exponent * log(base))
      const double lx = std::log(base.value);
      const Jet2 log_base = compose(base, lx, 1.0 / base.value, -1.0 / (base.value * base.value));
      const Jet2 product = multiply(exponent, log_base);
      const double e = std::exp(product.value);
      return compose(product, e, e, e);
    }
    case Kind::kExp: {
      const Jet2 a = evaluate(*node.args[0], t);
      const double e = std::exp(a.value);
      return compose(a, e, e, e);
    }
    case Kind::kLog: {
      const Jet2 a = evaluate(*node.args[0], t);
      if (a.value <= 0.0) throw DomainError("expression: log of non-positive value");
      return compose(a, std::log(a.value), 1.0 / a.value, -1.0 / (a.value * a.value));
    }
    case Kind::kSqrt: {
      const Jet2 a = evaluate(*node.args[0], t);
      if (a.value <= 0.0) throw DomainError("expression: sqrt of non-positive value");
      const double r = std::sqrt(a.value);
      return compose(a, r, 0.5 / r, -0.25 / (r * a.value));
    }
  }
  throw DomainError("expression: corrupt node");
}

}  // namespace

Expression::Expression(std::shared_ptr<const Node> root, std::string text)
    : root_(std::move(root)), text_(std::move(text)) {}

Expression Expression::parse(std::string_view text, std::string_view variable) {
  Parser parser(text, variable);
  return Expression(parser.parse(), std::string(text));
}

Jet2 Expression::jet(double t) const {
  const Jet2 out = evaluate(*root_, t);
  if (!std::isfinite(out.value) || !std::isfinite(out.d1) || !std::isfinite(out.d2)) {
    throw DomainError("expression '" + text_ + "' is not finite at t = " + std::to_string(t));
  }
  return out;
}

}  // namespace projflat
