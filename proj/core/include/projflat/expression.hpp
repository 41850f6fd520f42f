#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace projflat {

/// Second-order Taylor jet of a univariate function: (h, h′, h″) at a point.
struct Jet2 {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

class ExpressionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Univariate arithmetic expression in one named variable.
///
/// Grammar: numbers, the variable, + − * / ^, parentheses, and the functions
/// exp, log, sqrt, pow(a, b). Evaluation propagates a second-order jet, so
/// h′ and h″ come out exactly (up to rounding) without a separate
/// differentiation pass.
class Expression {
 public:
  static Expression parse(std::string_view text, std::string_view variable = "t");

  Jet2 jet(double t) const;
  double operator()(double t) const { return jet(t).value; }
  const std::string& text() const { return text_; }

  struct Node;

 private:
  Expression(std::shared_ptr<const Node> root, std::string text);

  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace projflat
