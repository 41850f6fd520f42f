#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>

namespace projflat::calculus {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A real-valued map on R^d together with the open set on which it is smooth.
///
/// Evaluation checks the domain predicate and the finiteness of the result;
/// both failures raise DomainError instead of returning NaN.
class ScalarField {
 public:
  using Function = std::function<double(const Vector&)>;
  using Domain = std::function<bool(const Vector&)>;

  explicit ScalarField(Function fn, Domain domain = {}, std::string name = {});

  double operator()(const Vector& point) const;
  bool contains(const Vector& point) const;
  const std::string& name() const { return name_; }

 private:
  Function fn_;
  Domain domain_;
  std::string name_;
};

enum class Stencil {
  kFivePoint,   // O(h^4) central stencil
  kRichardson,  // one Richardson level on top of the five-point stencil
};

/// Step for first derivatives: eps^(1/5) * max(1, |coordinate|).
double first_step(double coordinate);
/// Step for second derivatives: eps^(1/6) * max(1, |coordinate|).
double second_step(double coordinate);

double diff1(const ScalarField& field, const Vector& point, Eigen::Index index,
             Stencil stencil = Stencil::kFivePoint);

/// Second partial ∂²field/∂v_i∂v_j with fourth-order stencils.
double diff2(const ScalarField& field, const Vector& point, Eigen::Index i,
             Eigen::Index j);

/// Jacobian J(r, c) = ∂f_r/∂v_c of a vector-valued map, five-point stencil.
using VectorFunction = std::function<Vector(const Vector&)>;
Matrix jacobian(const VectorFunction& fn, const Vector& point);

struct Quadrature {
  std::function<double(double)> integrand;
  double a = 0.0;
  double b = 0.0;
  double tol = 1e-10;
  int max_depth = 40;
};

/// Adaptive Simpson integration of q.integrand over [a, b].
/// Throws ConvergenceError if a subinterval still misses its share of the
/// tolerance at max_depth.
double quad(const Quadrature& q);

/// Composite Gauss-Legendre rule with a fixed node layout. The result is a
/// smooth function of (a, b) and of any parameters captured by the integrand,
/// which makes it safe to finite-difference through.
double gauss_legendre(const std::function<double(double)>& integrand, double a,
                      double b, int panels = 4);

struct Bracket {
  double lo;
  double hi;
};

/// Solves h(t) = target for a strictly monotone h on the bracket.
/// tol <= 0 asks for full double precision (bracket collapsed to a few ulps).
double solve_monotone(const std::function<double(double)>& h, double target,
                      Bracket bracket, double tol = 1e-12);

}  // namespace projflat::calculus
