#include "projflat/calculus.hpp"

#include "projflat/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

namespace projflat::calculus {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double checked(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw DomainError(std::string(what) + ": non-finite value");
  }
  return value;
}

// Five-point first-derivative stencil on offsets -2..2 (weights over 12h).
constexpr std::array<double, 5> kD1 = {1.0, -8.0, 0.0, 8.0, -1.0};

double five_point(const ScalarField& field, Vector point, Eigen::Index k,
                  double h) {
  const double x0 = point[k];
  double acc = 0.0;
  for (int m = 0; m < 5; ++m) {
    if (kD1[m] == 0.0) continue;
    point[k] = x0 + (m - 2) * h;
    acc += kD1[m] * field(point);
  }
  return acc / (12.0 * h);
}

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Legendre roots by Newton iteration from the Chebyshev-like initial guess.
GaussRule make_gauss_rule(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& gauss20() {
  static const GaussRule rule = make_gauss_rule(20);
  return rule;
}

double simpson_step(const std::function<double(double)>& f, double a, double fa,
                    double b, double fb, double m, double fm, double whole,
                    double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = checked(f(lm), "quad");
  const double frm = checked(f(rm), "quad");
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  if (depth <= 0) {
    throw ConvergenceError("quad: maximum refinement depth reached");
  }
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

ScalarField::ScalarField(Function fn, Domain domain, std::string name)
    : fn_(std::move(fn)), domain_(std::move(domain)), name_(std::move(name)) {}

bool ScalarField::contains(const Vector& point) const {
  return !domain_ || domain_(point);
}

double ScalarField::operator()(const Vector& point) const {
  if (!contains(point)) {
    throw DomainError("field '" + name_ + "' evaluated outside its domain");
  }
  const double value = fn_(point);
  if (!std::isfinite(value)) {
    throw DomainError("field '" + name_ + "' produced a non-finite value");
  }
  return value;
}

double first_step(double coordinate) {
  static const double base = std::pow(kEps, 1.0 / 5.0);
  return base * std::max(1.0, std::abs(coordinate));
}

double second_step(double coordinate) {
  static const double base = std::pow(kEps, 1.0 / 6.0);
  return base * std::max(1.0, std::abs(coordinate));
}

double diff1(const ScalarField& field, const Vector& point, Eigen::Index index,
             Stencil stencil) {
  if (index < 0 || index >= point.size()) {
    throw std::out_of_range("diff1: index out of range");
  }
  const double h = first_step(point[index]);
  const double coarse = five_point(field, point, index, h);
  if (stencil == Stencil::kFivePoint) return coarse;
  const double fine = five_point(field, point, index, 0.5 * h);
  return (16.0 * fine - coarse) / 15.0;
}

double diff2(const ScalarField& field, const Vector& point, Eigen::Index i,
             Eigen::Index j) {
  if (i < 0 || j < 0 || i >= point.size() || j >= point.size()) {
    throw std::out_of_range("diff2: index out of range");
  }
  Vector p = point;
  if (i == j) {
    const double h = second_step(point[i]);
    constexpr std::array<double, 5> w = {-1.0, 16.0, -30.0, 16.0, -1.0};
    double acc = 0.0;
    for (int m = 0; m < 5; ++m) {
      p[i] = point[i] + (m - 2) * h;
      acc += w[m] * field(p);
    }
    return acc / (12.0 * h * h);
  }
  const double hi = second_step(point[i]);
  const double hj = second_step(point[j]);
  double acc = 0.0;
  for (int a = 0; a < 5; ++a) {
    if (kD1[a] == 0.0) continue;
    p[i] = point[i] + (a - 2) * hi;
    for (int b = 0; b < 5; ++b) {
      if (kD1[b] == 0.0) continue;
      p[j] = point[j] + (b - 2) * hj;
      acc += kD1[a] * kD1[b] * field(p);
    }
  }
  return acc / (144.0 * hi * hj);
}

Matrix jacobian(const VectorFunction& fn, const Vector& point) {
  Matrix jac;
  Vector p = point;
  for (Eigen::Index c = 0; c < point.size(); ++c) {
    const double h = first_step(point[c]);
    Vector acc;
    for (int m = 0; m < 5; ++m) {
      if (kD1[m] == 0.0) continue;
      p[c] = point[c] + (m - 2) * h;
      const Vector value = fn(p);
      if (!value.allFinite()) {
        throw DomainError("jacobian: non-finite value");
      }
      if (acc.size() == 0) acc = Vector::Zero(value.size());
      acc += kD1[m] * value;
    }
    p[c] = point[c];
    if (jac.size() == 0) jac.resize(acc.size(), point.size());
    jac.col(c) = acc / (12.0 * h);
  }
  return jac;
}

double quad(const Quadrature& q) {
  if (!(q.a <= q.b)) {
    throw DomainError("quad: requires a <= b");
  }
  if (q.a == q.b) return 0.0;
  const auto& f = q.integrand;
  const double fa = checked(f(q.a), "quad");
  const double fb = checked(f(q.b), "quad");
  const double m = 0.5 * (q.a + q.b);
  const double fm = checked(f(m), "quad");
  const double whole = (q.b - q.a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, q.a, fa, q.b, fb, m, fm, whole, q.tol, q.max_depth);
}

double gauss_legendre(const std::function<double(double)>& integrand, double a,
                      double b, int panels) {
  if (a == b) return 0.0;
  const GaussRule& rule = gauss20();
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    const double half = 0.5 * width;
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      acc += rule.weights[k] *
             checked(integrand(mid + half * rule.nodes[k]), "gauss_legendre");
    }
    total += half * acc;
  }
  return total;
}

double solve_monotone(const std::function<double(double)>& h, double target,
                      Bracket bracket, double tol) {
  double lo = bracket.lo;
  double hi = bracket.hi;
  if (!(lo < hi)) {
    throw DomainError("solve_monotone: empty bracket");
  }

  // Strict monotonicity by sampling.
  constexpr int kSamples = 16;
  double prev = checked(h(lo), "solve_monotone");
  const double first = prev;
  int sign = 0;
  for (int k = 1; k <= kSamples; ++k) {
    const double t = lo + (hi - lo) * k / kSamples;
    const double value = checked(h(t), "solve_monotone");
    const int step_sign = value > prev ? 1 : (value < prev ? -1 : 0);
    if (step_sign == 0 || (sign != 0 && step_sign != sign)) {
      throw DomainError("solve_monotone: function is not strictly monotone");
    }
    sign = step_sign;
    prev = value;
  }
  const double last = prev;

  double flo = first - target;
  double fhi = last - target;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) {
    throw DomainError("solve_monotone: target is not bracketed");
  }

  // Illinois-modified regula falsi; bisection whenever the secant point
  // does not land strictly inside the bracket.
  int side = 0;
  for (int iter = 0; iter < 400; ++iter) {
    double t = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
    const double ft = checked(h(t), "solve_monotone") - target;
    if (ft == 0.0) return t;
    if (tol > 0.0 && std::abs(ft) <= tol) return t;
    if (ft * fhi > 0.0) {
      hi = t;
      fhi = ft;
      if (side == 1) flo *= 0.5;
      side = 1;
    } else {
      lo = t;
      flo = ft;
      if (side == -1) fhi *= 0.5;
      side = -1;
    }
    if (hi - lo <= 4.0 * kEps * std::max(std::abs(lo), std::abs(hi))) {
      return std::abs(flo) < std::abs(fhi) ? lo : hi;
    }
  }
  throw ConvergenceError("solve_monotone: iteration limit reached");
}

}  // namespace projflat::calculus
