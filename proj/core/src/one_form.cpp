#include "projflat/one_form.hpp"

#include "projflat/calculus.hpp"
#include "projflat/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace projflat {

RhoFunction RhoFunction::one() {
  return {[](double) { return 1.0; }, [](double) { return 0.0; }, "1"};
}

RhoFunction RhoFunction::identity() {
  return {[](double t) { return t; }, [](double) { return 1.0; }, "t"};
}

RhoFunction RhoFunction::from_c(const CFunction& c, double base) {
  return {[c, base](double t) { return mu_nu(c, t, base).rho; },
          [c, base](double t) { return mu_nu(c, t, base).drho; },
          "exp(int (c-1)/(2t))"};
}

OneForm::OneForm(SpaceForm sf, OneFormSpec spec)
    : sf_(std::move(sf)), spec_(std::move(spec)) {
  if (spec_->a.size() == 0) spec_->a = Vector::Zero(sf_.dim());
  if (spec_->a.size() != sf_.dim()) {
    throw std::invalid_argument("OneForm: vector a has the wrong dimension");
  }
  const CFunction& c = spec_->c;
  if (!c.is_constant()) {
    // h(t) = ρ(t)²t has h′ = cρ², so h is strictly monotone iff c keeps one sign.
    constexpr int kSamples = 64;
    int sign = 0;
    for (int k = 0; k <= kSamples; ++k) {
      const double t = c.lo() + (c.hi() - c.lo()) * k / kSamples;
      const double value = c(t);
      const int s = value > 0.0 ? 1 : (value < 0.0 ? -1 : 0);
      if (s == 0 || (sign != 0 && s != sign)) {
        throw std::invalid_argument("OneForm: c must not vanish or change sign");
      }
      sign = s;
    }
  }
  label_ = "conformal(eps=" + std::to_string(spec_->epsilon) + ", " + c.label() + ")";
}

OneForm::OneForm(SpaceForm sf, CovectorField field, std::string label)
    : sf_(std::move(sf)), field_(std::move(field)), label_(std::move(label)) {}

OneForm OneForm::from_field(SpaceForm sf, CovectorField field, std::string label) {
  if (!field) throw std::invalid_argument("OneForm: empty covector field");
  return OneForm(std::move(sf), std::move(field), std::move(label));
}

const OneFormSpec& OneForm::require_spec(const char* what) const {
  if (!spec_) {
    throw std::logic_error(std::string(what) + " requires a conformal-deformation 1-form");
  }
  return *spec_;
}

Vector OneForm::beta_tilde(const Vector& x) const {
  const OneFormSpec& spec = require_spec("beta_tilde");
  sf_.require_admissible(x);
  const double d = sf_.conformal_factor(x);
  const double kappa = sf_.kappa();
  const Vector numerator =
      (spec.epsilon - kappa * spec.a.dot(x)) * x + d * spec.a;
  return numerator / (d * std::sqrt(d));
}

double OneForm::recover_b2(const Vector& x) const {
  const OneFormSpec& spec = require_spec("recover_b2");
  const double tilde_sq = sf_.covector_norm_sq(x, beta_tilde(x));
  const CFunction& c = spec.c;
  if (c.is_constant()) {
    // h(t) = t^λ / base^{λ−1}
    const double lambda = c.lambda();
    if (lambda == 1.0) return tilde_sq;
    const double scaled = spec.base == 1.0 ? tilde_sq
                                           : tilde_sq * std::pow(spec.base, lambda - 1.0);
    return std::pow(scaled, 1.0 / lambda);
  }
  // h(t) = μ(t) is monotone with h′ = cρ² of one sign. Bracketed Newton
  // to full precision, regula falsi if it stalls.
  double lo = c.lo();
  double hi = c.hi();
  const MuNu at_lo = mu_nu(c, lo, spec.base);
  const MuNu at_hi = mu_nu(c, hi, spec.base);
  const bool increasing = at_hi.mu > at_lo.mu;
  if ((tilde_sq - at_lo.mu) * (tilde_sq - at_hi.mu) > 0.0) {
    throw DomainError("recover_b2: b~^2 = " + std::to_string(tilde_sq) +
                      " is outside the range of mu over the c domain");
  }
  double t = std::clamp(tilde_sq, lo, hi);
  for (int iter = 0; iter < 60; ++iter) {
    const MuNu m = mu_nu(c, t, spec.base);
    const double residual = m.mu - tilde_sq;
    if (residual == 0.0) return t;
    if ((residual > 0.0) == increasing) {
      hi = t;
    } else {
      lo = t;
    }
    double next = t - residual / m.dmu;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(t)) {
      return next;
    }
    t = next;
  }
  const auto h = [&](double u) { return mu_nu(c, u, spec.base).mu; };
  return calculus::solve_monotone(h, tilde_sq, {c.lo(), c.hi()}, 0.0);
}

BetaValue OneForm::eval(const Vector& x) const {
  if (field_) {
    sf_.require_admissible(x);
    BetaValue out;
    out.b = field_(x);
    if (out.b.size() != sf_.dim() || !out.b.allFinite()) {
      throw DomainError("OneForm: covector field returned a bad value");
    }
    out.b2 = sf_.covector_norm_sq(x, out.b);
    return out;
  }
  const OneFormSpec& spec = require_spec("eval");
  const Vector tilde = beta_tilde(x);
  BetaValue out;
  out.b2 = recover_b2(x);
  const double rho = mu_nu(spec.c, out.b2, spec.base).rho;
  if (!(rho > 0.0)) {
    throw DomainError("OneForm: b^2 = 0 with non-constant deformation is singular");
  }
  out.b = tilde / rho;
  return out;
}

Matrix OneForm::covariant_derivative(const CovectorField& field, const Vector& x) const {
  sf_.require_admissible(x);
  const Matrix partial = calculus::jacobian(field, x);  // (i, j) = ∂_j b_i
  const Vector b = field(x);
  const Christoffel gamma = sf_.christoffel(x);
  Matrix cov = partial;
  for (int k = 0; k < sf_.dim(); ++k) cov -= b[k] * gamma[k];
  return cov;
}

BetaJet OneForm::jet(const Vector& x) const {
  BetaJet j;
  j.x = x;
  const BetaValue v = eval(x);
  j.b = v.b;
  j.b2 = v.b2;
  j.b_up = sf_.inverse_metric(x) * v.b;
  j.cov = covariant_derivative([this](const Vector& p) { return eval(p).b; }, x);
  j.r = 0.5 * (j.cov + j.cov.transpose());
  j.s = 0.5 * (j.cov - j.cov.transpose());
  j.r_vec = j.r.transpose() * j.b_up;
  j.s_vec = j.s.transpose() * j.b_up;
  j.r_scalar = j.r_vec.dot(j.b_up);
  return j;
}

double OneForm::k_formula(const Vector& x) const {
  const OneFormSpec& spec = require_spec("k_formula");
  const double b2 = recover_b2(x);
  const MuNu m = mu_nu(spec.c, b2, spec.base);
  const double cb2 = spec.c(b2) * b2;
  if (cb2 == 0.0) throw DomainError("k_formula: c*b^2 = 0");
  return (spec.epsilon - sf_.kappa() * spec.a.dot(x)) /
         (m.rho * cb2 * std::sqrt(sf_.conformal_factor(x)));
}

ConditionResidual OneForm::condition_residual(const Vector& x) const {
  const OneFormSpec& spec = require_spec("condition_residual");
  const BetaJet j = jet(x);
  const double c = spec.c(j.b2);
  if (c * j.b2 == 0.0) throw DomainError("condition_residual: c*b^2 = 0");

  const Matrix a = sf_.metric(x);
  const Matrix radial = j.b * j.b.transpose();
  const Matrix conformal = j.b2 * a - radial;

  // Two-basis least squares in the Frobenius inner product.
  Eigen::Matrix2d gram;
  gram << conformal.cwiseProduct(conformal).sum(), conformal.cwiseProduct(radial).sum(),
      conformal.cwiseProduct(radial).sum(), radial.cwiseProduct(radial).sum();
  const Eigen::Vector2d rhs(conformal.cwiseProduct(j.cov).sum(), radial.cwiseProduct(j.cov).sum());
  const Eigen::Vector2d coef = gram.ldlt().solve(rhs);

  const Matrix basis = c * conformal + radial;
  const double k_fit = basis.cwiseProduct(j.cov).sum() / basis.cwiseProduct(basis).sum();

  ConditionResidual out{};
  out.residual = (j.cov - k_fit * basis).cwiseAbs().maxCoeff();
  out.k_fit = k_fit;
  out.k_formula = k_formula(x);
  out.k_from_conformal_part = coef[0] / c;
  out.k_from_radial_part = coef[1];
  out.antisymmetric_norm = j.s.cwiseAbs().maxCoeff();
  return out;
}

double OneForm::deformation_check(const RhoFunction& rho, const Vector& x) const {
  const BetaJet j = jet(x);
  const Matrix lhs = covariant_derivative(
      [this, &rho](const Vector& p) {
        const BetaValue v = eval(p);
        return Vector(rho.value(v.b2) * v.b);
      },
      x);
  const Matrix rhs = rho.value(j.b2) * j.cov +
                     2.0 * rho.derivative(j.b2) * j.b * (j.r_vec + j.s_vec).transpose();
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace projflat
