#include "projflat/phi_family.hpp"

#include "projflat/calculus.hpp"
#include "projflat/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace projflat {

namespace {

void require_finite(std::initializer_list<double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + ": non-finite value");
  }
}

// log(−ν) = ∫_{base}^{b²} (c − 1)/t dt, integrated in w = log t so the
// integrand stays bounded for small b².
double log_minus_nu(const CFunction& c, double b2, double base) {
  if (c.is_constant()) return (c.lambda() - 1.0) * std::log(b2 / base);
  return calculus::gauss_legendre(
      [&c](double w) { return c(std::exp(w)) - 1.0; }, std::log(base), std::log(b2));
}

}  // namespace

CFunction CFunction::constant(double lambda) {
  if (!std::isfinite(lambda) || lambda == 0.0) {
    throw std::invalid_argument("CFunction: constant must be finite and nonzero");
  }
  CFunction c;
  c.lambda_ = lambda;
  c.lo_ = 0.0;
  c.hi_ = std::numeric_limits<double>::infinity();
  c.label_ = "c = " + std::to_string(lambda);
  return c;
}

CFunction CFunction::callable(std::function<double(double)> fn, double lo, double hi,
                              std::string label) {
  if (!fn) throw std::invalid_argument("CFunction: empty callable");
  if (!(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("CFunction: callable range must satisfy 0 < lo < hi");
  }
  CFunction c;
  c.fn_ = std::move(fn);
  c.lo_ = lo;
  c.hi_ = hi;
  c.label_ = std::move(label);
  return c;
}

double CFunction::operator()(double b2) const {
  if (is_constant()) return lambda_;
  if (!(b2 >= lo_ && b2 <= hi_)) {
    throw DomainError("CFunction '" + label_ + "': b^2 = " + std::to_string(b2) +
                      " outside [" + std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
  }
  const double value = fn_(b2);
  if (!std::isfinite(value)) throw DomainError("CFunction '" + label_ + "': non-finite value");
  return value;
}

MuNu mu_nu(const CFunction& c, double b2, double base) {
  if (!(base > 0.0)) throw DomainError("mu_nu: base must be positive");
  MuNu out{};
  if (c.is_constant()) {
    if (!(b2 >= 0.0)) throw DomainError("mu_nu: b^2 must be non-negative");
    const double lambda = c.lambda();
    if (lambda == 1.0) {
      out = {b2, -1.0, 1.0, 0.0, 1.0, 0.0};
      return out;
    }
    const double scale = base == 1.0 ? 1.0 : std::pow(base, lambda - 1.0);
    out.nu = -std::pow(b2, lambda - 1.0) / scale;
    out.dnu = -(lambda - 1.0) * std::pow(b2, lambda - 2.0) / scale;
    out.mu = -b2 * out.nu;
    out.dmu = -lambda * out.nu;
    out.rho = std::sqrt(-out.nu);
    out.drho = 0.5 * (lambda - 1.0) * std::pow(b2, 0.5 * (lambda - 3.0)) / std::sqrt(scale);
    require_finite({out.mu, out.nu, out.dmu, out.dnu, out.rho}, "mu_nu");
    return out;
  }
  if (!(b2 > 0.0)) throw DomainError("mu_nu: b^2 must be positive for non-constant c");
  const double log_rho_sq = log_minus_nu(c, b2, base);
  const double cv = c(b2);
  out.nu = -std::exp(log_rho_sq);
  out.mu = -b2 * out.nu;
  out.dnu = out.nu * (cv - 1.0) / b2;
  out.dmu = -cv * out.nu;
  out.rho = std::exp(0.5 * log_rho_sq);
  out.drho = out.rho * (cv - 1.0) / (2.0 * b2);
  require_finite({out.mu, out.nu, out.dmu, out.dnu, out.rho, out.drho}, "mu_nu");
  return out;
}

double mu_by_quadrature(const CFunction& c, double b2, double base) {
  const double lo = std::min(b2, base);
  const double hi = std::max(b2, base);
  const double integral = calculus::quad(
      {[&](double t) { return c(t) * mu_nu(c, t, base).nu; }, lo, hi, 1e-12, 40});
  const double oriented = b2 >= base ? integral : -integral;
  // μ₀ = −ν(base)·base = base.
  return base - oriented;
}

double pde_residual(const PhiJet& j, double c) {
  return (c * j.b2 - (c - 1.0) * j.s * j.s) * j.phi22 -
         2.0 * j.b2 * (j.phi1 - j.s * j.phi12);
}

std::string_view to_string(ConvexityStatus status) {
  switch (status) {
    case ConvexityStatus::kOk: return "ok";
    case ConvexityStatus::kNotPositive: return "phi <= 0";
    case ConvexityStatus::kFirstConditionViolated: return "phi - s*phi2 <= 0";
    case ConvexityStatus::kSecondConditionViolated:
      return "phi - s*phi2 + (b^2 - s^2)*phi22 <= 0";
    case ConvexityStatus::kRangeViolation: return "|s| > b";
    case ConvexityStatus::kDomainViolation: return "phi undefined";
  }
  return "unknown";
}

ConvexityStatus convexity_check(const PhiJet& j, bool two_dimensional) {
  const double first = j.phi - j.s * j.phi2;
  const double second = first + (j.b2 - j.s * j.s) * j.phi22;
  if (!(j.phi > 0.0)) return ConvexityStatus::kNotPositive;
  if (!two_dimensional && !(first > 0.0)) return ConvexityStatus::kFirstConditionViolated;
  if (!(second > 0.0)) return ConvexityStatus::kSecondConditionViolated;
  return ConvexityStatus::kOk;
}

PhiFamily::PhiFamily(FGPair fg, CFunction c, double base, QuadratureMode mode)
    : fg_(std::move(fg)), c_(std::move(c)), base_(base), mode_(mode) {
  if (!fg_.f || !fg_.g) throw std::invalid_argument("PhiFamily: f and g are required");
  if (!(base_ > 0.0)) throw std::invalid_argument("PhiFamily: base must be positive");
  if (!c_.is_constant() && (base_ < c_.lo() || base_ > c_.hi())) {
    throw std::invalid_argument("PhiFamily: base point outside the range of c");
  }
}

JetFunction PhiFamily::builtin_f(std::string_view name) {
  if (name == "one") return [](double) { return Jet2{1.0, 0.0, 0.0}; };
  if (name == "one_plus_t") return [](double t) { return Jet2{1.0 + t, 1.0, 0.0}; };
  if (name == "one_plus_t_sq") return [](double t) { return Jet2{1.0 + t * t, 2.0 * t, 2.0}; };
  if (name == "inv_sqrt") {
    return [](double t) {
      if (!(t < 1.0)) throw DomainError("inv_sqrt: requires t < 1");
      const double w = 1.0 - t;
      const double r = 1.0 / std::sqrt(w);
      return Jet2{r, 0.5 * r / w, 0.75 * r / (w * w)};
    };
  }
  if (name == "log1p") {
    return [](double t) {
      if (!(t > -1.0)) throw DomainError("log1p: requires t > -1");
      const double a = 1.0 + t;
      return Jet2{std::log1p(t), 1.0 / a, -1.0 / (a * a)};
    };
  }
  throw std::invalid_argument("unknown builtin f '" + std::string(name) + "'");
}

SpeedIntegralFn PhiFamily::builtin_speed_integral(std::string_view name) {
  if (name == "one") {
    return [](double, double, double) { return SpeedIntegral{0.0, 0.0, 0.0}; };
  }
  if (name == "one_plus_t") {
    return [](double s, double, double) { return SpeedIntegral{s, 0.0, 0.0}; };
  }
  if (name == "one_plus_t_sq") {
    return [](double s, double mu, double nu) {
      const double s3 = s * s * s;
      return SpeedIntegral{2.0 * mu * s + 2.0 * nu * s3 / 3.0, 2.0 * s, 2.0 * s3 / 3.0};
    };
  }
  if (name == "inv_sqrt") {
    // f′(t) = ½(1 − t)^{-3/2}; with p = 1 − μ, q = −ν, W = p + qs²:
    // ∫₀ˢ f′ = s / (2p√W).
    return [](double s, double mu, double nu) {
      const double p = 1.0 - mu;
      const double w = p - nu * s * s;
      if (!(p > 0.0) || !(w > 0.0)) throw DomainError("inv_sqrt: argument reaches t >= 1");
      const double sw = std::sqrt(w);
      const double value = s / (2.0 * p * sw);
      const double d_mu = 0.5 * s * (1.0 / (p * p * sw) + 0.5 / (p * w * sw));
      const double d_nu = s * s * s / (4.0 * p * w * sw);
      return SpeedIntegral{value, d_mu, d_nu};
    };
  }
  if (name == "log1p") {
    // f′(t) = 1/(1 + t); with A = 1 + μ, q = −ν > 0:
    // ∫₀ˢ dz/(A − qz²) = artanh(√(q/A) s)/√(Aq).
    return [](double s, double mu, double nu) {
      const double a = 1.0 + mu;
      const double q = -nu;
      if (!(a > 0.0) || !(q > 0.0)) throw DomainError("log1p: requires 1 + mu > 0, nu < 0");
      const double denom = a - q * s * s;
      if (!(denom > 0.0)) throw DomainError("log1p: argument reaches t <= -1");
      const double root_aq = std::sqrt(a * q);
      const double at = std::atanh(std::sqrt(q / a) * s);
      const double value = at / root_aq;
      // ∫ dz/(A − qz²)² and ∫ z²dz/(A − qz²)², both with the sign of f″ = −1/(1+t)².
      const double sq_int = s / (2.0 * a * denom) + at / (2.0 * a * root_aq);
      const double z2_int = s / (2.0 * q * denom) - at / (2.0 * q * root_aq);
      return SpeedIntegral{value, -sq_int, -z2_int};
    };
  }
  throw std::invalid_argument("unknown builtin f '" + std::string(name) + "'");
}

PhiFamily PhiFamily::builtin(std::string_view name, CFunction c, JetFunction g) {
  FGPair fg;
  fg.f = builtin_f(name);
  fg.g = std::move(g);
  fg.f_label = std::string(name);
  fg.speed_integral = builtin_speed_integral(name);
  return PhiFamily(std::move(fg), std::move(c));
}

PhiFamily PhiFamily::builtin(std::string_view name, double lambda, JetFunction g) {
  return builtin(name, CFunction::constant(lambda), std::move(g));
}

PhiFamily PhiFamily::with_quadrature(QuadratureMode mode) const {
  PhiFamily copy = *this;
  copy.mode_ = mode;
  return copy;
}

PhiFamily PhiFamily::generic() const {
  PhiFamily copy = *this;
  copy.fg_.speed_integral = nullptr;
  return copy;
}

SpeedIntegral PhiFamily::integrate(double s, double mu, double nu) const {
  if (fg_.speed_integral) return fg_.speed_integral(s, mu, nu);
  if (s == 0.0) return {0.0, 0.0, 0.0};
  const auto& f = fg_.f;
  auto speed = [&](double z) { return f(mu + nu * z * z).d1; };
  auto accel = [&](double z) { return f(mu + nu * z * z).d2; };
  auto accel_z2 = [&](double z) { return f(mu + nu * z * z).d2 * z * z; };
  if (mode_ == QuadratureMode::kGaussLegendre) {
    return {calculus::gauss_legendre(speed, 0.0, s, 2),
            calculus::gauss_legendre(accel, 0.0, s, 2),
            calculus::gauss_legendre(accel_z2, 0.0, s, 2)};
  }
  // The integrands are even in z, so ∫₀ˢ = sign(s)·∫₀^{|s|}.
  const double sign = s < 0.0 ? -1.0 : 1.0;
  const double len = std::abs(s);
  return {sign * calculus::quad({speed, 0.0, len, 1e-12, 40}),
          sign * calculus::quad({accel, 0.0, len, 1e-12, 40}),
          sign * calculus::quad({accel_z2, 0.0, len, 1e-12, 40})};
}

double PhiFamily::argument(double b2, double s) const {
  const MuNu m = mu_nu(c_, b2, base_);
  return m.mu + m.nu * s * s;
}

PhiJet PhiFamily::jet(double b2, double s, Range range) const {
  if (!std::isfinite(b2) || !std::isfinite(s)) throw DomainError("phi_jet: non-finite input");
  if (b2 < 0.0) throw DomainError("phi_jet: b^2 < 0");
  if (range == Range::kStrict && s * s > b2 * (1.0 + 1e-12)) {
    throw DomainError("phi_jet: |s| > b");
  }
  const MuNu m = mu_nu(c_, b2, base_);
  const double u = m.mu + m.nu * s * s;
  const Jet2 f = fg_.f(u);
  const Jet2 g = fg_.g(b2);
  const SpeedIntegral in = integrate(s, m.mu, m.nu);
  const double in_b2 = in.d_mu * m.dmu + in.d_nu * m.dnu;

  PhiJet j;
  j.b2 = b2;
  j.s = s;
  j.phi = f.value - 2.0 * m.nu * s * in.value + g.value * s;
  j.phi2 = g.value - 2.0 * m.nu * in.value;
  j.phi22 = -2.0 * m.nu * f.d1;
  j.phi1 = f.d1 * (m.dmu + m.dnu * s * s) - 2.0 * m.dnu * s * in.value -
           2.0 * m.nu * s * in_b2 + g.d1 * s;
  j.phi12 = g.d1 - 2.0 * m.dnu * in.value - 2.0 * m.nu * in_b2;
  require_finite({j.phi, j.phi1, j.phi2, j.phi12, j.phi22}, "phi_jet");
  return j;
}

double PhiFamily::pde_residual(double b2, double s) const {
  return projflat::pde_residual(jet(b2, s), c_(b2));
}

ConvexityStatus PhiFamily::convexity(double b2, double s, bool two_dimensional) const {
  if (s * s > b2 * (1.0 + 1e-12)) return ConvexityStatus::kRangeViolation;
  try {
    return convexity_check(jet(b2, s), two_dimensional);
  } catch (const DomainError&) {
    return ConvexityStatus::kDomainViolation;
  }
}

bool PhiFamily::b2_dependence_vanishes_at(double b2) const {
  return jet(b2, 0.0).phi1 == 0.0;
}

namespace g_functions {
JetFunction zero() { return [](double) { return Jet2{0.0, 0.0, 0.0}; }; }
JetFunction constant(double value) {
  return [value](double) { return Jet2{value, 0.0, 0.0}; };
}
JetFunction linear(double slope, double intercept) {
  return [slope, intercept](double t) { return Jet2{slope * t + intercept, slope, 0.0}; };
}
}  // namespace g_functions

JetFunction jet_function(const Expression& expression) {
  return [expression](double t) { return expression.jet(t); };
}

}  // namespace projflat
