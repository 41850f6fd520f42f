#pragma once

#include "projflat/expression.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace projflat {

/// A univariate function reported as a second-order jet (h, h′, h″).
using JetFunction = std::function<Jet2(double)>;

/// The coupling function c(b²) of the classification, either a constant λ
/// (closed forms everywhere) or a smooth callable on [lo, hi] with lo > 0.
class CFunction {
 public:
  static CFunction constant(double lambda);
  static CFunction callable(std::function<double(double)> fn, double lo,
                            double hi, std::string label = "c(t)");

  bool is_constant() const { return !fn_; }
  double lambda() const { return lambda_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::string& label() const { return label_; }

  /// c(b²). Throws DomainError outside [lo, hi] for the callable variant.
  double operator()(double b2) const;

 private:
  CFunction() = default;

  double lambda_ = 1.0;
  std::function<double(double)> fn_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::string label_;
};

/// μ, ν, ρ and their b²-derivatives at one b².
struct MuNu {
  double mu;
  double nu;
  double dmu;   // dμ/d(b²) = −cν
  double dnu;   // dν/d(b²) = ν(c − 1)/b²
  double rho;   // (−ν)^{1/2}
  double drho;  // ρ(c − 1)/(2b²)
};

/// ν = −exp(∫_{base}^{b²} (c − 1)/t dt) and μ = −∫_{base}^{b²} cν dt + base.
///
/// With this integration constant (cν = (tν)′) the antiderivative collapses
/// to μ = −b²ν, which is what is evaluated; mu_by_quadrature() integrates
/// the definition directly. Base 1 reproduces ν = −b^{2(λ−1)}, μ = b^{2λ}.
MuNu mu_nu(const CFunction& c, double b2, double base = 1.0);

/// μ from the defining integral with adaptive Simpson quadrature.
double mu_by_quadrature(const CFunction& c, double b2, double base = 1.0);

/// φ and its partials at (b², s); index 1 is ∂/∂(b²), index 2 is ∂/∂s.
struct PhiJet {
  double b2 = 0.0;
  double s = 0.0;
  double phi = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi12 = 0.0;
  double phi22 = 0.0;
};

/// [cb² − (c − 1)s²]φ₂₂ − 2b²(φ₁ − sφ₁₂).
double pde_residual(const PhiJet& jet, double c);

enum class ConvexityStatus {
  kOk,
  kNotPositive,              // φ ≤ 0
  kFirstConditionViolated,   // φ − sφ₂ ≤ 0
  kSecondConditionViolated,  // φ − sφ₂ + (b² − s²)φ₂₂ ≤ 0
  kRangeViolation,           // |s| > b
  kDomainViolation,          // φ cannot be evaluated at (b², s)
};

std::string_view to_string(ConvexityStatus status);

/// Positivity of φ and the strong convexity conditions on a jet. In dimension
/// two the first condition is not required.
ConvexityStatus convexity_check(const PhiJet& jet, bool two_dimensional = false);

/// ∫₀ˢ f′(μ + νz²) dz together with its μ- and ν-derivatives, in closed form.
struct SpeedIntegral {
  double value;
  double d_mu;
  double d_nu;
};
using SpeedIntegralFn = std::function<SpeedIntegral(double s, double mu, double nu)>;

struct FGPair {
  JetFunction f;
  JetFunction g;
  std::string f_label = "f";
  std::string g_label = "g";
  /// Closed form of the inner integral; when absent it is integrated.
  SpeedIntegralFn speed_integral;
};

enum class QuadratureMode { kGaussLegendre, kAdaptiveSimpson };

/// Solutions of [cb² − (c − 1)s²]φ₂₂ = 2b²(φ₁ − sφ₁₂) of the form
///
///   φ = f(μ + νs²) − 2νs ∫₀ˢ f′(μ + νz²) dz + g(b²)s.
class PhiFamily {
 public:
  enum class Range { kStrict, kExtended };

  PhiFamily(FGPair fg, CFunction c, double base = 1.0,
            QuadratureMode mode = QuadratureMode::kGaussLegendre);

  /// Named f with closed-form inner integral: one, inv_sqrt, one_plus_t,
  /// one_plus_t_sq, log1p. Throws std::invalid_argument for other names.
  static PhiFamily builtin(std::string_view name, double lambda, JetFunction g);
  static PhiFamily builtin(std::string_view name, CFunction c, JetFunction g);
  /// The f of a builtin, without the closed-form integral.
  static JetFunction builtin_f(std::string_view name);
  static SpeedIntegralFn builtin_speed_integral(std::string_view name);

  /// Analytic jet. kStrict enforces |s| ≤ b (up to rounding); kExtended
  /// evaluates the formula wherever f is defined.
  PhiJet jet(double b2, double s, Range range = Range::kStrict) const;
  double value(double b2, double s, Range range = Range::kStrict) const {
    return jet(b2, s, range).phi;
  }

  /// u = μ + νs² = −ν(b² − s²), the argument of f.
  double argument(double b2, double s) const;

  double pde_residual(double b2, double s) const;
  ConvexityStatus convexity(double b2, double s, bool two_dimensional = false) const;

  /// φ₁(b², 0) = −f′(μ)cν vanishes, i.e. φ depends on b² only through gs.
  bool b2_dependence_vanishes_at(double b2) const;

  const FGPair& fg() const { return fg_; }
  const CFunction& c() const { return c_; }
  double base() const { return base_; }
  QuadratureMode quadrature_mode() const { return mode_; }
  PhiFamily with_quadrature(QuadratureMode mode) const;
  /// The same family with the closed-form inner integral removed.
  PhiFamily generic() const;

 private:
  SpeedIntegral integrate(double s, double mu, double nu) const;

  FGPair fg_;
  CFunction c_;
  double base_;
  QuadratureMode mode_;
};

/// Common g choices.
namespace g_functions {
JetFunction zero();
JetFunction constant(double value);
JetFunction linear(double slope, double intercept = 0.0);
}  // namespace g_functions

JetFunction jet_function(const Expression& expression);

}  // namespace projflat
