#pragma once

#include "projflat/one_form.hpp"
#include "projflat/phi_family.hpp"
#include "projflat/space_form.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace projflat {

/// The φ(b², s) of a metric: either a member of a solution family, or an
/// explicit function with analytic partials (used for controls outside the
/// classification).
class PhiModel {
 public:
  using JetFn = std::function<PhiJet(double b2, double s)>;

  PhiModel(PhiFamily family);  // NOLINT(google-explicit-constructor)
  static PhiModel explicit_jet(JetFn fn, std::string label);
  /// φ = Σ_k coeffs[k]·s^k, independent of b².
  static PhiModel polynomial_in_s(std::vector<double> coeffs);

  PhiJet jet(double b2, double s) const;
  const PhiFamily* family() const { return family_ ? &*family_ : nullptr; }
  const std::string& label() const { return label_; }

 private:
  PhiModel(JetFn fn, std::string label);

  std::optional<PhiFamily> family_;
  JetFn fn_;
  std::string label_;
};

/// F = α φ(b², β/α) on a space form.
class MetricBundle {
 public:
  MetricBundle(OneForm beta, PhiModel phi);

  const SpaceForm& space_form() const { return beta_.space_form(); }
  const OneForm& beta() const { return beta_; }
  const PhiModel& phi() const { return phi_; }
  int dim() const { return space_form().dim(); }

  /// φ belongs to a solution family whose c is the c of the 1-form.
  bool coupled() const;

  struct Evaluation {
    double alpha;
    double beta;
    double b2;
    double s;
    double F;
    PhiJet jet;
  };

  /// Throws ConvexityError when φ fails strong convexity at (b², s).
  Evaluation evaluate(const PointTangent& p) const;
  double F(const PointTangent& p) const { return evaluate(p).F; }

 private:
  OneForm beta_;
  PhiModel phi_;
};

/// Rational functions of the φ-jet entering the general spray formula.
struct ScalarPack {
  double Q;
  double R;
  double Theta;
  double Psi;
  double Pi;
  double Omega;
};

ScalarPack scalar_pack(const PhiJet& jet);

struct SprayResult {
  Vector G;
  double P = 0.0;
  /// ‖G − P y‖∞ / (1 + ‖G‖∞)
  double residual = 0.0;
};

/// ½ of the y-Hessian of F², by finite differences.
Matrix fundamental_tensor(const MetricBundle& mb, const PointTangent& p);

/// Gⁱ = ¼ g^{il}{[F²]_{xᵐyˡ}yᵐ − [F²]_{xˡ}}, P = F_{xᵏ}yᵏ/(2F).
SprayResult spray_definitional(const MetricBundle& mb, const PointTangent& p);

/// The general (α, β) spray assembled from αG, the scalar pack and the
/// covariant jet of β. P is the Euclidean projection of G on y.
SprayResult spray_general(const MetricBundle& mb, const PointTangent& p);
SprayResult spray_general(const MetricBundle& mb, const PointTangent& p, const BetaJet& jet);

/// Gⁱ = αGⁱ + kα{(c − 1)(b² − s²)φ₂/(2φ) + b²(2sφ₁ + φ₂)/(2φ)}yⁱ with the
/// closed-form k(x) of the 1-form. Empty when the 1-form is parallel or is
/// not of the conformal-deformation type.
std::optional<SprayResult> spray_closed_form(const MetricBundle& mb, const PointTangent& p);

/// Residual of the definitional spray against its own projective factor.
double projective_residual(const MetricBundle& mb, const PointTangent& p);

/// ‖a − b‖∞ / (1 + ‖a‖∞).
double relative_difference(const Vector& a, const Vector& b);

}  // namespace projflat
