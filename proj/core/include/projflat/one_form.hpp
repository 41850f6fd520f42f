#pragma once

#include "projflat/phi_family.hpp"
#include "projflat/space_form.hpp"

#include <functional>
#include <optional>
#include <string>

namespace projflat {

/// Parameters of the 1-form
///
///   β = ρ(b²)⁻¹ [ε⟨x,y⟩ + (1 + κ|x|²)⟨a,y⟩ − κ⟨a,x⟩⟨x,y⟩] / (1 + κ|x|²)^{3/2},
///   ρ(b²) = exp ∫ (c − 1)/(2b²) d(b²).
struct OneFormSpec {
  double epsilon = 1.0;
  Vector a;
  CFunction c = CFunction::constant(1.0);
  double base = 1.0;  // base point of the ρ antiderivative
};

/// A covector at x together with its α-norm.
struct BetaValue {
  Vector b;          // b_i
  double b2 = 0.0;   // a^{ij} b_i b_j
};

/// Covariant derivative of β and its decomposition at one point.
struct BetaJet {
  Vector x;
  Vector b;        // b_i
  Vector b_up;     // bⁱ = a^{ij} b_j
  double b2 = 0.0;
  Matrix cov;      // b_{i|j}, row i, column j
  Matrix r;        // r_ij, symmetric part
  Matrix s;        // s_ij, antisymmetric part
  Vector r_vec;    // r_j = bⁱ r_ij
  Vector s_vec;    // s_j = bⁱ s_ij
  double r_scalar = 0.0;  // r = r_j bʲ
};

struct ConditionResidual {
  double residual;     // max |b_{i|j} − k_fit[c(b²a_ij − b_ib_j) + b_ib_j]|
  double k_fit;        // single-k least squares
  double k_formula;    // ρ⁻¹(ε − κ⟨a,x⟩)/(cb²√(1 + κ|x|²))
  double k_from_conformal_part;  // two-basis fit: coefficient of (b²a − bb) over c
  double k_from_radial_part;     // two-basis fit: coefficient of bb
  double antisymmetric_norm;     // max |s_ij|
};

/// A scalar deformation ρ(t) with its derivative.
struct RhoFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::string label;

  static RhoFunction one();
  static RhoFunction identity();
  /// ρ = exp ∫_{base}^{t} (c − 1)/(2τ) dτ.
  static RhoFunction from_c(const CFunction& c, double base = 1.0);
};

/// A 1-form on a space form: either the conformal-deformation family above,
/// or an arbitrary smooth covector field (used for metrics outside the
/// classification).
class OneForm {
 public:
  using CovectorField = std::function<Vector(const Vector&)>;

  OneForm(SpaceForm sf, OneFormSpec spec);
  static OneForm from_field(SpaceForm sf, CovectorField field, std::string label);

  const SpaceForm& space_form() const { return sf_; }
  /// Null for covector-field forms.
  const OneFormSpec* spec() const { return spec_ ? &*spec_ : nullptr; }
  const std::string& label() const { return label_; }

  /// Conformal form β̃ = ρβ, with b̃_{i|j} = (ε − κ⟨a,x⟩)/√(1 + κ|x|²) a_ij.
  Vector beta_tilde(const Vector& x) const;

  /// Solves ρ(b²)²b² = ‖β̃‖²_α for b².
  double recover_b2(const Vector& x) const;

  BetaValue eval(const Vector& x) const;
  Vector covector(const Vector& x) const { return eval(x).b; }

  /// b_{i|j} = ∂_j b_i − Γᵏ_ij b_k with ∂_j b_i by finite differences.
  BetaJet jet(const Vector& x) const;

  /// Only for forms built from a OneFormSpec.
  double k_formula(const Vector& x) const;
  ConditionResidual condition_residual(const Vector& x) const;

  /// max |(ρβ)_{i|j} − [ρ b_{i|j} + 2ρ′ b_i(r_j + s_j)]|, the left side by
  /// differentiating ρ(b²(x))b_i(x) directly.
  double deformation_check(const RhoFunction& rho, const Vector& x) const;

  /// Covariant derivative of an arbitrary covector field on this space form.
  Matrix covariant_derivative(const CovectorField& field, const Vector& x) const;

 private:
  OneForm(SpaceForm sf, CovectorField field, std::string label);
  const OneFormSpec& require_spec(const char* what) const;

  SpaceForm sf_;
  std::optional<OneFormSpec> spec_;
  CovectorField field_;
  std::string label_;
};

}  // namespace projflat
