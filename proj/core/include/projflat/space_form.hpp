#pragma once

#include <Eigen/Core>

#include <vector>

namespace projflat {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Christoffel symbols Γᵏ_ij stored as one symmetric n×n matrix per upper index k.
using Christoffel = std::vector<Matrix>;

/// A point of the tangent bundle in the standard chart.
struct PointTangent {
  Vector x;
  Vector y;
};

/// Constant-curvature Riemannian metric in the projective normal form
///
///   α_κ(x, y) = sqrt((1 + κ|x|²)|y|² − κ⟨x, y⟩²) / (1 + κ|x|²),
///
/// defined on {1 + κ|x|² > 0} (all of R^n for κ ≥ 0, a ball for κ < 0).
/// Evaluations require 1 + κ|x|² ≥ kAdmissibilityMargin.
class SpaceForm {
 public:
  static constexpr double kAdmissibilityMargin = 1e-8;

  SpaceForm(double kappa, int dim);

  double kappa() const { return kappa_; }
  int dim() const { return dim_; }

  /// 1 + κ|x|².
  double conformal_factor(const Vector& x) const;
  bool admissible(const Vector& x) const;
  /// Throws DomainError when x is not admissible or has the wrong length.
  void require_admissible(const Vector& x) const;

  double alpha(const PointTangent& p) const;
  double alpha(const Vector& x, const Vector& y) const { return alpha({x, y}); }

  /// a_ij = [(1 + κ|x|²)δ_ij − κ x_i x_j] / (1 + κ|x|²)².
  Matrix metric(const Vector& x) const;
  /// a^ij = (1 + κ|x|²)(δ_ij + κ x_i x_j).
  Matrix inverse_metric(const Vector& x) const;
  /// ∂a_ij/∂x^k, analytic; entry k of the result holds the matrix ∂_k a.
  std::vector<Matrix> metric_derivative(const Vector& x) const;

  /// Levi-Civita symbols from the analytic metric derivative.
  Christoffel christoffel(const Vector& x) const;
  /// Same symbols, with ∂a_ij/∂x^k taken by five-point finite differences of
  /// metric(). This is the reference path for cross-checks.
  Christoffel christoffel_numeric(const Vector& x) const;

  /// Riemannian spray αGⁱ = ½ Γⁱ_jk yʲ yᵏ.
  Vector spray(const PointTangent& p) const;

  /// ‖β_x‖²_α = a^ij b_i b_j for a covector b at x.
  double covector_norm_sq(const Vector& x, const Vector& b) const;

 private:
  void require_dim(const Vector& v, const char* what) const;
  Christoffel assemble(const Matrix& inverse,
                       const std::vector<Matrix>& derivative) const;

  double kappa_;
  int dim_;
};

}  // namespace projflat
