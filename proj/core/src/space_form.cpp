#include "projflat/space_form.hpp"

#include "projflat/calculus.hpp"
#include "projflat/errors.hpp"

#include <cmath>
#include <string>

namespace projflat {

SpaceForm::SpaceForm(double kappa, int dim) : kappa_(kappa), dim_(dim) {
  if (dim < 2) throw std::invalid_argument("SpaceForm: dimension must be >= 2");
  if (!std::isfinite(kappa)) throw std::invalid_argument("SpaceForm: bad kappa");
}

void SpaceForm::require_dim(const Vector& v, const char* what) const {
  if (v.size() != dim_) {
    throw DomainError(std::string(what) + ": expected a vector of length " +
                      std::to_string(dim_));
  }
}

double SpaceForm::conformal_factor(const Vector& x) const {
  return 1.0 + kappa_ * x.squaredNorm();
}

bool SpaceForm::admissible(const Vector& x) const {
  return x.size() == dim_ && x.allFinite() &&
         conformal_factor(x) >= kAdmissibilityMargin;
}

void SpaceForm::require_admissible(const Vector& x) const {
  require_dim(x, "SpaceForm");
  if (!admissible(x)) {
    throw DomainError("SpaceForm: point outside 1 + kappa|x|^2 > 0");
  }
}

double SpaceForm::alpha(const PointTangent& p) const {
  require_admissible(p.x);
  require_dim(p.y, "SpaceForm::alpha");
  if (p.y.isZero(0.0)) throw DomainError("SpaceForm::alpha: y = 0");
  const double d = conformal_factor(p.x);
  const double xy = p.x.dot(p.y);
  const double radicand = d * p.y.squaredNorm() - kappa_ * xy * xy;
  return std::sqrt(radicand) / d;
}

Matrix SpaceForm::metric(const Vector& x) const {
  require_admissible(x);
  const double d = conformal_factor(x);
  Matrix a = d * Matrix::Identity(dim_, dim_) - kappa_ * x * x.transpose();
  return a / (d * d);
}

Matrix SpaceForm::inverse_metric(const Vector& x) const {
  require_admissible(x);
  const double d = conformal_factor(x);
  return d * (Matrix::Identity(dim_, dim_) + kappa_ * x * x.transpose());
}

std::vector<Matrix> SpaceForm::metric_derivative(const Vector& x) const {
  require_admissible(x);
  const double d = conformal_factor(x);
  const Matrix numerator =
      d * Matrix::Identity(dim_, dim_) - kappa_ * x * x.transpose();
  std::vector<Matrix> out(dim_);
  for (int k = 0; k < dim_; ++k) {
    // ∂_k of the numerator is 2κx_k δ − κ(e_k xᵀ + x e_kᵀ); ∂_k D = 2κx_k.
    Matrix dnum = 2.0 * kappa_ * x[k] * Matrix::Identity(dim_, dim_);
    dnum.row(k) -= kappa_ * x.transpose();
    dnum.col(k) -= kappa_ * x;
    out[k] = dnum / (d * d) - numerator * (4.0 * kappa_ * x[k]) / (d * d * d);
  }
  return out;
}

Christoffel SpaceForm::assemble(const Matrix& inverse,
                                const std::vector<Matrix>& derivative) const {
  // Γᵏ_ij = ½ a^{km} (∂_i a_mj + ∂_j a_mi − ∂_m a_ij)
  Christoffel gamma(dim_, Matrix::Zero(dim_, dim_));
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      Vector lowered(dim_);
      for (int m = 0; m < dim_; ++m) {
        lowered[m] = 0.5 * (derivative[i](m, j) + derivative[j](m, i) -
                            derivative[m](i, j));
      }
      const Vector raised = inverse * lowered;
      for (int k = 0; k < dim_; ++k) {
        gamma[k](i, j) = raised[k];
        gamma[k](j, i) = raised[k];
      }
    }
  }
  return gamma;
}

Christoffel SpaceForm::christoffel(const Vector& x) const {
  return assemble(inverse_metric(x), metric_derivative(x));
}

Christoffel SpaceForm::christoffel_numeric(const Vector& x) const {
  require_admissible(x);
  const auto flat = [this](const Vector& p) -> Vector {
    const Matrix a = metric(p);
    return Eigen::Map<const Vector>(a.data(), a.size());
  };
  const Matrix jac = calculus::jacobian(flat, x);
  std::vector<Matrix> derivative(dim_);
  for (int k = 0; k < dim_; ++k) {
    derivative[k] = Eigen::Map<const Matrix>(jac.col(k).data(), dim_, dim_);
  }
  return assemble(inverse_metric(x), derivative);
}

Vector SpaceForm::spray(const PointTangent& p) const {
  require_dim(p.y, "SpaceForm::spray");
  const Christoffel gamma = christoffel(p.x);
  Vector g(dim_);
  for (int i = 0; i < dim_; ++i) {
    g[i] = 0.5 * p.y.dot(gamma[i] * p.y);
  }
  return g;
}

double SpaceForm::covector_norm_sq(const Vector& x, const Vector& b) const {
  require_dim(b, "SpaceForm::covector_norm_sq");
  return b.dot(inverse_metric(x) * b);
}

}  // namespace projflat
