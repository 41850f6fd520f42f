#include "projflat/spray.hpp"

#include "projflat/calculus.hpp"
#include "projflat/errors.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <utility>

namespace projflat {

namespace {

double projection_residual(const Vector& g, double p, const Vector& y) {
  return (g - p * y).cwiseAbs().maxCoeff() / (1.0 + g.cwiseAbs().maxCoeff());
}

bool same_c(const CFunction& lhs, const CFunction& rhs) {
  if (lhs.is_constant() != rhs.is_constant()) return false;
  if (lhs.is_constant()) return lhs.lambda() == rhs.lambda();
  return lhs.label() == rhs.label() && lhs.lo() == rhs.lo() && lhs.hi() == rhs.hi();
}

}  // namespace

PhiModel::PhiModel(PhiFamily family)
    : family_(std::move(family)),
      label_("family(" + family_->fg().f_label + ", " + family_->c().label() + ")") {}

PhiModel::PhiModel(JetFn fn, std::string label) : fn_(std::move(fn)), label_(std::move(label)) {}

PhiModel PhiModel::explicit_jet(JetFn fn, std::string label) {
  if (!fn) throw std::invalid_argument("PhiModel: empty jet function");
  return PhiModel(std::move(fn), std::move(label));
}

PhiModel PhiModel::polynomial_in_s(std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("PhiModel: empty polynomial");
  std::string label = "poly_s(";
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    label += (k ? "," : "") + std::to_string(coeffs[k]);
  }
  label += ")";
  return PhiModel(
      [coeffs](double b2, double s) {
        PhiJet j;
        j.b2 = b2;
        j.s = s;
        // Horner for φ, φ′, φ″ together.
        double p0 = 0.0, p1 = 0.0, p2 = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
          p2 = p2 * s + 2.0 * p1;
          p1 = p1 * s + p0;
          p0 = p0 * s + *it;
        }
        j.phi = p0;
        j.phi2 = p1;
        j.phi22 = p2;
        return j;
      },
      std::move(label));
}

PhiJet PhiModel::jet(double b2, double s) const {
  if (family_) return family_->jet(b2, s);
  return fn_(b2, s);
}

MetricBundle::MetricBundle(OneForm beta, PhiModel phi)
    : beta_(std::move(beta)), phi_(std::move(phi)) {}

bool MetricBundle::coupled() const {
  const PhiFamily* fam = phi_.family();
  const OneFormSpec* spec = beta_.spec();
  return fam && spec && same_c(fam->c(), spec->c) && fam->base() == spec->base;
}

MetricBundle::Evaluation MetricBundle::evaluate(const PointTangent& p) const {
  Evaluation e{};
  e.alpha = space_form().alpha(p);
  const BetaValue bv = beta_.eval(p.x);
  e.b2 = bv.b2;
  e.beta = bv.b.dot(p.y);
  e.s = e.beta / e.alpha;
  // |s| ≤ b holds exactly; clamp the rounding excess.
  const double b = std::sqrt(e.b2);
  if (std::abs(e.s) > b) e.s = std::copysign(b, e.s);
  e.jet = phi_.jet(e.b2, e.s);
  const ConvexityStatus status = convexity_check(e.jet, dim() == 2);
  if (status != ConvexityStatus::kOk) {
    throw ConvexityError("F: strong convexity fails (" + std::string(to_string(status)) + ")");
  }
  e.F = e.alpha * e.jet.phi;
  return e;
}

ScalarPack scalar_pack(const PhiJet& j) {
  const double first = j.phi - j.s * j.phi2;
  const double second = first + (j.b2 - j.s * j.s) * j.phi22;
  if (first == 0.0 || second == 0.0 || j.phi == 0.0) {
    throw DomainError("scalar_pack: vanishing denominator");
  }
  ScalarPack k{};
  k.Q = j.phi2 / first;
  k.R = j.phi1 / first;
  k.Theta = (first * j.phi2 - j.s * j.phi * j.phi22) / (2.0 * j.phi * second);
  k.Psi = j.phi22 / (2.0 * second);
  k.Pi = (first * j.phi12 - j.s * j.phi1 * j.phi22) / (first * second);
  k.Omega = 2.0 * j.phi1 / j.phi - (j.s * j.phi + (j.b2 - j.s * j.s) * j.phi2) / j.phi * k.Pi;
  return k;
}

namespace {

calculus::ScalarField f_squared_field(const MetricBundle& mb) {
  const int n = mb.dim();
  return calculus::ScalarField(
      [&mb, n](const Vector& v) {
        const double f = mb.F({v.head(n), v.tail(n)});
        return f * f;
      },
      [&mb, n](const Vector& v) { return mb.space_form().admissible(v.head(n)); }, "F^2");
}

Matrix y_hessian(const calculus::ScalarField& f2, const Vector& v, int n) {
  Matrix h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      h(i, j) = calculus::diff2(f2, v, n + i, n + j);
      h(j, i) = h(i, j);
    }
  }
  return h;
}

Vector join(const PointTangent& p) {
  Vector v(p.x.size() + p.y.size());
  v << p.x, p.y;
  return v;
}

}  // namespace

Matrix fundamental_tensor(const MetricBundle& mb, const PointTangent& p) {
  const calculus::ScalarField f2 = f_squared_field(mb);
  const Matrix g = 0.5 * y_hessian(f2, join(p), mb.dim());
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) {
    throw ConvexityError("fundamental tensor is not positive definite");
  }
  return g;
}

SprayResult spray_definitional(const MetricBundle& mb, const PointTangent& p) {
  const int n = mb.dim();
  const calculus::ScalarField f2 = f_squared_field(mb);
  const Vector v = join(p);

  const Matrix hess = y_hessian(f2, v, n);
  Vector bracket(n);
  for (int l = 0; l < n; ++l) {
    double mixed = 0.0;
    for (int m = 0; m < n; ++m) mixed += calculus::diff2(f2, v, m, n + l) * p.y[m];
    bracket[l] = mixed - calculus::diff1(f2, v, l);
  }
  // G = ¼ g⁻¹ bracket with g = ½ hess.
  Eigen::LLT<Matrix> llt(hess);
  if (llt.info() != Eigen::Success) {
    throw ConvexityError("fundamental tensor is not positive definite");
  }
  SprayResult out;
  out.G = 0.5 * llt.solve(bracket);

  const calculus::ScalarField f(
      [&mb, n](const Vector& w) { return mb.F({w.head(n), w.tail(n)}); },
      [&mb, n](const Vector& w) { return mb.space_form().admissible(w.head(n)); }, "F");
  double fx_y = 0.0;
  for (int k = 0; k < n; ++k) fx_y += calculus::diff1(f, v, k) * p.y[k];
  out.P = fx_y / (2.0 * mb.F(p));
  out.residual = projection_residual(out.G, out.P, p.y);
  return out;
}

SprayResult spray_general(const MetricBundle& mb, const PointTangent& p) {
  return spray_general(mb, p, mb.beta().jet(p.x));
}

SprayResult spray_general(const MetricBundle& mb, const PointTangent& p, const BetaJet& bj) {
  const SpaceForm& sf = mb.space_form();
  const double alpha = sf.alpha(p);
  const double beta = bj.b.dot(p.y);
  double s = beta / alpha;
  const double b = std::sqrt(bj.b2);
  if (std::abs(s) > b) s = std::copysign(b, s);
  const PhiJet jet = mb.phi().jet(bj.b2, s);
  const ScalarPack k = scalar_pack(jet);

  const Matrix a_inv = sf.inverse_metric(p.x);
  const double r00 = p.y.dot(bj.r * p.y);
  const double r0 = bj.r_vec.dot(p.y);
  const double s0 = bj.s_vec.dot(p.y);
  const Vector s_i0 = a_inv * (bj.s * p.y);
  const Vector r_up = a_inv * bj.r_vec;
  const Vector s_up = a_inv * bj.s_vec;

  const double common = -2.0 * alpha * k.Q * s0 + r00 + 2.0 * alpha * alpha * k.R * bj.r_scalar;
  SprayResult out;
  out.G = sf.spray(p) + alpha * k.Q * s_i0 +
          (k.Theta * common + alpha * k.Omega * (r0 + s0)) / alpha * p.y +
          (k.Psi * common + alpha * k.Pi * (r0 + s0)) * bj.b_up -
          alpha * alpha * k.R * (r_up + s_up);
  out.P = out.G.dot(p.y) / p.y.squaredNorm();
  out.residual = projection_residual(out.G, out.P, p.y);
  return out;
}

std::optional<SprayResult> spray_closed_form(const MetricBundle& mb, const PointTangent& p) {
  const OneFormSpec* spec = mb.beta().spec();
  if (!spec) return std::nullopt;
  const SpaceForm& sf = mb.space_form();
  if (spec->epsilon == 0.0 && (sf.kappa() == 0.0 || spec->a.isZero(0.0))) {
    return std::nullopt;  // β is parallel; k is undefined
  }
  const MetricBundle::Evaluation e = mb.evaluate(p);
  const double c = spec->c(e.b2);
  const double k = mb.beta().k_formula(p.x);
  const PhiJet& j = e.jet;
  const double brace = (c - 1.0) * (e.b2 - e.s * e.s) * j.phi2 / (2.0 * j.phi) +
                       e.b2 * (2.0 * e.s * j.phi1 + j.phi2) / (2.0 * j.phi);
  const Vector alpha_g = sf.spray(p);
  const double alpha_p = alpha_g.dot(p.y) / p.y.squaredNorm();
  SprayResult out;
  out.P = alpha_p + k * e.alpha * brace;
  out.G = alpha_g + k * e.alpha * brace * p.y;
  out.residual = projection_residual(out.G, out.P, p.y);
  return out;
}

double projective_residual(const MetricBundle& mb, const PointTangent& p) {
  return spray_definitional(mb, p).residual;
}

double relative_difference(const Vector& a, const Vector& b) {
  return (a - b).cwiseAbs().maxCoeff() / (1.0 + a.cwiseAbs().maxCoeff());
}

}  // namespace projflat
