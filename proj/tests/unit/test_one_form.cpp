#include "projflat/errors.hpp"
#include "projflat/harness.hpp"
#include "projflat/one_form.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace projflat {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

OneForm make(double kappa, int n, double eps, Vector a, CFunction c) {
  OneFormSpec spec;
  spec.epsilon = eps;
  spec.a = std::move(a);
  spec.c = std::move(c);
  return OneForm(SpaceForm(kappa, n), spec);
}

OneForm radial(double lambda, int n = 2) {
  return make(0.0, n, 1.0, Vector::Zero(n), CFunction::constant(lambda));
}

TEST(BetaTilde, Examples) {
  const Vector x = vec({0.3, -0.7});
  EXPECT_LT((radial(1.0).beta_tilde(x) - x).cwiseAbs().maxCoeff(), 1e-15);
  const OneForm constant = make(0.0, 2, 0.0, vec({1, 0}), CFunction::constant(1.0));
  EXPECT_LT((constant.beta_tilde(x) - vec({1, 0})).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BetaTilde, ConformalOnSphere) {
  const OneForm of = make(1.0, 2, 1.0, Vector::Zero(2), CFunction::constant(1.0));
  const Vector x = vec({1, 0});
  const Matrix cov = of.covariant_derivative([&](const Vector& p) { return of.beta_tilde(p); }, x);
  const Matrix expected = of.space_form().metric(x) / std::sqrt(2.0);
  EXPECT_LT((cov - expected).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(BetaTilde, ConformalFactorGeneral) {
  const Vector a = vec({0.2, -0.1, 0.3});
  for (double kappa : {-0.5, 1.0}) {
    const OneForm of = make(kappa, 3, 0.7, a, CFunction::constant(1.0));
    const Vector x = vec({0.3, 0.2, -0.4});
    const Matrix cov = of.covariant_derivative([&](const Vector& p) { return of.beta_tilde(p); }, x);
    const double factor =
        (0.7 - kappa * a.dot(x)) / std::sqrt(of.space_form().conformal_factor(x));
    EXPECT_LT((cov - factor * of.space_form().metric(x)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(RecoverB2, Examples) {
  const Vector x = vec({0.6, 0.8});  // |x| = 1
  EXPECT_DOUBLE_EQ(radial(1.0).recover_b2(0.5 * x), 0.25);
  EXPECT_NEAR(radial(2.0).recover_b2(0.5 * x), 0.5, 1e-15);
  EXPECT_NEAR(radial(3.0).recover_b2(0.5 * x), std::pow(0.25, 1.0 / 3.0), 1e-15);
}

TEST(RecoverB2, CallableCMatchesClosedForm) {
  const CFunction two = CFunction::callable([](double) { return 2.0; }, 0.01, 10.0);
  const OneForm of = make(0.0, 2, 1.0, Vector::Zero(2), two);
  EXPECT_NEAR(of.recover_b2(vec({0.6, 0.0})), 0.6, 1e-12);
  EXPECT_NEAR(of.recover_b2(vec({1.5, 2.0})), 2.5, 1e-12);
}

TEST(RecoverB2, SelfConsistent) {
  const CFunction varying = CFunction::callable([](double t) { return 1.0 + t; }, 0.01, 4.0);
  for (const CFunction& c : {CFunction::constant(0.5), CFunction::constant(2.0), varying}) {
    const OneForm of = make(-0.5, 3, 1.0, vec({0.1, 0.2, -0.1}), c);
    SampleSpec spec;
    spec.seed = 9;
    PointSampler sampler(of, spec);
    for (int i = 0; i < 20; ++i) {
      const Vector x = sampler.point();
      const double tilde = of.space_form().covector_norm_sq(x, of.beta_tilde(x));
      const BetaValue v = of.eval(x);
      const MuNu m = mu_nu(c, v.b2);
      EXPECT_NEAR(m.rho * m.rho * v.b2, tilde, 1e-10);
      EXPECT_NEAR(of.space_form().covector_norm_sq(x, v.b), v.b2, 1e-9);
    }
  }
}

TEST(Eval, Examples) {
  const Vector x = vec({0.3, 0.4});
  const BetaValue one = radial(1.0).eval(x);
  EXPECT_LT((one.b - x).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(one.b2, 0.25, 1e-15);
  const BetaValue unit = radial(2.0).eval(vec({1, 0}));
  EXPECT_LT((unit.b - vec({1, 0})).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(unit.b2, 1.0, 1e-15);
  const BetaValue two = radial(2.0).eval(vec({2, 0}));
  EXPECT_LT((two.b - vec({std::sqrt(2.0), 0})).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(two.b2, 2.0, 1e-14);
}

TEST(Eval, SingularAtZeroB2) {
  const OneForm of = make(0.0, 2, 1.0, Vector::Zero(2),
                          CFunction::callable([](double t) { return 1.0 + t; }, 0.01, 4.0));
  EXPECT_THROW(of.eval(Vector::Zero(2)), DomainError);
  EXPECT_THROW(of.eval(vec({10.0, 0.0})), DomainError);  // b² beyond the c range
  EXPECT_THROW(make(-1.0, 2, 1.0, Vector::Zero(2), CFunction::constant(1.0)).eval(vec({1.0, 0.0})),
               DomainError);
}

TEST(Construction, RejectsSignChangingC) {
  EXPECT_THROW(make(0.0, 2, 1.0, Vector::Zero(2),
                    CFunction::callable([](double t) { return t - 1.0; }, 0.1, 2.0)),
               std::invalid_argument);
  EXPECT_THROW(make(0.0, 2, 1.0, Vector::Zero(3), CFunction::constant(1.0)), std::invalid_argument);
}

TEST(Jet, SphericalCase) {
  const OneForm of = radial(1.0, 3);
  const Vector x = vec({0.3, -0.2, 0.5});
  const BetaJet j = of.jet(x);
  EXPECT_LT((j.cov - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((j.r - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT(j.s.cwiseAbs().maxCoeff(), 1e-9);
  const ConditionResidual c = of.condition_residual(x);
  EXPECT_NEAR(c.k_fit, 1.0 / x.squaredNorm(), 1e-8);
  EXPECT_NEAR(c.k_formula, 1.0 / x.squaredNorm(), 1e-14);
  EXPECT_LE(c.residual, 1e-8);
}

TEST(Jet, CEqualsTwoAtUnitPoint) {
  const OneForm of = radial(2.0);
  const BetaJet j = of.jet(vec({1, 0}));
  Matrix expected(2, 2);
  expected << 0.5, 0.0, 0.0, 1.0;
  EXPECT_LT((j.cov - expected).cwiseAbs().maxCoeff(), 1e-9);
  const ConditionResidual c = of.condition_residual(vec({1, 0}));
  EXPECT_LE(c.residual, 1e-8);
  EXPECT_NEAR(c.k_fit, 0.5, 1e-9);
  EXPECT_NEAR(c.k_formula, 0.5, 1e-15);
}

TEST(Jet, DecompositionIsExact) {
  const OneForm of = make(1.0, 3, 0.5, vec({0.1, 0.3, -0.2}), CFunction::constant(2.0));
  const BetaJet j = of.jet(vec({0.4, 0.1, 0.3}));
  EXPECT_EQ((j.r - j.r.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((j.s + j.s.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT((j.r + j.s - j.cov).cwiseAbs().maxCoeff(), 1e-15);
  const Vector b_up = of.space_form().inverse_metric(j.x) * j.b;
  EXPECT_LT((b_up - j.b_up).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(j.r_scalar, j.b_up.dot(j.r * j.b_up), 1e-14);
}

TEST(ConditionResidual, SphereFullPipeline) {
  const OneForm of = make(1.0, 2, 1.0, Vector::Zero(2), CFunction::constant(1.0));
  const ConditionResidual c = of.condition_residual(vec({0.2, 0.1}));
  EXPECT_LE(c.residual, 1e-6);
  EXPECT_LE(std::abs(c.k_fit - c.k_formula), 1e-7 * (1.0 + std::abs(c.k_formula)));
}

TEST(ConditionResidual, RandomPointsAcrossCurvatureAndC) {
  const CFunction varying = CFunction::callable([](double t) { return 1.0 + t; }, 0.01, 4.0);
  for (double kappa : {-0.5, 0.0, 1.0}) {
    for (const CFunction& c :
         {CFunction::constant(1.0), CFunction::constant(2.0), CFunction::constant(0.5), varying}) {
      const OneForm of = make(kappa, 3, 1.0, vec({0.1, -0.2, 0.05}), c);
      SampleSpec spec;
      spec.seed = 21;
      PointSampler sampler(of, spec);
      for (int i = 0; i < 15; ++i) {
        const ConditionResidual r = of.condition_residual(sampler.point());
        EXPECT_LE(r.residual, 1e-6);
        EXPECT_LE(r.antisymmetric_norm, 1e-8);
        EXPECT_LE(std::abs(r.k_fit - r.k_formula), 1e-7 * (1.0 + std::abs(r.k_formula)));
        // Both basis coefficients come from the same k.
        EXPECT_NEAR(r.k_from_conformal_part, r.k_formula, 1e-6 * (1.0 + std::abs(r.k_formula)));
        EXPECT_NEAR(r.k_from_radial_part, r.k_formula, 1e-6 * (1.0 + std::abs(r.k_formula)));
      }
    }
  }
}

TEST(ConditionResidual, DetectsNonConformalField) {
  // b_i = (x₂, 0): b_{i|j} is not of the required shape.
  const OneForm of = OneForm::from_field(
      SpaceForm(0.0, 2), [](const Vector& x) { return Vector(vec({x[1], 0.0})); }, "shear");
  EXPECT_THROW(of.condition_residual(vec({0.3, 0.4})), std::logic_error);
  const Matrix cov =
      of.covariant_derivative([&](const Vector& x) { return of.covector(x); }, vec({0.3, 0.4}));
  EXPECT_NEAR(cov(0, 1), 1.0, 1e-10);
  EXPECT_NEAR(cov(1, 0), 0.0, 1e-10);
}

TEST(Deformation, Examples) {
  const OneForm of = radial(1.0, 3);
  const Vector x = vec({0.3, 0.4, -0.2});
  EXPECT_LE(of.deformation_check(RhoFunction::one(), x), 1e-12);
  EXPECT_LE(of.deformation_check(RhoFunction::identity(), x), 1e-7);
}

TEST(Deformation, RhoFromCRecoversConformalForm) {
  const CFunction c = CFunction::constant(2.0);
  const OneForm of = make(0.0, 3, 1.0, Vector::Zero(3), c);
  const RhoFunction rho = RhoFunction::from_c(c);
  const Vector x = vec({0.5, -0.3, 0.2});
  EXPECT_LE(of.deformation_check(rho, x), 1e-6);
  // ρβ is conformal: (ρβ)_{i|j} = c k b² ρ a_ij.
  const Matrix cov = of.covariant_derivative(
      [&](const Vector& p) {
        const BetaValue v = of.eval(p);
        return Vector(rho.value(v.b2) * v.b);
      },
      x);
  const double b2 = of.eval(x).b2;
  const double factor = c(b2) * of.k_formula(x) * b2 * rho.value(b2);
  EXPECT_LT((cov - factor * of.space_form().metric(x)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Deformation, RandomPoints) {
  for (double kappa : {-0.5, 1.0}) {
    for (double lambda : {0.5, 2.0}) {
      const CFunction c = CFunction::constant(lambda);
      const OneForm of = make(kappa, 3, 1.0, vec({0.1, 0.0, -0.1}), c);
      SampleSpec spec;
      PointSampler sampler(of, spec);
      for (const RhoFunction& rho : {RhoFunction::one(), RhoFunction::identity(), RhoFunction::from_c(c)}) {
        for (int i = 0; i < 10; ++i) EXPECT_LE(of.deformation_check(rho, sampler.point()), 1e-6);
      }
    }
  }
}

}  // namespace
}  // namespace projflat
