#include "projflat/calculus.hpp"
#include "projflat/errors.hpp"
#include "projflat/space_form.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

namespace projflat::calculus {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

TEST(Diff1, SquareAtThree) {
  const ScalarField f([](const Vector& v) { return v[0] * v[0]; });
  EXPECT_NEAR(diff1(f, vec({3.0}), 0), 6.0, 1e-10);
}

TEST(Diff1, InnerProductIsLinearInX) {
  // v = (x, y) with n = 3; ∂/∂x_j ⟨x, y⟩ = y_j.
  const ScalarField f([](const Vector& v) { return v.head(3).dot(v.tail(3)); });
  const Vector p = vec({0.3, -1.2, 2.0, 0.7, -0.4, 1.9});
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(diff1(f, p, j), p[3 + j], 1e-10);
}

TEST(Diff1, RichardsonAgreesOnAlphaSquared) {
  const SpaceForm sf(1.0, 2);
  const ScalarField f([&](const Vector& v) {
    const double a = sf.alpha(v.head(2), v.tail(2));
    return a * a;
  });
  const Vector p = vec({0.2, 0.1, 1.0, 1.0});
  EXPECT_NEAR(diff1(f, p, 0), diff1(f, p, 0, Stencil::kRichardson), 1e-8);
}

TEST(Diff1, QuadraticsAreExact) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-10.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = coef(rng), b = coef(rng), c = coef(rng), d = coef(rng);
    const ScalarField f([=](const Vector& v) {
      return a * v[0] * v[0] + b * v[0] * v[1] + c * v[1] + d;
    });
    const Vector p = vec({coef(rng) / 10.0, coef(rng) / 10.0});
    EXPECT_NEAR(diff1(f, p, 0), 2.0 * a * p[0] + b * p[1], 1e-10);
    EXPECT_NEAR(diff1(f, p, 1), b * p[0] + c, 1e-10);
  }
}

TEST(Diff1, RejectsBadIndex) {
  const ScalarField f([](const Vector& v) { return v[0]; });
  EXPECT_THROW(diff1(f, vec({1.0}), 1), std::out_of_range);
}

TEST(Diff2, Examples) {
  const ScalarField prod([](const Vector& v) { return v[0] * v[1]; });
  EXPECT_NEAR(diff2(prod, vec({0.4, -2.0}), 0, 1), 1.0, 1e-8);
  const ScalarField sq([](const Vector& v) { return v[0] * v[0]; });
  EXPECT_NEAR(diff2(sq, vec({5.0}), 0, 0), 2.0, 1e-7);
}

TEST(Diff2, EuclideanNormSquaredHessian) {
  // [|y|²]_{y¹y¹} = 2 at y = (0, 1).
  const ScalarField f([](const Vector& y) { return y.squaredNorm(); });
  EXPECT_NEAR(diff2(f, vec({0.0, 1.0}), 1, 1), 2.0, 1e-7);
}

TEST(Diff2, Symmetric) {
  const ScalarField f([](const Vector& v) {
    return std::exp(0.3 * v[0]) * std::sin(v[1]) + v[0] * v[0] * v[2] / (1.0 + v[1] * v[1]);
  });
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Vector p = vec({u(rng), u(rng), u(rng)});
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(diff2(f, p, i, j), diff2(f, p, j, i), 1e-7);
    }
  }
}

TEST(ScalarField, DomainAndNonFinite) {
  const ScalarField f([](const Vector& v) { return std::log(v[0]); },
                      [](const Vector& v) { return v[0] > 0.0; }, "log");
  EXPECT_THROW(f(vec({-1.0})), DomainError);
  const ScalarField g([](const Vector&) { return std::numeric_limits<double>::quiet_NaN(); });
  EXPECT_THROW(g(vec({1.0})), DomainError);
  // A stencil that steps outside the domain surfaces the error.
  EXPECT_THROW(diff1(f, vec({1e-5}), 0), DomainError);
}

TEST(ScalarField, Deterministic) {
  const ScalarField f([](const Vector& v) { return std::sin(v[0]) * std::exp(v[1]); });
  const Vector p = vec({0.123, 0.456});
  EXPECT_EQ(f(p), f(p));
  EXPECT_EQ(diff2(f, p, 0, 1), diff2(f, p, 0, 1));
}

TEST(Jacobian, LinearMap) {
  Matrix A(2, 3);
  A << 1, 2, 3, -4, 5, 0.5;
  const Matrix J = jacobian([&](const Vector& v) -> Vector { return A * v; }, vec({0.1, 0.2, 0.3}));
  EXPECT_LT((J - A).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Quad, Examples) {
  EXPECT_NEAR(quad({[](double z) { return 2.0 * z; }, 0.0, 1.0}), 1.0, 1e-10);
  EXPECT_EQ(quad({[](double z) { return z; }, 0.0, 0.0}), 0.0);
  // f = 1 + t has f′ ≡ 1.
  EXPECT_NEAR(quad({[](double) { return 1.0; }, 0.0, 0.5}), 0.5, 1e-10);
}

TEST(Quad, Additive) {
  const auto f = [](double z) { return std::exp(-z * z) * std::cos(3.0 * z); };
  const double tol = 1e-10;
  const double whole = quad({f, 0.0, 2.0, tol});
  const double split = quad({f, 0.0, 0.7, tol}) + quad({f, 0.7, 2.0, tol});
  EXPECT_NEAR(whole, split, 2.0 * tol);
}

TEST(Quad, ClosedForms) {
  EXPECT_NEAR(quad({[](double z) { return 1.0 / (1.0 + z * z); }, 0.0, 1.0}), std::atan(1.0), 1e-10);
  EXPECT_NEAR(quad({[](double z) { return std::exp(z); }, -1.0, 2.0}), std::exp(2.0) - std::exp(-1.0),
              1e-10);
}

TEST(Quad, Errors) {
  EXPECT_THROW(quad({[](double z) { return z; }, 1.0, 0.0}), DomainError);
  EXPECT_THROW(quad({[](double z) { return 1.0 / std::sqrt(z); }, 0.0, 1.0}), DomainError);
  // Non-integrable oscillation cannot converge with a tiny depth budget.
  EXPECT_THROW(quad({[](double z) { return std::sin(1.0 / (z + 1e-3)); }, 0.0, 1.0, 1e-12, 3}),
               ConvergenceError);
}

TEST(GaussLegendre, PolynomialsAndSmooth) {
  EXPECT_NEAR(gauss_legendre([](double z) { return std::pow(z, 9); }, -1.0, 2.0), (1024.0 - 1.0) / 10.0,
              1e-11);
  EXPECT_NEAR(gauss_legendre([](double z) { return std::exp(z); }, 0.0, 1.0), std::exp(1.0) - 1.0, 1e-14);
}

TEST(SolveMonotone, Examples) {
  EXPECT_NEAR(solve_monotone([](double t) { return t; }, 0.7, {0.0, 1.0}), 0.7, 1e-12);
  EXPECT_NEAR(solve_monotone([](double t) { return t * t; }, 4.0, {1.0, 3.0}), 2.0, 1e-12);
  EXPECT_NEAR(solve_monotone([](double t) { return std::pow(t, 2.0); }, 9.0, {0.5, 10.0}), 3.0, 1e-12);
}

TEST(SolveMonotone, ReproducesTarget) {
  const auto h = [](double t) { return std::exp(t) - 2.0 * std::exp(-t); };  // increasing
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double target = h(u(rng));
    const double tol = 1e-12;
    EXPECT_LE(std::abs(h(solve_monotone(h, target, {-1.0, 3.0}, tol)) - target), tol);
  }
  // Decreasing functions are fine too.
  EXPECT_NEAR(solve_monotone([](double t) { return -t * t * t; }, -8.0, {0.0, 5.0}, 0.0), 2.0, 1e-14);
}

TEST(SolveMonotone, Errors) {
  EXPECT_THROW(solve_monotone([](double t) { return t; }, 5.0, {0.0, 1.0}), DomainError);
  EXPECT_THROW(solve_monotone([](double t) { return (t - 0.5) * (t - 0.5); }, 0.1, {0.0, 1.0}),
               DomainError);
  EXPECT_THROW(solve_monotone([](double t) { return t; }, 0.5, {1.0, 0.0}), DomainError);
}

}  // namespace
}  // namespace projflat::calculus
