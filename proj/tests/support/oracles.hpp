#pragma once

// Hand-written closed forms used as independent oracles. Nothing in here
// calls into the library's φ construction.

#include "projflat/calculus.hpp"
#include "projflat/phi_family.hpp"

#include <cmath>
#include <functional>

namespace projflat::oracle {

// Literal special solutions for c ≡ λ.
inline double phi_one(double b2, double s, double g) { return 1.0 + g * s; }

inline double phi_inv_sqrt(double b2, double s, double lambda, double g) {
  const double b2l = std::pow(b2, lambda);
  const double b2l1 = std::pow(b2, lambda - 1.0);
  return std::sqrt(1.0 - b2l + b2l1 * s * s) / (1.0 - b2l) + g * s;
}

// Callers pass g(b²).
inline double phi_one_plus_t(double b2, double s, double lambda, double g) {
  return std::pow(b2, lambda - 1.0) * s * s + g * s + 1.0 + std::pow(b2, lambda);
}

inline double phi_one_plus_t_sq(double b2, double s, double lambda, double g) {
  return -std::pow(b2, 2.0 * (lambda - 1.0)) / 3.0 * std::pow(s, 4) +
         2.0 * std::pow(b2, 2.0 * lambda - 1.0) * s * s + g * s + 1.0 +
         std::pow(b2, 2.0 * lambda);
}

inline double phi_log1p(double b2, double s, double lambda, double g) {
  const double root = std::sqrt(1.0 + std::pow(b2, lambda));
  const double bl1 = std::pow(b2, 0.5 * (lambda - 1.0));  // b^{λ−1}
  return g * s + 2.0 * bl1 * std::atanh(bl1 * s / root) / root * s +
         std::log(1.0 + std::pow(b2, lambda) - std::pow(b2, lambda - 1.0) * s * s);
}

// Integral form for c ≡ λ with the inner integral done by adaptive Simpson:
// f(b^{2λ} − b^{2(λ−1)}s²) + 2b^{2(λ−1)} s ∫₀ˢ f′(b^{2λ} − b^{2(λ−1)}z²) dz + g s.
inline double phi_constant_c(const std::function<double(double)>& f,
                             const std::function<double(double)>& df, double b2, double s,
                             double lambda, double g) {
  const double p = std::pow(b2, lambda);
  const double q = std::pow(b2, lambda - 1.0);
  double integral = 0.0;
  if (s != 0.0) {
    const double lo = std::min(0.0, s);
    const double hi = std::max(0.0, s);
    integral = calculus::quad({[&](double z) { return df(p - q * z * z); }, lo, hi, 1e-13});
    if (s < 0.0) integral = -integral;
  }
  return f(p - q * s * s) + 2.0 * q * s * integral + g * s;
}

// Spherically symmetric form: f(b² − s²) + 2s ∫₀ˢ f′(b² − z²) dz + g s.
inline double phi_spherical(const std::function<double(double)>& f,
                            const std::function<double(double)>& df, double b2, double s,
                            double g) {
  return phi_constant_c(f, df, b2, s, 1.0, g);
}

// φ-partials by finite differences of φ(b², s) through the calculus module.
// First partials use the Richardson stencil; the mixed partial nests two of
// them, which tolerates φ growing fast in b² better than the product stencil.
struct FdJet {
  double phi1, phi2, phi12, phi22;
};

inline FdJet fd_jet(const std::function<double(double, double)>& phi, double b2, double s) {
  using calculus::Stencil;
  const calculus::ScalarField field([&](const calculus::Vector& v) { return phi(v[0], v[1]); });
  calculus::Vector p(2);
  p << b2, s;
  const calculus::ScalarField d_ds([&](const calculus::Vector& v) {
    return calculus::diff1(field, v, 1, Stencil::kRichardson);
  });
  return {calculus::diff1(field, p, 0, Stencil::kRichardson),
          calculus::diff1(field, p, 1, Stencil::kRichardson),
          calculus::diff1(d_ds, p, 0, Stencil::kRichardson), calculus::diff2(field, p, 1, 1)};
}

}  // namespace projflat::oracle
