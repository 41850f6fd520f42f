#pragma once

#include "projflat/config.hpp"
#include "projflat/spray.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace projflat {

inline constexpr std::string_view kReportSchema = "projflat.report/1";

/// Seeded sampler of base points and directions. A base point is accepted when
/// |x| lies in [x_min, x_max], x is admissible for the space form and b²(x)
/// lies in [b2_min, b2_max], so sampled points stay inside the (b², s) region
/// that the convexity grid certifies.
class PointSampler {
 public:
  static constexpr int kMaxRejections = 10000;

  PointSampler(const OneForm& beta, const SampleSpec& spec);

  /// Unit vector in the Euclidean norm.
  Vector direction();
  /// Throws DomainError after kMaxRejections consecutive rejections.
  Vector point();
  PointTangent point_tangent();

 private:
  bool accept(const Vector& x);

  const OneForm* beta_;
  SampleSpec spec_;
  std::mt19937_64 rng_;
};

struct CheckRecord {
  std::string name;
  long points = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string diagnostic;
};

struct VerificationReport {
  std::uint64_t seed = 0;
  double tol_scale = 1.0;
  std::string bundle_echo;
  std::vector<CheckRecord> records;

  bool pass() const;
};

/// Runs, in order: convexity grid, PDE residual grid, 1-form condition and
/// k agreement, spray agreement, projective residual, geodesic straightness.
/// Domain errors inside a check become failed records.
VerificationReport run_verification(const BundleConfig& config, double tol_scale = 1.0);

std::string to_json(const VerificationReport& report);

/// φ-jet, scalar pack and PDE residual at (b², s) as a JSON object.
std::string phi_report_json(const BundleConfig& config, double b2, double s);

}  // namespace projflat
