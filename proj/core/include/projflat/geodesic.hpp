#pragma once

#include "projflat/spray.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace projflat {

struct PathSample {
  double t;
  Vector x;
  Vector v;
};

enum class PathStatus {
  kComplete,
  kBoundaryExit,      // left 1 + κ|x|² ≥ margin, or the 1-form's domain
  kConvexityFailure,  // F stopped being strongly convex along the path
};

std::string_view to_string(PathStatus status);

struct GeodesicPath {
  std::vector<PathSample> samples;
  double step = 0.0;
  std::string method = "rk4";
  PathStatus status = PathStatus::kComplete;
  std::string diagnostic;
};

/// Right-hand side of ẍ = −2G(x, ẋ).
using SprayFunction = std::function<Vector(const Vector& x, const Vector& v)>;

/// Classical fixed-step RK4 on (x, v) ↦ (v, −2G(x, v)). Stops with a partial
/// path when a stage leaves the domain of the spray.
GeodesicPath integrate_spray(const SprayFunction& spray, const Vector& x0, const Vector& y0,
                             double T, int steps);

/// Geodesic of a metric bundle, driven by the general (α, β) spray.
GeodesicPath integrate(const MetricBundle& mb, const Vector& x0, const Vector& y0, double T,
                       int steps);

/// Endpoint change between `steps` and `2*steps` integrations (∞-norm).
double halving_gap(const MetricBundle& mb, const Vector& x0, const Vector& y0, double T,
                   int steps);

/// Largest Euclidean distance from the samples to the line x(0) + span(v(0)),
/// divided by the path diameter.
double straightness(const GeodesicPath& path);

/// CSV with header t,x1..xn,v1..vn and a trailing "# straightness=..." line.
void write_trace_csv(std::ostream& out, const GeodesicPath& path);

}  // namespace projflat
