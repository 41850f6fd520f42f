#include "projflat/geodesic.hpp"

#include "projflat/errors.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace projflat {

std::string_view to_string(PathStatus status) {
  switch (status) {
    case PathStatus::kComplete: return "complete";
    case PathStatus::kBoundaryExit: return "boundary_exit";
    case PathStatus::kConvexityFailure: return "convexity_failure";
  }
  return "unknown";
}

GeodesicPath integrate_spray(const SprayFunction& spray, const Vector& x0, const Vector& y0,
                             double T, int steps) {
  if (steps <= 0 || !(T > 0.0)) throw std::invalid_argument("integrate: need T > 0, steps > 0");
  GeodesicPath path;
  path.step = T / steps;
  const double h = path.step;
  Vector x = x0;
  Vector v = y0;
  path.samples.push_back({0.0, x, v});
  const auto accel = [&spray](const Vector& px, const Vector& pv) -> Vector {
    return -2.0 * spray(px, pv);
  };
  for (int i = 0; i < steps; ++i) {
    try {
      const Vector k1x = v;
      const Vector k1v = accel(x, v);
      const Vector k2x = v + 0.5 * h * k1v;
      const Vector k2v = accel(x + 0.5 * h * k1x, k2x);
      const Vector k3x = v + 0.5 * h * k2v;
      const Vector k3v = accel(x + 0.5 * h * k2x, k3x);
      const Vector k4x = v + h * k3v;
      const Vector k4v = accel(x + h * k3x, k4x);
      const Vector nx = x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      const Vector nv = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      // The endpoint itself must be evaluable as well.
      (void)spray(nx, nv);
      x = nx;
      v = nv;
    } catch (const ConvexityError& e) {
      path.status = PathStatus::kConvexityFailure;
      path.diagnostic = e.what();
      return path;
    } catch (const DomainError& e) {
      path.status = PathStatus::kBoundaryExit;
      path.diagnostic = e.what();
      return path;
    }
    path.samples.push_back({(i + 1) * h, x, v});
  }
  return path;
}

GeodesicPath integrate(const MetricBundle& mb, const Vector& x0, const Vector& y0, double T,
                       int steps) {
  mb.space_form().require_admissible(x0);
  return integrate_spray(
      [&mb](const Vector& x, const Vector& v) { return spray_general(mb, {x, v}).G; }, x0, y0,
      T, steps);
}

double halving_gap(const MetricBundle& mb, const Vector& x0, const Vector& y0, double T,
                   int steps) {
  const GeodesicPath coarse = integrate(mb, x0, y0, T, steps);
  const GeodesicPath fine = integrate(mb, x0, y0, T, 2 * steps);
  if (coarse.status != PathStatus::kComplete || fine.status != PathStatus::kComplete) {
    throw DomainError("halving_gap: path did not complete");
  }
  return (coarse.samples.back().x - fine.samples.back().x).cwiseAbs().maxCoeff();
}

double straightness(const GeodesicPath& path) {
  const auto& samples = path.samples;
  if (samples.size() < 3) throw std::invalid_argument("straightness: need at least 3 samples");
  double diameter = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      diameter = std::max(diameter, (samples[i].x - samples[j].x).norm());
    }
  }
  const Vector direction = samples.front().v;
  if (diameter == 0.0 || direction.norm() == 0.0) {
    throw DomainError("straightness: degenerate path");
  }
  const Vector u = direction.normalized();
  const Vector& origin = samples.front().x;
  double worst = 0.0;
  for (const auto& sample : samples) {
    const Vector d = sample.x - origin;
    worst = std::max(worst, (d - d.dot(u) * u).norm());
  }
  return worst / diameter;
}

namespace {
std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}
}  // namespace

void write_trace_csv(std::ostream& out, const GeodesicPath& path) {
  const Eigen::Index n = path.samples.empty() ? 0 : path.samples.front().x.size();
  out << "t";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",x" << i;
  for (Eigen::Index i = 1; i <= n; ++i) out << ",v" << i;
  out << "\n";
  for (const auto& sample : path.samples) {
    out << format_number(sample.t);
    for (Eigen::Index i = 0; i < n; ++i) out << "," << format_number(sample.x[i]);
    for (Eigen::Index i = 0; i < n; ++i) out << "," << format_number(sample.v[i]);
    out << "\n";
  }
  out << "# status=" << to_string(path.status);
  if (path.samples.size() >= 3) {
    out << " straightness=" << format_number(straightness(path));
  }
  out << "\n";
}

}  // namespace projflat
