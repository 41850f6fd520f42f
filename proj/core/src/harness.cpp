#include "projflat/harness.hpp"

#include "projflat/errors.hpp"
#include "projflat/geodesic.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

namespace projflat {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
  return out;
}

CheckRecord make_record(std::string name, double tolerance) {
  CheckRecord r;
  r.name = std::move(name);
  r.tolerance = tolerance;
  return r;
}

// Runs body; any exception turns the record into a failure with diagnostic.
void guarded(CheckRecord& record, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    record.pass = false;
    record.max_residual = kInf;
    record.diagnostic = e.what();
  }
}

double coupling_c(const MetricBundle& mb, double b2) {
  if (const OneFormSpec* spec = mb.beta().spec()) return spec->c(b2);
  return mb.phi().family()->c()(b2);
}

struct SprayPoint {
  PointTangent p;
  SprayResult definitional;
};

}  // namespace

PointSampler::PointSampler(const OneForm& beta, const SampleSpec& spec)
    : beta_(&beta), spec_(spec), rng_(spec.seed) {}

Vector PointSampler::direction() {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(beta_->space_form().dim());
  do {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng_);
  } while (v.norm() < 1e-6);
  return v.normalized();
}

bool PointSampler::accept(const Vector& x) {
  if (!beta_->space_form().admissible(x)) return false;
  try {
    const double b2 = beta_->eval(x).b2;
    if (b2 < spec_.b2_min || b2 > spec_.b2_max) return false;
  } catch (const DomainError&) {
    return false;
  }
  return true;
}

Vector PointSampler::point() {
  std::uniform_real_distribution<double> radius(spec_.x_min, spec_.x_max);
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    Vector x = direction() * radius(rng_);
    if (accept(x)) return x;
  }
  throw DomainError("sampler: no base point with b^2 in [" + std::to_string(spec_.b2_min) + ", " +
                    std::to_string(spec_.b2_max) + "] and |x| in [" + std::to_string(spec_.x_min) +
                    ", " + std::to_string(spec_.x_max) + "]");
}

PointTangent PointSampler::point_tangent() {
  Vector x = point();
  Vector y = direction();
  return {std::move(x), std::move(y)};
}

bool VerificationReport::pass() const {
  return !records.empty() &&
         std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
}

VerificationReport run_verification(const BundleConfig& cfg, double tol_scale) {
  VerificationReport report;
  report.seed = cfg.sample.seed;
  report.tol_scale = tol_scale;
  report.bundle_echo = config_echo(cfg);
  const MetricBundle mb = make_bundle(cfg);
  const SampleSpec& sample = cfg.sample;
  const int n = cfg.n;
  const auto tol = [&](const std::string& name) { return tol_scale * cfg.tolerance(name); };

  PointSampler sampler(mb.beta(), sample);
  std::vector<PointTangent> points;
  std::string sampling_error;
  try {
    for (int i = 0; i < sample.points; ++i) points.push_back(sampler.point_tangent());
  } catch (const DomainError& e) {
    sampling_error = e.what();
  }
  const auto need_points = [&] {
    if (!sampling_error.empty()) throw DomainError(sampling_error);
  };

  // Strong convexity on the open (b², s) grid, then positive definiteness of
  // g_ij at the sampled points.
  {
    CheckRecord r = make_record("convexity", 0.0);
    guarded(r, [&] {
      double min_margin = kInf;
      long count = 0;
      for (double b2 : linspace(sample.b2_min, sample.b2_max, sample.grid_b2)) {
        const double b = std::sqrt(b2);
        for (int j = 0; j < sample.grid_s; ++j) {
          const double s = b * (-1.0 + (2.0 * j + 1.0) / sample.grid_s);
          const PhiJet jet = mb.phi().jet(b2, s);
          const double first = jet.phi - s * jet.phi2;
          const double second = first + (b2 - s * s) * jet.phi22;
          min_margin = std::min({min_margin, jet.phi, second});
          if (n != 2) min_margin = std::min(min_margin, first);
          ++count;
        }
      }
      need_points();
      long not_pd = 0;
      for (const auto& p : points) {
        try {
          (void)fundamental_tensor(mb, p);
        } catch (const ConvexityError&) {
          ++not_pd;
        }
        ++count;
      }
      r.points = count;
      r.max_residual = -min_margin;
      r.pass = min_margin > 0.0 && not_pd == 0;
      r.diagnostic = "min margin " + std::to_string(min_margin) + ", non-positive-definite g: " +
                     std::to_string(not_pd);
    });
    report.records.push_back(r);
  }

  {
    CheckRecord r = make_record("pde_residual", tol("pde_residual"));
    guarded(r, [&] {
      double worst = 0.0;
      long count = 0;
      for (double b2 : linspace(sample.b2_min, sample.b2_max, sample.grid_b2)) {
        const double b = std::sqrt(b2);
        for (double s : linspace(-b, b, sample.grid_s)) {
          worst = std::max(worst, std::abs(pde_residual(mb.phi().jet(b2, s), coupling_c(mb, b2))));
          ++count;
        }
      }
      r.points = count;
      r.max_residual = worst;
      r.pass = worst <= r.tolerance;
    });
    report.records.push_back(r);
  }

  {
    CheckRecord cond = make_record("beta_condition", tol("beta_condition"));
    CheckRecord anti = make_record("beta_antisymmetry", tol("beta_antisymmetry"));
    CheckRecord kagree = make_record("k_agreement", tol("k_agreement"));
    guarded(cond, [&] {
      need_points();
      double worst_cond = 0.0, worst_anti = 0.0, worst_k = 0.0;
      for (const auto& p : points) {
        const ConditionResidual c = mb.beta().condition_residual(p.x);
        worst_cond = std::max(worst_cond, c.residual);
        worst_anti = std::max(worst_anti, c.antisymmetric_norm);
        worst_k = std::max(worst_k, std::abs(c.k_fit - c.k_formula) / (1.0 + std::abs(c.k_formula)));
      }
      const long count = static_cast<long>(points.size());
      cond.points = anti.points = kagree.points = count;
      cond.max_residual = worst_cond;
      anti.max_residual = worst_anti;
      kagree.max_residual = worst_k;
      cond.pass = worst_cond <= cond.tolerance;
      anti.pass = worst_anti <= anti.tolerance;
      kagree.pass = worst_k <= kagree.tolerance;
    });
    if (!cond.diagnostic.empty()) {
      anti.pass = kagree.pass = false;
      anti.max_residual = kagree.max_residual = kInf;
      anti.diagnostic = kagree.diagnostic = cond.diagnostic;
    }
    report.records.push_back(cond);
    report.records.push_back(anti);
    report.records.push_back(kagree);
  }

  std::vector<SprayPoint> sprays;
  {
    CheckRecord r = make_record("spray_agreement", tol("spray_agreement"));
    guarded(r, [&] {
      double worst = 0.0;
      long closed_count = 0;
      need_points();
      const bool coupled = mb.coupled();
      for (const auto& p : points) {
        const SprayResult def = spray_definitional(mb, p);
        const SprayResult gen = spray_general(mb, p);
        worst = std::max(worst, relative_difference(def.G, gen.G));
        if (coupled) {
          if (auto closed = spray_closed_form(mb, p)) {
            worst = std::max(worst, relative_difference(def.G, closed->G));
            ++closed_count;
          }
        }
        sprays.push_back({p, def});
      }
      r.points = static_cast<long>(points.size());
      r.max_residual = worst;
      r.pass = worst <= r.tolerance;
      r.diagnostic = coupled ? "three routes, closed form at " + std::to_string(closed_count) + " points"
                             : "definitional vs general; closed form skipped (uncoupled bundle)";
    });
    report.records.push_back(r);
  }

  {
    CheckRecord r = make_record("projective_residual", tol("projective_residual"));
    guarded(r, [&] {
      double worst = 0.0;
      need_points();
      if (sprays.size() != points.size()) {
        sprays.clear();
        for (const auto& p : points) sprays.push_back({p, spray_definitional(mb, p)});
      }
      for (const auto& sp : sprays) worst = std::max(worst, sp.definitional.residual);
      r.points = static_cast<long>(sprays.size());
      r.max_residual = worst;
      r.pass = worst <= r.tolerance;
    });
    report.records.push_back(r);
  }

  {
    CheckRecord r = make_record("geodesic_straightness", tol("geodesic_straightness"));
    CheckRecord conv = make_record("geodesic_convergence", tol("geodesic_convergence"));
    guarded(r, [&] {
      double worst = 0.0, worst_gap = 0.0;
      int partial = 0;
      for (int i = 0; i < sample.geodesics; ++i) {
        const Vector x0 = sampler.point();
        const Vector y0 = sampler.direction();
        const GeodesicPath path = integrate(mb, x0, y0, sample.geodesic_time, sample.geodesic_steps);
        if (path.status != PathStatus::kComplete) ++partial;
        if (path.samples.size() < 3) {
          throw DomainError("geodesic from sample " + std::to_string(i) + " stopped immediately: " +
                            path.diagnostic);
        }
        worst = std::max(worst, straightness(path));
        if (path.status == PathStatus::kComplete) {
          const GeodesicPath fine =
              integrate(mb, x0, y0, sample.geodesic_time, 2 * sample.geodesic_steps);
          if (fine.status == PathStatus::kComplete) {
            worst_gap = std::max(
                worst_gap, (fine.samples.back().x - path.samples.back().x).cwiseAbs().maxCoeff());
          }
        }
      }
      r.points = conv.points = sample.geodesics;
      r.max_residual = worst;
      r.pass = worst <= r.tolerance;
      conv.max_residual = worst_gap;
      conv.pass = worst_gap <= conv.tolerance;
      r.diagnostic = std::to_string(partial) + " partial paths";
    });
    if (r.max_residual == kInf) {
      conv.pass = false;
      conv.max_residual = kInf;
      conv.diagnostic = r.diagnostic;
    }
    report.records.push_back(r);
    report.records.push_back(conv);
  }
  return report;
}

std::string to_json(const VerificationReport& report) {
  ordered_json j;
  j["schema"] = kReportSchema;
  j["seed"] = report.seed;
  j["tol_scale"] = report.tol_scale;
  j["bundle"] = ordered_json::parse(report.bundle_echo);
  ordered_json records = ordered_json::array();
  for (const CheckRecord& r : report.records) {
    ordered_json rec;
    rec["name"] = r.name;
    rec["points"] = r.points;
    if (std::isfinite(r.max_residual)) {
      rec["max_residual"] = r.max_residual;
    } else {
      rec["max_residual"] = nullptr;
    }
    rec["tolerance"] = r.tolerance;
    rec["pass"] = r.pass;
    if (!r.diagnostic.empty()) rec["diagnostic"] = r.diagnostic;
    records.push_back(rec);
  }
  j["records"] = records;
  j["pass"] = report.pass();
  return j.dump(2) + "\n";
}

std::string phi_report_json(const BundleConfig& cfg, double b2, double s) {
  const MetricBundle mb = make_bundle(cfg);
  const PhiJet jet = mb.phi().jet(b2, s);
  const ScalarPack k = scalar_pack(jet);
  ordered_json j;
  j["b2"] = b2;
  j["s"] = s;
  j["phi"] = jet.phi;
  j["phi1"] = jet.phi1;
  j["phi2"] = jet.phi2;
  j["phi12"] = jet.phi12;
  j["phi22"] = jet.phi22;
  j["Q"] = k.Q;
  j["R"] = k.R;
  j["Theta"] = k.Theta;
  j["Psi"] = k.Psi;
  j["Pi"] = k.Pi;
  j["Omega"] = k.Omega;
  j["pde_residual"] = pde_residual(jet, coupling_c(mb, b2));
  j["convexity"] = std::string(to_string(convexity_check(jet, cfg.n == 2)));
  return j.dump(2) + "\n";
}

}  // namespace projflat
