#include "projflat_cli/cli.hpp"

#include "projflat/config.hpp"
#include "projflat/errors.hpp"
#include "projflat/geodesic.hpp"
#include "projflat/harness.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

namespace projflat::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("projflat", sink);
  logger->set_pattern("projflat: %l: %v");
  logger->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("PROJFLAT_LOG")) {
    const spdlog::level::level_enum level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept "off" when asked for.
    if (level != spdlog::level::off || std::string(env) == "off") {
      logger->set_level(level);
    } else {
      logger->warn("ignoring PROJFLAT_LOG={}", env);
    }
  }
  return logger;
}

struct Common {
  std::string config;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  double tol_scale = 1.0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "bundle configuration (JSON)")->required();
  cmd->add_option("--out", c.out_path, "output file (default: stdout)");
  cmd->add_option("--seed", c.seed, "override sample.seed");
  cmd->add_option("--tol-scale", c.tol_scale, "multiply every tolerance")
      ->check(CLI::PositiveNumber);
}

BundleConfig load(const Common& c) {
  BundleConfig cfg = load_config(c.config);
  if (c.seed) cfg.sample.seed = *c.seed;
  return cfg;
}

void emit(const Common& c, std::ostream& out, const std::string& text) {
  if (c.out_path.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(c.out_path, std::ios::binary);
  if (!file) throw UsageError("cannot open output file '" + c.out_path + "'");
  file << text;
  if (!file.flush()) throw UsageError("write failed for '" + c.out_path + "'");
}

Vector to_vector(const std::vector<double>& v, int n, const char* name) {
  if (static_cast<int>(v.size()) != n) {
    throw UsageError(std::string(name) + " needs " + std::to_string(n) + " components");
  }
  return Eigen::Map<const Vector>(v.data(), n);
}

int cmd_verify(const Common& c, std::ostream& out, spdlog::logger& log) {
  const BundleConfig cfg = load(c);
  log.info("verify {} (seed {}, tol-scale {})", c.config, cfg.sample.seed, c.tol_scale);
  const VerificationReport report = run_verification(cfg, c.tol_scale);
  for (const CheckRecord& r : report.records) {
    const auto level = r.pass ? spdlog::level::info : spdlog::level::warn;
    log.log(level, "{:<22} {} max={:.3e} tol={:.1e} {}", r.name, r.pass ? "pass" : "FAIL",
            r.max_residual, r.tolerance, r.diagnostic);
  }
  emit(c, out, to_json(report));
  return report.pass() ? kPass : kFail;
}

struct TraceArgs {
  std::vector<double> x0;
  std::vector<double> y0;
  double time = 0.3;
  int steps = 100;
};

int cmd_trace(const Common& c, const TraceArgs& t, std::ostream& out, spdlog::logger& log) {
  const BundleConfig cfg = load(c);
  const MetricBundle mb = make_bundle(cfg);
  const Vector x0 = to_vector(t.x0, cfg.n, "--x0");
  const Vector y0 = to_vector(t.y0, cfg.n, "--y0");
  if (!(t.time > 0.0) || t.steps < 1) throw UsageError("--T must be positive and --steps >= 1");
  // Rejects inadmissible or non-convex initial data up front.
  (void)mb.evaluate({x0, y0});

  const GeodesicPath path = integrate(mb, x0, y0, t.time, t.steps);
  std::ostringstream csv;
  write_trace_csv(csv, path);
  emit(c, out, csv.str());

  const double tol = c.tol_scale * cfg.tolerance("geodesic_straightness");
  const double dev = path.samples.size() >= 3 ? straightness(path) : 0.0;
  log.info("trace: {} samples, status {}, straightness {:.3e}", path.samples.size(),
           to_string(path.status), dev);
  if (path.status != PathStatus::kComplete) {
    log.warn("trace stopped early: {}", path.diagnostic);
    return kFail;
  }
  return dev <= tol ? kPass : kFail;
}

int cmd_phi(const Common& c, double b2, double s, std::ostream& out, spdlog::logger& log) {
  const BundleConfig cfg = load(c);
  log.info("phi at b2={} s={}", b2, s);
  emit(c, out, phi_report_json(cfg, b2, s));
  return kPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto log = make_logger(err);

  CLI::App app{"Projectively flat general (alpha, beta)-metrics: verification and traces", "projflat"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "projflat 0.1.0");

  Common common;
  CLI::App* verify = app.add_subcommand("verify", "run the verification suite, write a JSON report");
  add_common(verify, common);

  TraceArgs trace_args;
  CLI::App* trace = app.add_subcommand("trace", "integrate one geodesic, write a CSV trace");
  add_common(trace, common);
  trace->add_option("--x0", trace_args.x0, "initial point")->required()->delimiter(',');
  trace->add_option("--y0", trace_args.y0, "initial velocity")->required()->delimiter(',');
  trace->add_option("--T", trace_args.time, "integration time")->capture_default_str();
  trace->add_option("--steps", trace_args.steps, "RK4 steps")->capture_default_str();

  double b2 = 0.5;
  double s = 0.0;
  CLI::App* phi = app.add_subcommand("phi", "print the phi jet and spray scalars at (b^2, s)");
  add_common(phi, common);
  phi->add_option("--b2", b2, "b^2")->required();
  phi->add_option("--s", s, "s = beta/alpha")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    std::ostringstream help_out, help_err;
    app.exit(e, help_out, help_err);
    out << help_out.str();
    return kPass;
  } catch (const CLI::ParseError& e) {
    std::ostringstream ignored, msg;
    app.exit(e, ignored, msg);
    err << msg.str();
    return kUsage;
  }

  try {
    if (*verify) return cmd_verify(common, out, *log);
    if (*trace) return cmd_trace(common, trace_args, out, *log);
    return cmd_phi(common, b2, s, out, *log);
  } catch (const ConfigError& e) {
    log->error("{}", e.what());
  } catch (const UsageError& e) {
    log->error("{}", e.what());
  } catch (const DomainError& e) {
    log->error("invalid input: {}", e.what());
  } catch (const std::exception& e) {
    log->error("{}", e.what());
  }
  return kUsage;
}

}  // namespace projflat::cli
