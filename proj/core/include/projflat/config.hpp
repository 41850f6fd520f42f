#pragma once

#include "projflat/spray.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace projflat {

inline constexpr std::string_view kConfigSchema = "projflat.config/1";

/// Malformed or inconsistent bundle configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A univariate function given by builtin name or by expression in t.
struct FunctionSpec {
  enum class Kind { kBuiltin, kExpression };
  Kind kind = Kind::kBuiltin;
  std::string text;
};

struct CSpec {
  bool constant = true;
  double lambda = 1.0;
  std::string expression;
  double lo = 0.0;
  double hi = 0.0;
};

struct SampleSpec {
  int grid_b2 = 20;
  int grid_s = 20;
  double b2_min = 0.1;
  double b2_max = 0.9;
  std::uint64_t seed = 1;
  int points = 50;
  double x_min = 0.2;  // |x| range of sampled base points
  double x_max = 0.8;
  int geodesics = 20;
  double geodesic_time = 0.3;
  int geodesic_steps = 100;
};

struct BundleConfig {
  double kappa = 0.0;
  int n = 3;
  double epsilon = 1.0;
  std::vector<double> a;
  CSpec c;
  FunctionSpec f{FunctionSpec::Kind::kBuiltin, "one_plus_t"};
  FunctionSpec g{FunctionSpec::Kind::kBuiltin, "zero"};
  /// c used for φ when it differs from the c of the 1-form.
  std::optional<CSpec> phi_c;
  /// φ = Σ coeffs[k] s^k instead of a solution family.
  std::optional<std::vector<double>> phi_polynomial;
  double b0_sq_base = 1.0;
  SampleSpec sample;
  std::map<std::string, double> tolerances;

  double tolerance(const std::string& name) const;
};

/// Default tolerances, keyed by check name.
const std::map<std::string, double>& default_tolerances();

/// Parses and validates a JSON configuration. Unknown keys are rejected.
BundleConfig parse_config(std::string_view json_text);
BundleConfig load_config(const std::string& path);

/// Canonical JSON echo of a parsed configuration (sorted keys).
std::string config_echo(const BundleConfig& config);

CFunction make_c(const CSpec& spec);
JetFunction make_g(const FunctionSpec& spec);
PhiFamily make_phi_family(const BundleConfig& config);
OneForm make_one_form(const BundleConfig& config);
MetricBundle make_bundle(const BundleConfig& config);

}  // namespace projflat
