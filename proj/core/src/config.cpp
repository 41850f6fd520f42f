#include "projflat/config.hpp"

#include "projflat/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace projflat {

namespace {

using nlohmann::json;

const std::set<std::string, std::less<>> kBuiltinF = {"one", "inv_sqrt", "one_plus_t",
                                                      "one_plus_t_sq", "log1p"};
const std::set<std::string, std::less<>> kBuiltinG = {"zero", "one", "identity"};

[[noreturn]] void fail(const std::string& what) { throw ConfigError("config: " + what); }

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
  if (!obj.is_object()) fail(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) fail("unknown key '" + key + "' in " + where);
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where + " must be finite");
  return d;
}

int integer(const json& v, const std::string& where, int min_value) {
  if (!v.is_number_integer()) fail(where + " must be an integer");
  const long long i = v.get<long long>();
  if (i < min_value || i > 1'000'000) fail(where + " is out of range");
  return static_cast<int>(i);
}

std::vector<double> number_list(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where + " must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::pair<double, double> range(const json& v, const std::string& where) {
  const auto r = number_list(v, where);
  if (r.size() != 2 || !(r[0] < r[1])) fail(where + " must be [lo, hi] with lo < hi");
  return {r[0], r[1]};
}

CSpec parse_c(const json& v, const std::string& where) {
  reject_unknown(v, {"constant", "expression", "range"}, where);
  CSpec c;
  if (v.contains("constant")) {
    if (v.contains("expression") || v.contains("range")) {
      fail(where + ": 'constant' excludes 'expression' and 'range'");
    }
    c.constant = true;
    c.lambda = number(v["constant"], where + ".constant");
    if (c.lambda == 0.0) fail(where + ".constant must be nonzero");
    return c;
  }
  if (!v.contains("expression") || !v.contains("range")) {
    fail(where + " needs either 'constant' or 'expression' with 'range'");
  }
  if (!v["expression"].is_string()) fail(where + ".expression must be a string");
  c.constant = false;
  c.expression = v["expression"].get<std::string>();
  std::tie(c.lo, c.hi) = range(v["range"], where + ".range");
  if (!(c.lo > 0.0)) fail(where + ".range must lie in b^2 > 0");
  try {
    (void)Expression::parse(c.expression);
  } catch (const ExpressionError& e) {
    fail(e.what());
  }
  return c;
}

FunctionSpec parse_function(const json& v, const std::string& where,
                            const std::set<std::string, std::less<>>& builtins) {
  reject_unknown(v, {"builtin", "expression"}, where);
  if (v.contains("builtin") == v.contains("expression")) {
    fail(where + " needs exactly one of 'builtin' or 'expression'");
  }
  FunctionSpec f;
  if (v.contains("builtin")) {
    if (!v["builtin"].is_string()) fail(where + ".builtin must be a string");
    f.kind = FunctionSpec::Kind::kBuiltin;
    f.text = v["builtin"].get<std::string>();
    if (!builtins.count(f.text)) fail(where + ": unknown builtin '" + f.text + "'");
    return f;
  }
  if (!v["expression"].is_string()) fail(where + ".expression must be a string");
  f.kind = FunctionSpec::Kind::kExpression;
  f.text = v["expression"].get<std::string>();
  try {
    (void)Expression::parse(f.text);
  } catch (const ExpressionError& e) {
    fail(e.what());
  }
  return f;
}

json c_to_json(const CSpec& c) {
  if (c.constant) return json{{"constant", c.lambda}};
  return json{{"expression", c.expression}, {"range", {c.lo, c.hi}}};
}

json function_to_json(const FunctionSpec& f) {
  return json{{f.kind == FunctionSpec::Kind::kBuiltin ? "builtin" : "expression", f.text}};
}

}  // namespace

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> defaults = {
      {"pde_residual", 1e-8},        {"beta_condition", 1e-6},
      {"beta_antisymmetry", 1e-8},   {"k_agreement", 1e-7},
      {"spray_agreement", 1e-6},     {"projective_residual", 1e-6},
      {"geodesic_straightness", 1e-5}, {"geodesic_convergence", 1e-7},
  };
  return defaults;
}

double BundleConfig::tolerance(const std::string& name) const {
  if (auto it = tolerances.find(name); it != tolerances.end()) return it->second;
  return default_tolerances().at(name);
}

BundleConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  reject_unknown(root, {"schema", "kappa", "n", "epsilon", "a", "c", "f", "g", "phi_c", "phi",
                        "b0_sq_base", "sample", "tolerances"},
                 "config");
  BundleConfig cfg;
  if (root.contains("schema")) {
    if (!root["schema"].is_string() || root["schema"].get<std::string>() != kConfigSchema) {
      fail("schema must be \"" + std::string(kConfigSchema) + "\"");
    }
  }
  if (root.contains("kappa")) cfg.kappa = number(root["kappa"], "kappa");
  if (root.contains("n")) cfg.n = integer(root["n"], "n", 2);
  if (root.contains("epsilon")) cfg.epsilon = number(root["epsilon"], "epsilon");
  cfg.a.assign(cfg.n, 0.0);
  if (root.contains("a")) {
    cfg.a = number_list(root["a"], "a");
    if (static_cast<int>(cfg.a.size()) != cfg.n) fail("a must have n entries");
  }
  if (root.contains("c")) cfg.c = parse_c(root["c"], "c");
  if (root.contains("phi_c")) cfg.phi_c = parse_c(root["phi_c"], "phi_c");
  if (root.contains("f")) cfg.f = parse_function(root["f"], "f", kBuiltinF);
  if (root.contains("g")) cfg.g = parse_function(root["g"], "g", kBuiltinG);
  if (root.contains("phi")) {
    reject_unknown(root["phi"], {"polynomial_s"}, "phi");
    if (!root["phi"].contains("polynomial_s")) fail("phi needs 'polynomial_s'");
    cfg.phi_polynomial = number_list(root["phi"]["polynomial_s"], "phi.polynomial_s");
    if (cfg.phi_polynomial->empty()) fail("phi.polynomial_s must not be empty");
  }
  if (root.contains("b0_sq_base")) {
    cfg.b0_sq_base = number(root["b0_sq_base"], "b0_sq_base");
    if (!(cfg.b0_sq_base > 0.0)) fail("b0_sq_base must be positive");
  }
  if (root.contains("sample")) {
    const json& s = root["sample"];
    reject_unknown(s, {"grid", "b2_range", "seed", "points", "x_range", "geodesics",
                       "geodesic_time", "geodesic_steps"},
                   "sample");
    SampleSpec& out = cfg.sample;
    if (s.contains("grid")) {
      if (!s["grid"].is_array() || s["grid"].size() != 2) fail("sample.grid must be [nb2, ns]");
      out.grid_b2 = integer(s["grid"][0], "sample.grid[0]", 2);
      out.grid_s = integer(s["grid"][1], "sample.grid[1]", 2);
    }
    if (s.contains("b2_range")) std::tie(out.b2_min, out.b2_max) = range(s["b2_range"], "sample.b2_range");
    if (s.contains("seed")) {
      if (!s["seed"].is_number_unsigned()) fail("sample.seed must be a non-negative integer");
      out.seed = s["seed"].get<std::uint64_t>();
    }
    if (s.contains("points")) out.points = integer(s["points"], "sample.points", 1);
    if (s.contains("x_range")) std::tie(out.x_min, out.x_max) = range(s["x_range"], "sample.x_range");
    if (s.contains("geodesics")) out.geodesics = integer(s["geodesics"], "sample.geodesics", 0);
    if (s.contains("geodesic_time")) {
      out.geodesic_time = number(s["geodesic_time"], "sample.geodesic_time");
      if (!(out.geodesic_time > 0.0)) fail("sample.geodesic_time must be positive");
    }
    if (s.contains("geodesic_steps")) out.geodesic_steps = integer(s["geodesic_steps"], "sample.geodesic_steps", 2);
    if (out.b2_min < 0.0) fail("sample.b2_range must be non-negative");
    if (out.x_min < 0.0) fail("sample.x_range must be non-negative");
  }
  if (cfg.kappa < 0.0 && 1.0 + cfg.kappa * cfg.sample.x_max * cfg.sample.x_max <= 1e-3) {
    fail("sample.x_range reaches the boundary of the ball 1 + kappa|x|^2 > 0");
  }
  if (root.contains("tolerances")) {
    const json& t = root["tolerances"];
    if (!t.is_object()) fail("tolerances must be an object");
    for (const auto& [key, value] : t.items()) {
      if (!default_tolerances().count(key)) fail("unknown tolerance '" + key + "'");
      const double v = number(value, "tolerances." + key);
      if (!(v >= 0.0)) fail("tolerances." + key + " must be non-negative");
      cfg.tolerances[key] = v;
    }
  }
  // Construct once so semantic errors surface as configuration errors.
  try {
    (void)make_bundle(cfg);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(e.what());
  }
  return cfg;
}

BundleConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_echo(const BundleConfig& cfg) {
  json j;
  j["schema"] = kConfigSchema;
  j["kappa"] = cfg.kappa;
  j["n"] = cfg.n;
  j["epsilon"] = cfg.epsilon;
  j["a"] = cfg.a;
  j["c"] = c_to_json(cfg.c);
  if (cfg.phi_c) j["phi_c"] = c_to_json(*cfg.phi_c);
  if (cfg.phi_polynomial) {
    j["phi"] = json{{"polynomial_s", *cfg.phi_polynomial}};
  } else {
    j["f"] = function_to_json(cfg.f);
    j["g"] = function_to_json(cfg.g);
  }
  j["b0_sq_base"] = cfg.b0_sq_base;
  const SampleSpec& s = cfg.sample;
  j["sample"] = json{{"grid", {s.grid_b2, s.grid_s}},
                     {"b2_range", {s.b2_min, s.b2_max}},
                     {"seed", s.seed},
                     {"points", s.points},
                     {"x_range", {s.x_min, s.x_max}},
                     {"geodesics", s.geodesics},
                     {"geodesic_time", s.geodesic_time},
                     {"geodesic_steps", s.geodesic_steps}};
  json tol = json::object();
  for (const auto& [name, value] : default_tolerances()) tol[name] = cfg.tolerance(name);
  j["tolerances"] = tol;
  return j.dump();
}

CFunction make_c(const CSpec& spec) {
  if (spec.constant) return CFunction::constant(spec.lambda);
  const Expression e = Expression::parse(spec.expression);
  return CFunction::callable([e](double t) { return e(t); }, spec.lo, spec.hi, spec.expression);
}

JetFunction make_g(const FunctionSpec& spec) {
  if (spec.kind == FunctionSpec::Kind::kExpression) {
    return jet_function(Expression::parse(spec.text));
  }
  if (spec.text == "zero") return g_functions::zero();
  if (spec.text == "one") return g_functions::constant(1.0);
  if (spec.text == "identity") return g_functions::linear(1.0);
  throw ConfigError("config: unknown builtin g '" + spec.text + "'");
}

PhiFamily make_phi_family(const BundleConfig& cfg) {
  FGPair fg;
  if (cfg.f.kind == FunctionSpec::Kind::kBuiltin) {
    fg.f = PhiFamily::builtin_f(cfg.f.text);
    fg.speed_integral = PhiFamily::builtin_speed_integral(cfg.f.text);
  } else {
    fg.f = jet_function(Expression::parse(cfg.f.text));
  }
  fg.f_label = cfg.f.text;
  fg.g = make_g(cfg.g);
  fg.g_label = cfg.g.text;
  return PhiFamily(std::move(fg), make_c(cfg.phi_c ? *cfg.phi_c : cfg.c), cfg.b0_sq_base);
}

OneForm make_one_form(const BundleConfig& cfg) {
  OneFormSpec spec;
  spec.epsilon = cfg.epsilon;
  spec.a = Eigen::Map<const Vector>(cfg.a.data(), static_cast<Eigen::Index>(cfg.a.size()));
  spec.c = make_c(cfg.c);
  spec.base = cfg.b0_sq_base;
  return OneForm(SpaceForm(cfg.kappa, cfg.n), std::move(spec));
}

MetricBundle make_bundle(const BundleConfig& cfg) {
  if (cfg.phi_polynomial) {
    return MetricBundle(make_one_form(cfg), PhiModel::polynomial_in_s(*cfg.phi_polynomial));
  }
  return MetricBundle(make_one_form(cfg), PhiModel(make_phi_family(cfg)));
}

}  // namespace projflat
