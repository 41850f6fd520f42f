#include "projflat/config.hpp"
#include "projflat/harness.hpp"

#include <gtest/gtest.h>

#include <string>

namespace projflat {
namespace {

const char* kMinimal = R"j({"schema": "projflat.config/1", "kappa": 0.5, "n": 2})j";

TEST(Config, Defaults) {
  const BundleConfig cfg = parse_config(kMinimal);
  EXPECT_EQ(cfg.kappa, 0.5);
  EXPECT_EQ(cfg.n, 2);
  EXPECT_EQ(cfg.epsilon, 1.0);
  EXPECT_TRUE(cfg.c.constant);
  EXPECT_EQ(cfg.c.lambda, 1.0);
  EXPECT_EQ(cfg.f.text, "one_plus_t");
  EXPECT_EQ(cfg.g.text, "zero");
  EXPECT_EQ(cfg.b0_sq_base, 1.0);
  EXPECT_EQ(cfg.sample.grid_b2, 20);
  EXPECT_EQ(cfg.sample.grid_s, 20);
  EXPECT_EQ(cfg.tolerance("pde_residual"), 1e-8);
  EXPECT_EQ(cfg.tolerance("spray_agreement"), 1e-6);
  EXPECT_EQ(cfg.tolerance("geodesic_straightness"), 1e-5);
  EXPECT_THROW(cfg.tolerance("nonsense"), std::out_of_range);
}

TEST(Config, FullDocument) {
  const BundleConfig cfg = parse_config(R"({
    "schema": "projflat.config/1",
    "kappa": -0.5, "n": 3, "epsilon": 0.5, "a": [0.1, 0.2, 0.0],
    "c": {"expression": "1 + t", "range": [0.01, 4]},
    "f": {"expression": "1 + t + t^2"},
    "g": {"builtin": "identity"},
    "b0_sq_base": 1.0,
    "sample": {"grid": [5, 6], "b2_range": [0.2, 0.8], "seed": 42, "points": 7,
               "x_range": [0.1, 0.5], "geodesics": 3, "geodesic_time": 0.2, "geodesic_steps": 50},
    "tolerances": {"pde_residual": 1e-9}
  })");
  EXPECT_FALSE(cfg.c.constant);
  EXPECT_EQ(cfg.c.expression, "1 + t");
  EXPECT_EQ(cfg.sample.seed, 42u);
  EXPECT_EQ(cfg.sample.grid_s, 6);
  EXPECT_EQ(cfg.tolerance("pde_residual"), 1e-9);
  const MetricBundle mb = make_bundle(cfg);
  EXPECT_TRUE(mb.coupled());
  EXPECT_EQ(mb.dim(), 3);
}

TEST(Config, MismatchedPhiC) {
  const BundleConfig cfg =
      parse_config(R"j({"c": {"constant": 2}, "phi_c": {"constant": 1}, "n": 3})j");
  EXPECT_FALSE(make_bundle(cfg).coupled());
}

TEST(Config, PolynomialPhi) {
  const BundleConfig cfg = parse_config(R"j({"phi": {"polynomial_s": [1, 1, 0, 1]}})j");
  const MetricBundle mb = make_bundle(cfg);
  EXPECT_EQ(mb.phi().family(), nullptr);
  EXPECT_DOUBLE_EQ(mb.phi().jet(0.25, 0.5).phi, 1.0 + 0.5 + 0.125);
}

TEST(Config, Rejections) {
  const char* bad[] = {
      "not json",
      "[]",
      R"j({"schema": "projflat.config/2"})j",
      R"j({"kapa": 1})j",
      R"j({"kappa": "1"})j",
      R"j({"n": 1})j",
      R"j({"n": 2.5})j",
      R"j({"n": 3, "a": [1, 2]})j",
      R"j({"c": {"constant": 0}})j",
      R"j({"c": {"constant": 1, "expression": "t"}})j",
      R"j({"c": {"expression": "1 + t"}})j",
      R"j({"c": {"expression": "1 + t", "range": [1, 0.5]}})j",
      R"j({"c": {"expression": "t - 1", "range": [0.5, 2]}})j",
      R"j({"f": {"builtin": "cosh"}})j",
      R"j({"f": {"expression": "sin(t)"}})j",
      R"j({"f": {"builtin": "one", "expression": "t"}})j",
      R"j({"g": {"builtin": "two"}})j",
      R"j({"sample": {"seed": -1}})j",
      R"j({"sample": {"points": 0}})j",
      R"j({"sample": {"colour": 1}})j",
      R"j({"sample": {"grid": [20]}})j",
      R"j({"kappa": -1, "sample": {"x_range": [0.2, 1.0]}})j",
      R"j({"tolerances": {"pde": 1e-3}})j",
      R"j({"tolerances": {"pde_residual": -1}})j",
      R"j({"phi": {"polynomial": [1]}})j",
  };
  for (const char* text : bad) EXPECT_THROW(parse_config(text), ConfigError) << text;
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, EchoIsCanonical) {
  const BundleConfig a = parse_config(R"j({"n": 2, "kappa": 1})j");
  const BundleConfig b = parse_config(R"j({"kappa": 1.0, "n": 2, "schema": "projflat.config/1"})j");
  EXPECT_EQ(config_echo(a), config_echo(b));
  EXPECT_EQ(config_echo(parse_config(config_echo(a))), config_echo(a));
}

TEST(Report, SchemaAndOrderedRecords) {
  BundleConfig cfg = parse_config(R"({"n": 2, "c": {"constant": 2},
      "sample": {"grid": [4, 4], "points": 3, "geodesics": 2}})");
  const VerificationReport report = run_verification(cfg);
  const std::vector<std::string> names = {"convexity",         "pde_residual",
                                          "beta_condition",    "beta_antisymmetry",
                                          "k_agreement",       "spray_agreement",
                                          "projective_residual", "geodesic_straightness",
                                          "geodesic_convergence"};
  ASSERT_EQ(report.records.size(), names.size());
  for (std::size_t i = 0; i < names.size(); ++i) EXPECT_EQ(report.records[i].name, names[i]);
  EXPECT_TRUE(report.pass());
  const std::string json = to_json(report);
  EXPECT_NE(json.find("\"schema\": \"projflat.report/1\""), std::string::npos);
  EXPECT_NE(json.find("\"pass\": true"), std::string::npos);
}

TEST(Report, PassIffAllRecordsPass) {
  VerificationReport r;
  EXPECT_FALSE(r.pass());
  r.records.push_back({"a", 1, 0.0, 1.0, true, ""});
  EXPECT_TRUE(r.pass());
  r.records.push_back({"b", 1, 2.0, 1.0, false, ""});
  EXPECT_FALSE(r.pass());
}

TEST(Report, SamplingFailureIsAFailedRecord) {
  // b² never reaches [0.95, 0.99] inside |x| ≤ 0.3, so sampling fails.
  BundleConfig cfg = parse_config(R"({"n": 2, "sample": {"b2_range": [0.95, 0.99],
      "x_range": [0.1, 0.3], "grid": [3, 3], "points": 2, "geodesics": 1}})");
  const VerificationReport report = run_verification(cfg);
  EXPECT_FALSE(report.pass());
  EXPECT_TRUE(report.records[1].pass);  // the PDE grid does not need points
  EXPECT_FALSE(report.records[2].pass);
  EXPECT_NE(report.records[2].diagnostic.find("sampler"), std::string::npos);
}

TEST(PhiReport, Fields) {
  const BundleConfig cfg = parse_config(R"j({"f": {"builtin": "one"}, "g": {"builtin": "one"}})j");
  const std::string out = phi_report_json(cfg, 0.3, 0.2);
  for (const char* key : {"\"phi\": 1.2", "\"phi1\"", "\"phi22\"", "\"Q\"", "\"R\"", "\"Theta\"",
                          "\"Psi\"", "\"Pi\"", "\"Omega\"", "\"pde_residual\": 0.0"}) {
    EXPECT_NE(out.find(key), std::string::npos) << key;
  }
}

}  // namespace
}  // namespace projflat
