#include "projflat/geodesic.hpp"
#include "projflat/harness.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace projflat;

OneForm make_beta(CFunction c) {
  OneFormSpec spec;
  spec.a = Vector(3);
  spec.a << 0.1, -0.2, 0.05;
  spec.c = std::move(c);
  return OneForm(SpaceForm(1.0, 3), std::move(spec));
}

CFunction c_linear() {
  return CFunction::callable([](double t) { return 1.0 + t; }, 0.01, 4.0, "1 + t");
}

MetricBundle bundle() {
  return MetricBundle(make_beta(CFunction::constant(2.0)),
                      PhiFamily::builtin("one_plus_t_sq", 2.0, g_functions::linear(0.2)));
}

PointTangent point(const MetricBundle& mb) {
  PointSampler sampler(mb.beta(), SampleSpec{});
  return sampler.point_tangent();
}

void BM_PhiJet(benchmark::State& state) {
  const PhiFamily fam = PhiFamily::builtin("log1p", 2.0, g_functions::zero());
  for (auto _ : state) benchmark::DoNotOptimize(fam.jet(0.5, 0.3));
}
BENCHMARK(BM_PhiJet);

void BM_PhiJetGeneric(benchmark::State& state) {
  const PhiFamily fam = PhiFamily::builtin("log1p", 2.0, g_functions::zero()).generic();
  for (auto _ : state) benchmark::DoNotOptimize(fam.jet(0.5, 0.3));
}
BENCHMARK(BM_PhiJetGeneric);

void BM_SprayGeneral(benchmark::State& state) {
  const MetricBundle mb = bundle();
  const PointTangent p = point(mb);
  for (auto _ : state) benchmark::DoNotOptimize(spray_general(mb, p));
}
BENCHMARK(BM_SprayGeneral);

void BM_SprayDefinitional(benchmark::State& state) {
  const MetricBundle mb = bundle();
  const PointTangent p = point(mb);
  for (auto _ : state) benchmark::DoNotOptimize(spray_definitional(mb, p));
}
BENCHMARK(BM_SprayDefinitional);

void BM_Integrate(benchmark::State& state) {
  const MetricBundle mb = bundle();
  const PointTangent p = point(mb);
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrate(mb, p.x, p.y, 0.3, steps));
}
BENCHMARK(BM_Integrate)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_RecoverB2Constant(benchmark::State& state) {
  const OneForm beta = make_beta(CFunction::constant(2.0));
  Vector x(3);
  x << 0.3, 0.1, -0.2;
  for (auto _ : state) benchmark::DoNotOptimize(beta.recover_b2(x));
}
BENCHMARK(BM_RecoverB2Constant);

void BM_RecoverB2Callable(benchmark::State& state) {
  const OneForm beta = make_beta(c_linear());
  Vector x(3);
  x << 0.3, 0.1, -0.2;
  for (auto _ : state) benchmark::DoNotOptimize(beta.recover_b2(x));
}
BENCHMARK(BM_RecoverB2Callable);

}  // namespace

BENCHMARK_MAIN();
