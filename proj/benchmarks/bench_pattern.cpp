#include <benchmark/benchmark.h>

#include "qbm/diffraction.hpp"

using namespace qbm;

static void ClosedForm1024(benchmark::State& state) {
  const PatternParams pp(0.1, 0.2);
  const auto xs = default_screen_samples(pp.K, 1024);
  for (auto _ : state) {
    auto pat = pattern_closed_form(pp, xs);
    benchmark::DoNotOptimize(pat.density.data());
  }
}
BENCHMARK(ClosedForm1024);

static void FarField1024(benchmark::State& state) {
  const PhysParams p(1.0, 0.0);
  const SlitGeometry g(0.2, 1.0, 20.0, 2.0);
  const AnalyticDensity rho0 = initial_density(g);
  const auto xs = default_screen_samples(0.1, 1024);
  for (auto _ : state) {
    auto pat = pattern_farfield(rho0, g.time_of_flight(), xs, p, 1);
    benchmark::DoNotOptimize(pat.density.data());
  }
}
BENCHMARK(FarField1024);

static void ExactFresnelPerSample(benchmark::State& state) {
  const PhysParams p(1.0, 0.0);
  const SlitGeometry g(0.2, 1.0, 20.0, 2.0);
  const AnalyticDensity rho0 = initial_density(g);
  for (auto _ : state) {
    auto pat = pattern_exact(rho0, g.time_of_flight(), {31.4}, p, {}, 1);
    benchmark::DoNotOptimize(pat.density.data());
  }
}
BENCHMARK(ExactFresnelPerSample);
