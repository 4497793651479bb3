#include <benchmark/benchmark.h>

#include "qbm/stochastic.hpp"

using namespace qbm;

static void LangevinSteps(benchmark::State& state) {
  const PhysParams p(1.0, 1.0, 1.0, 1.0);
  LangevinConfig cfg;
  cfg.dt = 0.05;
  cfg.n_steps = static_cast<std::size_t>(state.range(0));
  cfg.n_ensembles = 100;
  cfg.record_stride = cfg.n_steps;
  for (auto _ : state) {
    auto msd = ensemble_msd(cfg, p, 10, 1);
    benchmark::DoNotOptimize(msd.msd.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(LangevinSteps)->RangeMultiplier(4)->Range(256, 4096)->Complexity();
