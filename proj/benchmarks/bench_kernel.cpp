#include <benchmark/benchmark.h>

#include "qbm/kernel.hpp"

using namespace qbm;

static void KernelEvalPoint(benchmark::State& state) {
  const PhysParams p(1.0, 1.0);
  double x = 0.0;
  for (auto _ : state) {
    auto k = kernel_K0(1.0 + x, 0.3, -0.5, 0.2, 0.7, p);
    benchmark::DoNotOptimize(k.value);
    x += 1e-9;
  }
}
BENCHMARK(KernelEvalPoint);

static void PropagateGaussian32(benchmark::State& state) {
  const PhysParams p(1.0, 1.0);
  const auto rho0 = ProductDensity::gaussian_packet(1.0);
  const GridAxis axis{-8.0, 8.0, 32};
  for (auto _ : state) {
    auto rho = propagate_density(rho0, 0.5, p, axis, {1e-10, 2000}, 1);
    benchmark::DoNotOptimize(rho.values.data());
  }
}
BENCHMARK(PropagateGaussian32);
