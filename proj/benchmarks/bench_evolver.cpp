#include <benchmark/benchmark.h>

#include "qbm/evolver.hpp"

using namespace qbm;

static DensityMatrixGrid bench_state(const GridAxis& axis) {
  DensityMatrixGrid rho(axis);
  const auto xs = axis.nodes();
  for (std::size_t i = 0; i < axis.n; ++i)
    for (std::size_t j = 0; j < axis.n; ++j)
      rho.at(i, j) = std::exp(Complex{
          -(xs[i] * xs[i] + xs[j] * xs[j]) / 4.0, 0.0});
  return rho;
}

static void RhsApply(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const GridAxis axis{-16.0, 16.0, n};
  const DensityMatrixGrid rho = bench_state(axis);
  const PhysParams p(1.0, 1.0, 1.0, 0.5);
  const Potential u = Potential::quadratic(0.25);
  for (auto _ : state) {
    auto out = apply_H_brownian(rho, u, p, DerivativeScheme::Spectral, 1);
    benchmark::DoNotOptimize(out.values.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(RhsApply)->RangeMultiplier(2)->Range(64, 256)->Complexity();
