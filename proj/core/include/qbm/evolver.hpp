#pragma once

#include <functional>

#include "qbm/grid.hpp"
#include "qbm/params.hpp"
#include "qbm/pattern.hpp"

namespace qbm {

struct Potential {
  std::function<double(double)> u;

  static Potential zero() {
    return {[](double) { return 0.0; }};
  }
  static Potential quadratic(double k) {
    return {[k](double x) { return 0.5 * k * x * x; }};
  }

  // Samples on the axis; rejects non-finite values.
  std::vector<double> sample(const GridAxis& axis) const;
};

enum class DerivativeScheme { Spectral, CentralOrder4 };
enum class Boundary { Periodic };

struct EvolverConfig {
  GridAxis axis{-16.0, 16.0, 256};
  double dt = 1e-3;
  double t_final = 1.0;
  Boundary boundary = Boundary::Periodic;
  DerivativeScheme scheme = DerivativeScheme::Spectral;
  std::size_t snapshot_stride = 50;
  double c_stab = 0.2;               // dt <= c_stab * M dx^2 / hbar
  double momentum_tail_tol = 1e-6;   // initial-state spectral tail bound
  bool validate_stability = true;    // false: run anyway (blow-up studies)
};

struct EvolveDiagnostics {
  std::vector<double> step_times;    // t after each step, starting at 0
  std::vector<Complex> trace_series; // trace at each step time
  std::vector<double> snapshot_times;
  std::vector<double> herm_residual;   // at snapshots
  std::vector<double> boundary_mass;   // |rho|^2 within 5% of the boundary
};

struct EvolveResult {
  std::vector<double> snapshot_times;
  std::vector<DensityMatrixGrid> snapshots;
  EvolveDiagnostics diag;
  double dt_actual = 0.0;
  std::size_t steps = 0;
};

// Applies the full Brownian generator to rho and returns H rho (not the time
// derivative; evolve supplies the -i/hbar):
//   H = (p+ - (R/2)x-)^2/2M - (p- + (R/2)x+)^2/2M + U(x+) - U(x-)
//       - (i kB T R / hbar)(x+ - x-)^2,
// with the kinetic parts expanded using [x_minus-or-plus, d_plus-or-minus]=0:
//   (p+ - (R/2)x-)^2 = -hbar^2 d+^2 + i hbar R x- d+ + (R^2/4) x-^2.
DensityMatrixGrid apply_H_brownian(const DensityMatrixGrid& rho,
                                   const Potential& potential,
                                   const PhysParams& p,
                                   DerivativeScheme scheme =
                                       DerivativeScheme::Spectral,
                                   int threads = 0);

// Classic fourth-order Runge-Kutta integration of
//   d rho / dt = (-i/hbar) H rho.
// Validates the time step against stability_limit, requires a Hermitian
// initial state and (for the spectral scheme) a power-of-two grid, and
// aborts with NaNDetectedError (carrying the step index) if the state stops
// being finite.
EvolveResult evolve(const DensityMatrixGrid& rho0, const Potential& potential,
                    const PhysParams& p, const EvolverConfig& cfg,
                    int threads = 0);

// Largest stable dt estimate: the configured diffusion bound
// c_stab M dx^2 / hbar intersected with 2.5 / (sum of term magnitudes).
double stability_limit(const EvolverConfig& cfg, const PhysParams& p,
                       const Potential& potential);

// Trapezoid-rule trace over the periodic diagonal (uniform weights). The
// imaginary part is a numerical residual and is reported, not discarded.
Complex trace(const DensityMatrixGrid& rho);

// tr(rho A) / tr(rho) for a diagonal observable sampled on the axis.
// Throws ZeroTraceError when |tr rho| < 1e-12.
double normalized_expectation(const DensityMatrixGrid& rho,
                              const std::vector<double>& observable);

// Max-norm residual of ([v+, v-] - i hbar R / M^2) f over grid points at
// least `interior_margin` cells from the boundary, normalized by max |f|.
// v+- = +-(p+- -+ (R/2) x-+) / M with the configured derivative scheme.
double velocity_commutator_residual(const DensityMatrixGrid& f,
                                    const PhysParams& p,
                                    DerivativeScheme scheme =
                                        DerivativeScheme::Spectral,
                                    std::size_t interior_margin = 0);

// Fraction of spectral mass with max(|k+|,|k-|) above 90% of the grid
// Nyquist wavenumber; the evolve precondition that the grid resolves the
// state's momentum content.
double momentum_tail_fraction(const DensityMatrixGrid& rho);

// Padding rule for periodic runs: four times the state's rms width plus the
// ballistic excursion (hbar <|k|> / M) * t_final, estimated from the state
// itself. evolve() requires the domain half-width to be at least this.
double recommended_half_width(const DensityMatrixGrid& rho0,
                              const PhysParams& p, double t_final);

// Screen density read off the density-matrix diagonal.
DiffractionPattern diagonal_pattern(const DensityMatrixGrid& rho, double t,
                                    const PhysParams& p);

}  // namespace qbm
