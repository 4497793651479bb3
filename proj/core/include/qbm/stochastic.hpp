#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qbm/numeric.hpp"
#include "qbm/params.hpp"

namespace qbm {

// Classical Langevin run: M x'' + R x' = f, with f Gaussian white noise of
// per-step variance 2 R kBT / dt. Velocities take one exactly damped
// substep per dt (semi-implicit), positions follow with the updated
// velocity. Every noise draw is keyed by (seed, trajectory, step), so runs
// are bitwise reproducible and thread-count independent.
struct LangevinConfig {
  double dt = 0.05;
  std::size_t n_steps = 2000;
  std::size_t n_ensembles = 10000;
  std::uint64_t seed = 1;
  double x0 = 0.0;
  double v0 = 0.0;
  std::size_t record_stride = 1;

  void validate(const PhysParams& p) const;
};

// Deterministic noise substream for one trajectory or Monte Carlo sample.
// The discretized white-noise force has per-step variance 2 R kBT / dt
// (recovering <f(t) f(t')> = 2 R kBT delta in the dt -> 0 limit); the
// conjugate y-coordinate samples carry variance hbar^2 / (2 R kBT dt).
struct NoiseStream {
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;

  static double force_variance(const PhysParams& p, double dt) {
    return 2.0 * p.friction * p.thermal_energy / dt;
  }
  static double y_variance(const PhysParams& p, double dt);  // throws at T=0/R=0

  double force(std::size_t step, const PhysParams& p, double dt) const;
  double y_sample(std::size_t step, const PhysParams& p, double dt) const;
};

struct Trajectories {
  std::vector<double> times;          // recorded times (stride applied)
  std::vector<std::vector<double>> x; // one row per trajectory
};

Trajectories simulate_langevin(const LangevinConfig& cfg, const PhysParams& p,
                               int threads = 0);

// Ensemble mean-square displacement, accumulated in fixed trajectory blocks
// (pairwise-combined), plus block-level MSDs for error estimation and the
// late-time velocity second moment for the equipartition check.
struct MsdSeries {
  std::vector<double> t;
  std::vector<double> msd;
  std::vector<double> sem;              // standard error of the mean MSD
  std::vector<std::vector<double>> block_msd;
  std::size_t n_traj = 0;
  double v2_tail_mean = 0.0;            // <v^2> over the last quarter of steps
  double v2_tail_sem = 0.0;
};

MsdSeries ensemble_msd(const LangevinConfig& cfg, const PhysParams& p,
                       std::size_t n_blocks = 100, int threads = 0);

MsdSeries msd_of(const Trajectories& traj, std::size_t n_blocks = 10);

struct DiffusionEstimate {
  double d_hat = 0.0;
  double std_error = 0.0;
  double window_lo = 0.0;  // absolute times of the fit window
  double window_hi = 0.0;
  std::size_t n_points = 0;
};

// Least-squares slope of MSD vs t over [lo, hi] (in units of the momentum
// relaxation time M/R), divided by 2. The window must start at or after
// 10 M/R; throws WindowTooEarlyError otherwise. The standard error comes
// from the spread of per-block slopes.
DiffusionEstimate estimate_diffusion(const MsdSeries& series,
                                     const PhysParams& p,
                                     double window_lo_relax = 10.0,
                                     double window_hi_relax = 100.0);

// Monte Carlo check of the Gaussian noise average
//   < exp[(i/hbar) sum_i y_i f_i dt] > = exp[-(kBT R/hbar^2) sum_i y_i^2 dt]
// for a fixed path y sampled on a uniform time grid.
struct NoiseAverageResult {
  Complex lhs;
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  double rhs = 0.0;
  std::size_t n_samples = 0;
};

NoiseAverageResult noise_average_check(std::span<const double> y, double dt,
                                       const PhysParams& p,
                                       std::size_t n_samples,
                                       std::uint64_t seed);

// Draws y_i as independent Gaussians of variance hbar^2/(2 R kBT dt) and
// reports how the empirical same-time variance and lag-1 correlation compare
// with the white-noise discretization. Throws ZeroTemperatureError (T = 0)
// or ZeroFrictionError (R = 0).
struct YCorrelatorResult {
  double var_empirical = 0.0;
  double var_expected = 0.0;
  double var_z = 0.0;       // (empirical - expected) / se
  double lag1_corr = 0.0;
  double lag1_z = 0.0;
  std::size_t n_samples = 0;
  std::size_t path_len = 0;
};

YCorrelatorResult y_correlator_check(const PhysParams& p, double dt,
                                     std::size_t n_samples, std::uint64_t seed,
                                     std::size_t path_len = 32);

}  // namespace qbm
