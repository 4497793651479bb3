#include "qbm/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qbm/numeric.hpp"
#include "qbm/parallel.hpp"
#include "qbm/rng.hpp"

namespace qbm {

namespace {

struct StepCoeffs {
  double decay;      // velocity damping factor per step
  double drive;      // force-to-velocity conversion for one step
  double noise_amp;  // std dev of the per-step force sample
};

StepCoeffs step_coeffs(const LangevinConfig& cfg, const PhysParams& p) {
  StepCoeffs c{};
  c.noise_amp = std::sqrt(NoiseStream::force_variance(p, cfg.dt));
  if (p.friction > 0.0) {
    c.decay = std::exp(-p.friction * cfg.dt / p.mass);
    c.drive = (1.0 - c.decay) / p.friction;
  } else {
    c.decay = 1.0;
    c.drive = cfg.dt / p.mass;
  }
  return c;
}

// One trajectory; visit(step_index, x, v) is called after every step.
template <typename Visit>
void run_trajectory(const LangevinConfig& cfg, const StepCoeffs& c,
                    std::size_t traj, Visit&& visit) {
  double x = cfg.x0;
  double v = cfg.v0;
  for (std::size_t s = 0; s < cfg.n_steps; ++s) {
    const double f =
        c.noise_amp == 0.0 ? 0.0 : c.noise_amp * gaussian(cfg.seed, traj, s);
    v = v * c.decay + f * c.drive;
    x += v * cfg.dt;
    visit(s, x, v);
  }
}

double ols_slope(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  double st = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    st += t[i];
    sy += y[i];
  }
  const double mt = st / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (t[i] - mt) * (t[i] - mt);
    sxy += (t[i] - mt) * (y[i] - my);
  }
  return sxy / sxx;
}

}  // namespace

double NoiseStream::y_variance(const PhysParams& p, double dt) {
  if (p.thermal_energy == 0.0) throw ZeroTemperatureError();
  if (p.friction == 0.0) throw ZeroFrictionError();
  return p.hbar * p.hbar / (2.0 * p.friction * p.thermal_energy * dt);
}

double NoiseStream::force(std::size_t step, const PhysParams& p,
                          double dt) const {
  const double var = force_variance(p, dt);
  return var == 0.0 ? 0.0 : std::sqrt(var) * gaussian(seed, stream, step);
}

double NoiseStream::y_sample(std::size_t step, const PhysParams& p,
                             double dt) const {
  return std::sqrt(y_variance(p, dt)) * gaussian(seed, stream, step);
}

void LangevinConfig::validate(const PhysParams& p) const {
  if (!(dt > 0.0) || n_steps == 0)
    throw ConfigError("LangevinConfig: dt > 0 and n_steps > 0 required");
  if (n_ensembles < 100)
    throw ConfigError("LangevinConfig: need at least 100 trajectories");
  if (record_stride == 0)
    throw ConfigError("LangevinConfig: record_stride must be >= 1");
  if (p.friction > 0.0 && !(dt < p.mass / (10.0 * p.friction)))
    throw UnstableDtError(
        "LangevinConfig: dt must resolve the momentum relaxation time "
        "(dt < M / 10R)");
}

Trajectories simulate_langevin(const LangevinConfig& cfg, const PhysParams& p,
                               int threads) {
  cfg.validate(p);
  const StepCoeffs c = step_coeffs(cfg, p);

  Trajectories out;
  for (std::size_t s = cfg.record_stride - 1; s < cfg.n_steps;
       s += cfg.record_stride)
    out.times.push_back(cfg.dt * static_cast<double>(s + 1));
  out.x.assign(cfg.n_ensembles, {});

  parallel_for(
      cfg.n_ensembles,
      [&](std::size_t traj) {
        std::vector<double>& row = out.x[traj];
        row.reserve(out.times.size());
        run_trajectory(cfg, c, traj, [&](std::size_t s, double x, double) {
          if ((s + 1) % cfg.record_stride == 0) row.push_back(x);
        });
      },
      threads);
  return out;
}

MsdSeries ensemble_msd(const LangevinConfig& cfg, const PhysParams& p,
                       std::size_t n_blocks, int threads) {
  cfg.validate(p);
  if (n_blocks == 0 || n_blocks > cfg.n_ensembles)
    throw ConfigError("ensemble_msd: invalid block count");
  const StepCoeffs c = step_coeffs(cfg, p);

  std::vector<double> times;
  for (std::size_t s = cfg.record_stride - 1; s < cfg.n_steps;
       s += cfg.record_stride)
    times.push_back(cfg.dt * static_cast<double>(s + 1));
  const std::size_t nt = times.size();
  const std::size_t tail_start = cfg.n_steps - cfg.n_steps / 4;

  // Contiguous trajectory blocks; block boundaries are fixed by index, so
  // any thread assignment yields identical partials.
  std::vector<std::vector<double>> block_sum(n_blocks,
                                             std::vector<double>(nt, 0.0));
  std::vector<double> block_count(n_blocks, 0.0);
  std::vector<double> block_v2(n_blocks, 0.0);
  std::vector<double> block_v2_count(n_blocks, 0.0);
  const std::size_t per_block = (cfg.n_ensembles + n_blocks - 1) / n_blocks;

  parallel_for(
      n_blocks,
      [&](std::size_t b) {
        const std::size_t lo = b * per_block;
        const std::size_t hi = std::min(cfg.n_ensembles, lo + per_block);
        for (std::size_t traj = lo; traj < hi; ++traj) {
          std::size_t rec = 0;
          run_trajectory(cfg, c, traj,
                         [&](std::size_t s, double x, double v) {
                           if ((s + 1) % cfg.record_stride == 0) {
                             const double dxt = x - cfg.x0;
                             block_sum[b][rec++] += dxt * dxt;
                           }
                           if (s >= tail_start) {
                             block_v2[b] += v * v;
                             block_v2_count[b] += 1.0;
                           }
                         });
        }
        block_count[b] = static_cast<double>(hi - lo);
      },
      threads);

  MsdSeries series;
  series.t = times;
  series.n_traj = cfg.n_ensembles;
  series.block_msd.resize(n_blocks);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    series.block_msd[b].resize(nt);
    for (std::size_t k = 0; k < nt; ++k)
      series.block_msd[b][k] = block_sum[b][k] / block_count[b];
  }
  series.msd.resize(nt);
  series.sem.resize(nt);
  std::vector<double> col(n_blocks);
  for (std::size_t k = 0; k < nt; ++k) {
    for (std::size_t b = 0; b < n_blocks; ++b)
      col[b] = block_sum[b][k];
    const double total = pairwise_sum(col);
    series.msd[k] = total / static_cast<double>(cfg.n_ensembles);
    double var = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
      const double d = series.block_msd[b][k] - series.msd[k];
      var += d * d;
    }
    var /= static_cast<double>(n_blocks - 1);
    series.sem[k] = std::sqrt(var / static_cast<double>(n_blocks));
  }

  std::vector<double> v2(n_blocks);
  for (std::size_t b = 0; b < n_blocks; ++b) v2[b] = block_v2[b] / block_v2_count[b];
  double v2_mean = 0.0;
  for (double v : v2) v2_mean += v;
  v2_mean /= static_cast<double>(n_blocks);
  double v2_var = 0.0;
  for (double v : v2) v2_var += (v - v2_mean) * (v - v2_mean);
  v2_var /= static_cast<double>(n_blocks - 1);
  series.v2_tail_mean = v2_mean;
  series.v2_tail_sem = std::sqrt(v2_var / static_cast<double>(n_blocks));
  return series;
}

MsdSeries msd_of(const Trajectories& traj, std::size_t n_blocks) {
  const std::size_t n = traj.x.size();
  if (n == 0) throw ConfigError("msd_of: empty ensemble");
  n_blocks = std::min(n_blocks, n);
  const std::size_t nt = traj.times.size();
  const std::size_t per_block = (n + n_blocks - 1) / n_blocks;

  MsdSeries series;
  series.t = traj.times;
  series.n_traj = n;
  series.block_msd.assign(n_blocks, std::vector<double>(nt, 0.0));

  std::vector<double> counts(n_blocks, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = std::min(i / per_block, n_blocks - 1);
    for (std::size_t k = 0; k < nt; ++k)
      series.block_msd[b][k] += traj.x[i][k] * traj.x[i][k];
    counts[b] += 1.0;
  }
  series.msd.assign(nt, 0.0);
  series.sem.assign(nt, 0.0);
  for (std::size_t k = 0; k < nt; ++k) {
    double total = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) total += series.block_msd[b][k];
    series.msd[k] = total / static_cast<double>(n);
  }
  for (std::size_t b = 0; b < n_blocks; ++b)
    for (std::size_t k = 0; k < nt; ++k) series.block_msd[b][k] /= counts[b];
  for (std::size_t k = 0; k < nt; ++k) {
    double var = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
      const double d = series.block_msd[b][k] - series.msd[k];
      var += d * d;
    }
    var /= static_cast<double>(n_blocks > 1 ? n_blocks - 1 : 1);
    series.sem[k] = std::sqrt(var / static_cast<double>(n_blocks));
  }
  return series;
}

DiffusionEstimate estimate_diffusion(const MsdSeries& series,
                                     const PhysParams& p,
                                     double window_lo_relax,
                                     double window_hi_relax) {
  if (p.friction == 0.0) throw ZeroFrictionError();
  if (window_lo_relax < 10.0)
    throw WindowTooEarlyError(
        "estimate_diffusion: fit window must start at or after 10 M/R");
  const double relax = p.mass / p.friction;
  const double lo = window_lo_relax * relax;
  const double hi = window_hi_relax * relax;

  std::vector<double> ts, ys;
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < series.t.size(); ++k)
    if (series.t[k] >= lo && series.t[k] <= hi) {
      ts.push_back(series.t[k]);
      ys.push_back(series.msd[k]);
      idx.push_back(k);
    }
  if (ts.size() < 2)
    throw ConfigError("estimate_diffusion: fewer than 2 samples in window");

  DiffusionEstimate est;
  est.window_lo = lo;
  est.window_hi = hi;
  est.n_points = ts.size();
  est.d_hat = 0.5 * ols_slope(ts, ys);

  const std::size_t nb = series.block_msd.size();
  if (nb >= 2) {
    std::vector<double> d_blocks(nb);
    std::vector<double> yb(ts.size());
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t k = 0; k < idx.size(); ++k)
        yb[k] = series.block_msd[b][idx[k]];
      d_blocks[b] = 0.5 * ols_slope(ts, yb);
    }
    double mean = 0.0;
    for (double d : d_blocks) mean += d;
    mean /= static_cast<double>(nb);
    double var = 0.0;
    for (double d : d_blocks) var += (d - mean) * (d - mean);
    var /= static_cast<double>(nb - 1);
    est.std_error = std::sqrt(var / static_cast<double>(nb));
  }
  return est;
}

NoiseAverageResult noise_average_check(std::span<const double> y, double dt,
                                       const PhysParams& p,
                                       std::size_t n_samples,
                                       std::uint64_t seed) {
  if (y.empty() || !(dt > 0.0))
    throw ConfigError("noise_average_check: empty path or bad dt");
  const double noise_amp = std::sqrt(NoiseStream::force_variance(p, dt));

  double y2 = 0.0;
  for (double v : y) y2 += v * v;
  const double rhs_exp =
      std::exp(-p.thermal_energy * p.friction / (p.hbar * p.hbar) * y2 * dt);

  std::vector<double> re(n_samples), im(n_samples);
  parallel_for(n_samples, [&](std::size_t s) {
    double phase = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double f = noise_amp * gaussian(seed, s, i);
      phase += y[i] * f;
    }
    phase *= dt / p.hbar;
    re[s] = std::cos(phase);
    im[s] = std::sin(phase);
  });

  NoiseAverageResult r;
  r.n_samples = n_samples;
  const double mre = pairwise_sum(re) / static_cast<double>(n_samples);
  const double mim = pairwise_sum(im) / static_cast<double>(n_samples);
  r.lhs = Complex{mre, mim};
  double vre = 0.0, vim = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    vre += (re[s] - mre) * (re[s] - mre);
    vim += (im[s] - mim) * (im[s] - mim);
  }
  vre /= static_cast<double>(n_samples - 1);
  vim /= static_cast<double>(n_samples - 1);
  r.stderr_re = std::sqrt(vre / static_cast<double>(n_samples));
  r.stderr_im = std::sqrt(vim / static_cast<double>(n_samples));
  r.rhs = rhs_exp;
  return r;
}

YCorrelatorResult y_correlator_check(const PhysParams& p, double dt,
                                     std::size_t n_samples, std::uint64_t seed,
                                     std::size_t path_len) {
  const double var_expected = NoiseStream::y_variance(p, dt);
  if (!(dt > 0.0) || n_samples < 2 || path_len < 2)
    throw ConfigError("y_correlator_check: bad arguments");
  const double amp = std::sqrt(var_expected);

  double sum2 = 0.0, sum_lag = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    double prev = 0.0;
    for (std::size_t i = 0; i < path_len; ++i) {
      const double yi = amp * gaussian(seed, s, i);
      sum2 += yi * yi;
      if (i > 0) sum_lag += yi * prev;
      prev = yi;
    }
  }
  const double n_tot = static_cast<double>(n_samples * path_len);
  const double n_lag = static_cast<double>(n_samples * (path_len - 1));

  YCorrelatorResult r;
  r.n_samples = n_samples;
  r.path_len = path_len;
  r.var_expected = var_expected;
  r.var_empirical = sum2 / n_tot;
  // Variance of the sample variance of a Gaussian: 2 var^2 / N.
  const double se_var = var_expected * std::sqrt(2.0 / (n_tot - 1.0));
  r.var_z = (r.var_empirical - var_expected) / se_var;
  r.lag1_corr = (sum_lag / n_lag) / var_expected;
  r.lag1_z = r.lag1_corr * std::sqrt(n_lag);
  return r;
}

}  // namespace qbm
