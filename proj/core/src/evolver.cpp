#include "qbm/evolver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "qbm/errors.hpp"
#include "qbm/fft.hpp"
#include "qbm/parallel.hpp"

namespace qbm {

std::vector<double> Potential::sample(const GridAxis& axis) const {
  std::vector<double> s(axis.n);
  for (std::size_t j = 0; j < axis.n; ++j) {
    s[j] = u(axis.node(j));
    if (!std::isfinite(s[j]))
      throw ConfigError("Potential: non-finite value on the grid");
  }
  return s;
}

namespace {

// Derivatives of a 2-D complex field along one axis, line by line. Each line
// transform writes only its own line, so line-level parallelism cannot
// change results.
class LineDerivatives {
 public:
  LineDerivatives(const GridAxis& axis, DerivativeScheme scheme)
      : axis_(axis), scheme_(scheme) {
    if (scheme_ == DerivativeScheme::Spectral) {
      if (!is_pow2(axis.n))
        throw ConfigError(
            "spectral derivatives need a power-of-two grid size");
      fft_ = std::make_unique<Fft>(axis.n);
      k_ = Fft::wavenumbers(axis.n, axis.length());
    }
  }

  // d1 and d2 may be null when not needed.
  void apply(const Complex* f, std::size_t n, int axis_index, Complex* d1,
             Complex* d2, int threads) const {
    const std::size_t stride = axis_index == 0 ? n : 1;
    const std::size_t line_step = axis_index == 0 ? 1 : n;
    parallel_for(
        n,
        [&](std::size_t line) {
          const Complex* in = f + line * line_step;
          Complex* o1 = d1 ? d1 + line * line_step : nullptr;
          Complex* o2 = d2 ? d2 + line * line_step : nullptr;
          if (scheme_ == DerivativeScheme::Spectral)
            line_spectral(in, stride, o1, o2);
          else
            line_central4(in, stride, o1, o2);
        },
        threads);
  }

 private:
  void line_spectral(const Complex* in, std::size_t stride, Complex* d1,
                     Complex* d2) const {
    const std::size_t n = axis_.n;
    std::vector<Complex> spec(n), buf(n);
    for (std::size_t i = 0; i < n; ++i) spec[i] = in[i * stride];
    fft_->forward(spec.data());
    if (d1) {
      for (std::size_t i = 0; i < n; ++i)
        buf[i] = Complex{0.0, k_[i]} * spec[i];
      buf[n / 2] = Complex{0.0, 0.0};  // odd derivative: drop the Nyquist mode
      fft_->inverse(buf.data());
      for (std::size_t i = 0; i < n; ++i) d1[i * stride] = buf[i];
    }
    if (d2) {
      for (std::size_t i = 0; i < n; ++i) buf[i] = -k_[i] * k_[i] * spec[i];
      fft_->inverse(buf.data());
      for (std::size_t i = 0; i < n; ++i) d2[i * stride] = buf[i];
    }
  }

  void line_central4(const Complex* in, std::size_t stride, Complex* d1,
                     Complex* d2) const {
    const std::size_t n = axis_.n;
    const double h = axis_.spacing();
    auto wrap = [n](std::ptrdiff_t i) {
      return static_cast<std::size_t>((i % static_cast<std::ptrdiff_t>(n) +
                                       static_cast<std::ptrdiff_t>(n)) %
                                      static_cast<std::ptrdiff_t>(n));
    };
    for (std::size_t i = 0; i < n; ++i) {
      const auto si = static_cast<std::ptrdiff_t>(i);
      const Complex fm2 = in[wrap(si - 2) * stride];
      const Complex fm1 = in[wrap(si - 1) * stride];
      const Complex f0 = in[i * stride];
      const Complex fp1 = in[wrap(si + 1) * stride];
      const Complex fp2 = in[wrap(si + 2) * stride];
      if (d1) d1[i * stride] = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
      if (d2)
        d2[i * stride] =
            (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    }
  }

  GridAxis axis_;
  DerivativeScheme scheme_;
  std::unique_ptr<Fft> fft_;
  std::vector<double> k_;
};

// Right-hand-side engine: out = H_Brownian rho.
class BrownianRhs {
 public:
  BrownianRhs(const GridAxis& axis, const PhysParams& p,
              const Potential& potential, DerivativeScheme scheme)
      : axis_(axis),
        p_(p),
        deriv_(axis, scheme),
        xs_(axis.nodes()),
        u_(potential.sample(axis)) {}

  void apply(const std::vector<Complex>& rho, std::vector<Complex>& out,
             int threads) const {
    const std::size_t n = axis_.n;
    const bool with_friction = p_.friction != 0.0;
    d2p_.resize(n * n);
    d2m_.resize(n * n);
    if (with_friction) {
      d1p_.resize(n * n);
      d1m_.resize(n * n);
    }
    deriv_.apply(rho.data(), n, 0, with_friction ? d1p_.data() : nullptr,
                 d2p_.data(), threads);
    deriv_.apply(rho.data(), n, 1, with_friction ? d1m_.data() : nullptr,
                 d2m_.data(), threads);

    const double M = p_.mass;
    const double R = p_.friction;
    const double hbar = p_.hbar;
    const double thermal = p_.thermal_energy * R / hbar;
    out.resize(n * n);
    parallel_for(
        n,
        [&](std::size_t i) {
          const double xp = xs_[i];
          for (std::size_t j = 0; j < n; ++j) {
            const double xm = xs_[j];
            const std::size_t idx = i * n + j;
            Complex kin = -hbar * hbar * (d2p_[idx] - d2m_[idx]);
            if (with_friction) {
              kin += Complex{0.0, hbar * R} * (xm * d1p_[idx] + xp * d1m_[idx]);
              kin += 0.25 * R * R * (xm * xm - xp * xp) * rho[idx];
            }
            Complex val = kin / (2.0 * M) + (u_[i] - u_[j]) * rho[idx];
            const double dx = xp - xm;
            val -= Complex{0.0, thermal * dx * dx} * rho[idx];
            out[idx] = val;
          }
        },
        threads);
  }

 private:
  GridAxis axis_;
  PhysParams p_;
  LineDerivatives deriv_;
  std::vector<double> xs_;
  std::vector<double> u_;
  mutable std::vector<Complex> d1p_, d1m_, d2p_, d2m_;
};

bool all_finite(const std::vector<Complex>& v) {
  for (const Complex& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

Complex trace_raw(const std::vector<Complex>& v, std::size_t n, double dx) {
  Complex s{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) s += v[j * n + j];
  return s * dx;
}

}  // namespace

DensityMatrixGrid apply_H_brownian(const DensityMatrixGrid& rho,
                                   const Potential& potential,
                                   const PhysParams& p,
                                   DerivativeScheme scheme, int threads) {
  BrownianRhs rhs(rho.axis, p, potential, scheme);
  DensityMatrixGrid out(rho.axis);
  rhs.apply(rho.values, out.values, threads);
  return out;
}

double stability_limit(const EvolverConfig& cfg, const PhysParams& p,
                       const Potential& potential) {
  const double dx = cfg.axis.spacing();
  const double kmax = kPi / dx;
  const double xmax = std::max(std::abs(cfg.axis.min), std::abs(cfg.axis.max));
  const double L = cfg.axis.length();

  const double lam_kin = p.hbar * kmax * kmax / (2.0 * p.mass);
  const double lam_cross = p.friction / p.mass * xmax * kmax;
  const double lam_r2 =
      p.friction * p.friction * xmax * xmax / (8.0 * p.mass * p.hbar);
  const auto u = potential.sample(cfg.axis);
  const auto [umin, umax] = std::minmax_element(u.begin(), u.end());
  const double lam_pot = (*umax - *umin) / p.hbar;
  const double lam_th =
      p.thermal_energy * p.friction * L * L / (p.hbar * p.hbar);

  const double lam = lam_kin + lam_cross + lam_r2 + lam_pot + lam_th;
  const double rk4_limit = lam > 0.0 ? 2.5 / lam : 1e30;
  const double diffusion_limit = cfg.c_stab * p.mass * dx * dx / p.hbar;
  return std::min(rk4_limit, diffusion_limit);
}

EvolveResult evolve(const DensityMatrixGrid& rho0, const Potential& potential,
                    const PhysParams& p, const EvolverConfig& cfg,
                    int threads) {
  if (rho0.axis != cfg.axis)
    throw ConfigError("evolve: state grid does not match config grid");
  if (rho0.hermiticity_residual() > 1e-8)
    throw ConfigError("evolve: initial state is not Hermitian");
  if (cfg.validate_stability) {
    const double limit = stability_limit(cfg, p, potential);
    if (cfg.dt > limit)
      throw UnstableConfigError("evolve: dt " + std::to_string(cfg.dt) +
                                " exceeds stability limit " +
                                std::to_string(limit));
    const double tail = momentum_tail_fraction(rho0);
    if (tail > cfg.momentum_tail_tol)
      throw UnstableConfigError(
          "evolve: initial state has unresolved momentum content (tail "
          "fraction " +
          std::to_string(tail) + "); refine the grid or smooth the state");
    const double needed = recommended_half_width(rho0, p, cfg.t_final);
    const double half_width = 0.5 * cfg.axis.length();
    if (half_width < needed)
      throw UnstableConfigError(
          "evolve: domain half-width " + std::to_string(half_width) +
          " below the padding rule (need >= " + std::to_string(needed) +
          " = 4x rms width + ballistic excursion)");
  }

  const std::size_t n = cfg.axis.n;
  const double dx = cfg.axis.spacing();
  std::size_t steps = static_cast<std::size_t>(
      std::llround(std::max(1.0, cfg.t_final / cfg.dt)));
  const double dt = cfg.t_final / static_cast<double>(steps);

  BrownianRhs rhs(cfg.axis, p, potential, cfg.scheme);
  const Complex step_scale = Complex{0.0, -1.0} / p.hbar;

  std::vector<Complex> state = rho0.values;
  std::vector<Complex> k1, k2, k3, k4, tmp(n * n);

  EvolveResult result;
  result.dt_actual = dt;
  result.steps = steps;

  auto snapshot = [&](double t) {
    DensityMatrixGrid g(cfg.axis);
    g.values = state;
    result.diag.snapshot_times.push_back(t);
    result.diag.herm_residual.push_back(g.hermiticity_residual());
    result.diag.boundary_mass.push_back(g.boundary_mass_fraction());
    result.snapshot_times.push_back(t);
    result.snapshots.push_back(std::move(g));
  };

  result.diag.step_times.push_back(0.0);
  result.diag.trace_series.push_back(trace_raw(state, n, dx));
  snapshot(0.0);

  for (std::size_t step = 0; step < steps; ++step) {
    rhs.apply(state, k1, threads);
    for (std::size_t i = 0; i < n * n; ++i) {
      k1[i] *= step_scale;
      tmp[i] = state[i] + 0.5 * dt * k1[i];
    }
    rhs.apply(tmp, k2, threads);
    for (std::size_t i = 0; i < n * n; ++i) {
      k2[i] *= step_scale;
      tmp[i] = state[i] + 0.5 * dt * k2[i];
    }
    rhs.apply(tmp, k3, threads);
    for (std::size_t i = 0; i < n * n; ++i) {
      k3[i] *= step_scale;
      tmp[i] = state[i] + dt * k3[i];
    }
    rhs.apply(tmp, k4, threads);
    for (std::size_t i = 0; i < n * n; ++i) {
      k4[i] *= step_scale;
      state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    if (!all_finite(state))
      throw NaNDetectedError(step, "evolve: non-finite value at step " +
                                       std::to_string(step));

    const double t = dt * static_cast<double>(step + 1);
    result.diag.step_times.push_back(t);
    result.diag.trace_series.push_back(trace_raw(state, n, dx));
    if ((step + 1) % cfg.snapshot_stride == 0 || step + 1 == steps)
      snapshot(t);
  }
  return result;
}

Complex trace(const DensityMatrixGrid& rho) {
  return trace_raw(rho.values, rho.axis.n, rho.axis.spacing());
}

double normalized_expectation(const DensityMatrixGrid& rho,
                              const std::vector<double>& observable) {
  if (observable.size() != rho.axis.n)
    throw ConfigError("normalized_expectation: observable size mismatch");
  const double dx = rho.axis.spacing();
  Complex num{0.0, 0.0}, den{0.0, 0.0};
  for (std::size_t j = 0; j < rho.axis.n; ++j) {
    num += rho.at(j, j) * observable[j];
    den += rho.at(j, j);
  }
  num *= dx;
  den *= dx;
  if (std::abs(den) < 1e-12) throw ZeroTraceError();
  return (num / den).real();
}

double velocity_commutator_residual(const DensityMatrixGrid& f,
                                    const PhysParams& p,
                                    DerivativeScheme scheme,
                                    std::size_t interior_margin) {
  const std::size_t n = f.axis.n;
  const auto xs = f.axis.nodes();
  LineDerivatives deriv(f.axis, scheme);

  const double M = p.mass;
  const double R = p.friction;
  const Complex mih{0.0, -p.hbar};  // -i hbar

  auto apply_vplus = [&](const std::vector<Complex>& in,
                         std::vector<Complex>& out) {
    std::vector<Complex> d1(n * n);
    deriv.apply(in.data(), n, 0, d1.data(), nullptr, 0);
    out.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t idx = i * n + j;
        out[idx] = (mih * d1[idx] - 0.5 * R * xs[j] * in[idx]) / M;
      }
  };
  auto apply_vminus = [&](const std::vector<Complex>& in,
                          std::vector<Complex>& out) {
    std::vector<Complex> d1(n * n);
    deriv.apply(in.data(), n, 1, d1.data(), nullptr, 0);
    out.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t idx = i * n + j;
        out[idx] = -(mih * d1[idx] + 0.5 * R * xs[i] * in[idx]) / M;
      }
  };

  std::vector<Complex> vm, vpvm, vp, vmvp;
  apply_vminus(f.values, vm);
  apply_vplus(vm, vpvm);
  apply_vplus(f.values, vp);
  apply_vminus(vp, vmvp);

  const Complex expected{0.0, p.hbar * R / (M * M)};
  const double scale = f.max_abs();
  double worst = 0.0;
  for (std::size_t i = interior_margin; i + interior_margin < n; ++i)
    for (std::size_t j = interior_margin; j + interior_margin < n; ++j) {
      const std::size_t idx = i * n + j;
      const Complex r = vpvm[idx] - vmvp[idx] - expected * f.values[idx];
      worst = std::max(worst, std::abs(r));
    }
  return scale > 0.0 ? worst / scale : worst;
}

double momentum_tail_fraction(const DensityMatrixGrid& rho) {
  const std::size_t n = rho.axis.n;
  if (!is_pow2(n)) throw ConfigError("momentum_tail_fraction: n must be 2^k");
  Fft fft(n);
  const auto k = Fft::wavenumbers(n, rho.axis.length());
  const double kmax = kPi / rho.axis.spacing();

  std::vector<Complex> work = rho.values;
  std::vector<Complex> line(n);
  for (std::size_t i = 0; i < n; ++i) fft.forward(work.data() + i * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) line[i] = work[i * n + j];
    fft.forward(line.data());
    for (std::size_t i = 0; i < n; ++i) work[i * n + j] = line[i];
  }
  double total = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double m = std::norm(work[i * n + j]);
      total += m;
      if (std::max(std::abs(k[i]), std::abs(k[j])) > 0.9 * kmax) tail += m;
    }
  return total == 0.0 ? 0.0 : tail / total;
}

double recommended_half_width(const DensityMatrixGrid& rho0,
                              const PhysParams& p, double t_final) {
  // rms width of the diagonal probability weight
  const std::size_t n = rho0.axis.n;
  double mass = 0.0, x2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::abs(rho0.at(j, j).real());
    const double x = rho0.axis.node(j);
    mass += w;
    x2 += w * x * x;
  }
  const double rms = mass > 0.0 ? std::sqrt(x2 / mass) : 0.0;

  // mean |k| of the spectral weight along x+ gives the ballistic speed scale
  if (!is_pow2(n)) return 4.0 * rms;
  Fft fft(n);
  const auto k = Fft::wavenumbers(n, rho0.axis.length());
  std::vector<Complex> work = rho0.values;
  for (std::size_t i = 0; i < n; ++i) fft.forward(work.data() + i * n);
  // transform along x+ (columns)
  std::vector<Complex> line(n);
  double spec_mass = 0.0, spec_absk = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) line[i] = work[i * n + j];
    fft.forward(line.data());
    for (std::size_t i = 0; i < n; ++i) {
      const double m = std::norm(line[i]);
      spec_mass += m;
      spec_absk += m * std::abs(k[i]);
    }
  }
  const double speed =
      spec_mass > 0.0 ? p.hbar * (spec_absk / spec_mass) / p.mass : 0.0;
  return 4.0 * rms + speed * t_final;
}

DiffractionPattern diagonal_pattern(const DensityMatrixGrid& rho, double t,
                                    const PhysParams& p) {
  DiffractionPattern pat;
  pat.x = rho.axis.nodes();
  pat.density.resize(rho.axis.n);
  for (std::size_t j = 0; j < rho.axis.n; ++j)
    pat.density[j] = rho.at(j, j).real();
  pat.method = PatternMethod::EvolverDiagonal;
  pat.time = t;
  pat.gamma = gamma(p);
  return pat;
}

}  // namespace qbm
