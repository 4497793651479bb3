#include "qbm/diffraction.hpp"

#include <algorithm>
#include <cmath>

#include "qbm/kernel.hpp"
#include "qbm/parallel.hpp"

namespace qbm {

const char* to_string(PatternMethod m) {
  switch (m) {
    case PatternMethod::ExactFresnel: return "ExactFresnel";
    case PatternMethod::FarField: return "FarField";
    case PatternMethod::ClosedForm: return "ClosedForm";
    case PatternMethod::DampedRescaled: return "DampedRescaled";
    case PatternMethod::DampedKernel: return "DampedKernel";
    case PatternMethod::DampedPaper50a: return "DampedPaper50a";
    case PatternMethod::EvolverDiagonal: return "EvolverDiagonal";
  }
  return "?";
}

std::vector<double> default_screen_samples(double K, std::size_t n,
                                           double kx_span) {
  return linspace(-kx_span / K, kx_span / K, n);
}

namespace detail {

// Distinct aperture centers, so each one-dimensional integral is evaluated
// once per screen point regardless of how many terms share it.
std::vector<double> distinct_centers(const AnalyticDensity& rho0) {
  std::vector<double> cs;
  for (const auto& t : rho0.terms) {
    for (double c : {t.center_plus, t.center_minus}) {
      if (std::find(cs.begin(), cs.end(), c) == cs.end()) cs.push_back(c);
    }
  }
  return cs;
}

std::size_t center_index(const std::vector<double>& cs, double c) {
  return static_cast<std::size_t>(
      std::find(cs.begin(), cs.end(), c) - cs.begin());
}

// Fills metadata (fringe K, beta, gamma) from the density geometry; for the
// damped routes t_fringe is the renormalized time.
void stamp_metadata(DiffractionPattern& pat, const AnalyticDensity& rho0,
                    double t_fringe, const PhysParams& p) {
  double d = 0.0;
  for (const auto& term : rho0.terms)
    d = std::max({d, std::abs(term.center_plus), std::abs(term.center_minus)});
  if (d > 0.0 && t_fringe > 0.0) {
    pat.K = p.mass * d / (p.hbar * t_fringe);
    pat.beta = 2.0 * rho0.half_width / d;
  }
  pat.gamma = gamma(p);
}

}  // namespace detail

double action_free(double dx, double t, const PhysParams& p) {
  if (!(t > 0.0)) throw NonpositiveTimeError();
  return p.mass * dx * dx / (2.0 * t);
}

DiffractionPattern pattern_exact(const AnalyticDensity& rho0, double t,
                                 const std::vector<double>& xs,
                                 const PhysParams& p, const QuadConfig& quad,
                                 int threads) {
  if (!(t > 0.0)) throw NonpositiveTimeError();
  const double fresnel = p.mass / (2.0 * p.hbar * t);  // phase coefficient
  const double norm = p.mass / (2.0 * kPi * p.hbar * t);
  const auto centers = detail::distinct_centers(rho0);
  const double cut = rho0.factor_cutoff();

  DiffractionPattern pat;
  pat.x = xs;
  pat.density.assign(xs.size(), 0.0);
  pat.method = PatternMethod::ExactFresnel;
  pat.time = t;
  detail::stamp_metadata(pat, rho0, t, p);

  parallel_for(
      xs.size(),
      [&](std::size_t ix) {
        const double x = xs[ix];
        std::vector<Complex> I(centers.size());
        for (std::size_t c = 0; c < centers.size(); ++c) {
          const double a = centers[c];
          // The constant phase fresnel*x^2 of (x-u)^2 cancels between the
          // bra and ket factors; dropping it keeps the integrand's phase
          // small enough that argument-reduction noise stays below the
          // quadrature tolerance at far screen points.
          const auto integrand = [&](double u) {
            return rho0.profile_amplitude(u - a) *
                   std::exp(Complex{0.0, fresnel * (u - 2.0 * x) * u});
          };
          I[c] = integrate_gk(integrand, a - cut, a + cut, quad).value;
        }
        Complex acc{0.0, 0.0};
        for (const auto& term : rho0.terms) {
          const Complex Ia = I[detail::center_index(centers, term.center_plus)];
          const Complex Ib = I[detail::center_index(centers, term.center_minus)];
          acc += term.weight * Ia * std::conj(Ib);
        }
        pat.density[ix] = norm * acc.real();
      },
      threads);
  return pat;
}

namespace {

// Far-field aperture factor: integral of phi(u - a) e^{-icu} du.
Complex farfield_factor(const AnalyticDensity& rho0, double a, double c) {
  const Complex carrier = std::exp(Complex{0.0, -c * a});
  if (rho0.aperture == Aperture::TopHat) {
    const double w = 2.0 * rho0.half_width;
    return carrier * std::sqrt(w) * sinc(0.5 * c * w);
  }
  const double s = rho0.half_width;
  return carrier * std::pow(8.0 * kPi * s * s, 0.25) * std::exp(-c * c * s * s);
}

DiffractionPattern farfield_impl(const AnalyticDensity& rho0, double t_eff,
                                 const std::vector<double>& xs,
                                 const PhysParams& p, double prefactor,
                                 PatternMethod method, double t_label,
                                 int threads) {
  const double norm = prefactor * p.mass / (2.0 * kPi * p.hbar * t_eff);
  const auto centers = detail::distinct_centers(rho0);

  DiffractionPattern pat;
  pat.x = xs;
  pat.density.assign(xs.size(), 0.0);
  pat.method = method;
  pat.time = t_label;
  detail::stamp_metadata(pat, rho0, t_eff, p);

  parallel_for(
      xs.size(),
      [&](std::size_t ix) {
        const double c = p.mass * xs[ix] / (p.hbar * t_eff);
        std::vector<Complex> J(centers.size());
        for (std::size_t k = 0; k < centers.size(); ++k)
          J[k] = farfield_factor(rho0, centers[k], c);
        Complex acc{0.0, 0.0};
        for (const auto& term : rho0.terms) {
          const Complex Ja = J[detail::center_index(centers, term.center_plus)];
          const Complex Jb = J[detail::center_index(centers, term.center_minus)];
          acc += term.weight * Ja * std::conj(Jb);
        }
        pat.density[ix] = norm * acc.real();
      },
      threads);
  return pat;
}

}  // namespace

DiffractionPattern pattern_farfield(const AnalyticDensity& rho0, double t,
                                    const std::vector<double>& xs,
                                    const PhysParams& p, int threads) {
  if (!(t > 0.0)) throw NonpositiveTimeError();
  return farfield_impl(rho0, t, xs, p, 1.0, PatternMethod::FarField, t,
                       threads);
}

DiffractionPattern pattern_closed_form(const PatternParams& pp,
                                       const std::vector<double>& xs) {
  DiffractionPattern pat;
  pat.x = xs;
  pat.density.resize(xs.size());
  pat.method = PatternMethod::ClosedForm;
  pat.K = pp.K;
  pat.beta = pp.beta;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double kx = pp.K * xs[i];
    const double env = sinc(0.5 * pp.beta * kx);
    const double fr = std::cos(kx);
    pat.density[i] = (pp.beta * pp.K / kPi) * env * env * fr * fr;
  }
  return pat;
}

DiffractionPattern pattern_damped_rescaled(const AnalyticDensity& rho0,
                                           double t,
                                           const std::vector<double>& xs,
                                           const PhysParams& p, int threads) {
  if (!(t > 0.0)) throw NonpositiveTimeError();
  const double tau = renormalized_time(t, p);
  const double decay = std::exp(-gamma(p) * t);
  DiffractionPattern pat = farfield_impl(
      rho0, tau, xs, p, decay, PatternMethod::DampedRescaled, t, threads);
  return pat;
}

}  // namespace qbm
