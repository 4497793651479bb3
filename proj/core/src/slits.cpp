#include "qbm/slits.hpp"

#include <algorithm>
#include <cmath>

namespace qbm {

SlitGeometry::SlitGeometry(double w, double d, double D, double v)
    : width(w), half_separation(d), screen_distance(D), speed(v) {
  if (!(w > 0.0) || !(d > 0.0) || !(D > 0.0) || !(v > 0.0))
    throw ConfigError("SlitGeometry: w, d, D, v must all be > 0");
  if (!(w < 2.0 * d))
    throw ConfigError("SlitGeometry: slits overlap (w must be < 2d)");
}

PatternParams::PatternParams(double K_, double beta_) : K(K_), beta(beta_) {
  if (!(K > 0.0) || !(beta > 0.0))
    throw ConfigError("PatternParams: K and beta must be > 0");
}

PatternParams PatternParams::from(const SlitGeometry& g, const PhysParams& p) {
  const double K =
      p.mass * g.speed * g.half_separation / (p.hbar * g.screen_distance);
  return PatternParams(K, g.width / g.half_separation);
}

double AnalyticDensity::aperture_amplitude(double u) const {
  if (aperture == Aperture::TopHat)
    return std::abs(u) <= half_width ? profile_amplitude(u) : 0.0;
  return profile_amplitude(u);
}

double AnalyticDensity::profile_amplitude(double u) const {
  if (aperture == Aperture::TopHat)
    return 1.0 / std::sqrt(2.0 * half_width);
  const double s = half_width;  // sigma = w/2
  return std::pow(2.0 * kPi * s * s, -0.25) * std::exp(-u * u / (4.0 * s * s));
}

Complex AnalyticDensity::evaluate(double x_plus, double x_minus) const {
  Complex acc{0.0, 0.0};
  for (const Term& t : terms)
    acc += t.weight * aperture_amplitude(x_plus - t.center_plus) *
           aperture_amplitude(x_minus - t.center_minus);
  return acc;
}

double AnalyticDensity::factor_cutoff() const {
  return aperture == Aperture::TopHat ? half_width : 10.0 * half_width;
}

double AnalyticDensity::trace_analytic() const {
  // Diagonal integral of each product term: weight * int phi(x-a)phi(x-b) dx.
  double tr = 0.0;
  for (const Term& t : terms) {
    const double a = t.center_plus;
    const double b = t.center_minus;
    double overlap = 0.0;
    if (aperture == Aperture::TopHat) {
      const double w = 2.0 * half_width;
      overlap = std::max(0.0, w - std::abs(a - b)) / w;
    } else {
      const double s = half_width;
      overlap = std::exp(-(a - b) * (a - b) / (8.0 * s * s));
    }
    tr += t.weight.real() * overlap;
  }
  return tr;
}

bool AnalyticDensity::hermitian_closure(double tol) const {
  for (const Term& t : terms) {
    bool found = false;
    for (const Term& u : terms) {
      if (u.center_plus == t.center_minus && u.center_minus == t.center_plus &&
          std::abs(u.weight - std::conj(t.weight)) <= tol) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

AnalyticDensity AnalyticDensity::diagonal_only() const {
  AnalyticDensity out = *this;
  out.terms.clear();
  for (const Term& t : terms)
    if (t.center_plus == t.center_minus) out.terms.push_back(t);
  return out;
}

double slit_wavefunction(const SlitGeometry& g, double x) {
  const double hw = 0.5 * g.width;
  const double amp = 1.0 / std::sqrt(g.width);
  double psi = 0.0;
  if (std::abs(x - g.half_separation) <= hw) psi += amp;
  if (std::abs(x + g.half_separation) <= hw) psi += amp;
  return psi / std::sqrt(2.0);
}

AnalyticDensity initial_density(const SlitGeometry& g, Aperture aperture) {
  AnalyticDensity rho;
  rho.half_width = 0.5 * g.width;
  rho.aperture = aperture;
  const double d = g.half_separation;
  const Complex half{0.5, 0.0};
  rho.terms = {{+d, +d, half}, {-d, -d, half}, {+d, -d, half}, {-d, +d, half}};
  return rho;
}

DensityMatrixGrid discretize(const AnalyticDensity& density,
                             const GridAxis& axis) {
  const double w = 2.0 * density.half_width;
  double lo = 0.0, hi = 0.0;
  for (const AnalyticDensity::Term& t : density.terms) {
    lo = std::min({lo, t.center_plus, t.center_minus});
    hi = std::max({hi, t.center_plus, t.center_minus});
  }
  const double cut = density.factor_cutoff();
  if (axis.min > lo - cut || axis.max < hi + cut)
    throw ConfigError("discretize: axis does not cover the density support");
  if (w / axis.spacing() < 8.0)
    throw GridTooCoarseError(
        "discretize: need at least 8 cells across each slit width");

  DensityMatrixGrid rho(axis);
  const auto xs = axis.nodes();
  for (std::size_t i = 0; i < axis.n; ++i)
    for (std::size_t j = 0; j < axis.n; ++j)
      rho.at(i, j) = density.evaluate(xs[i], xs[j]);
  return rho;
}

double DensityMatrixGrid::max_abs() const {
  double m = 0.0;
  for (const Complex& v : values) m = std::max(m, std::abs(v));
  return m;
}

double DensityMatrixGrid::hermiticity_residual() const {
  const double scale = max_abs();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < axis.n; ++i)
    for (std::size_t j = i; j < axis.n; ++j)
      worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
  return worst / scale;
}

double DensityMatrixGrid::boundary_mass_fraction(double band_fraction) const {
  const double band = band_fraction * axis.length();
  double total = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < axis.n; ++i) {
    const double xi = axis.node(i);
    const bool i_edge = xi < axis.min + band || xi > axis.max - band;
    for (std::size_t j = 0; j < axis.n; ++j) {
      const double xj = axis.node(j);
      const double m = std::norm(at(i, j));
      total += m;
      if (i_edge || xj < axis.min + band || xj > axis.max - band) edge += m;
    }
  }
  return total == 0.0 ? 0.0 : edge / total;
}

}  // namespace qbm
