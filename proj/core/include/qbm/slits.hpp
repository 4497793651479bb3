#pragma once

#include <vector>

#include "qbm/grid.hpp"
#include "qbm/params.hpp"

namespace qbm {

// Two identical slits of width w centred at +-d, detection screen at
// distance D, incident speed v.
struct SlitGeometry {
  double width;            // w
  double half_separation;  // d
  double screen_distance;  // D
  double speed;            // v

  SlitGeometry(double w, double d, double D, double v);

  double time_of_flight() const { return screen_distance / speed; }

  // True when w << d << D holds at the given ratio (default one decade).
  bool diffraction_limit_ok(double min_ratio = 10.0) const {
    return half_separation >= min_ratio * width &&
           screen_distance >= min_ratio * half_separation;
  }
};

// Dimensionless fringe parameters: K = Mvd/(hbar D), beta = w/d.
struct PatternParams {
  double K;
  double beta;

  PatternParams(double K_, double beta_);
  static PatternParams from(const SlitGeometry& g, const PhysParams& p);
};

enum class Aperture {
  TopHat,    // 1/sqrt(w) on |x| <= w/2 (closed interval), else 0
  Gaussian,  // normalized Gaussian with sigma = w/2; smooth stand-in for
             // grid-based evolution where sharp edges ring
};

// Initial density matrix as a sum of product terms
//   weight * phi(x_plus - center_plus) * phi(x_minus - center_minus),
// phi the aperture profile. The two-slit state has four terms of weight 1/2:
// both coordinates through slit 1, both through slit 2, and the two mixed
// combinations that carry the interference.
struct AnalyticDensity {
  struct Term {
    double center_plus;
    double center_minus;
    Complex weight;
  };

  std::vector<Term> terms;
  double half_width;  // w/2
  Aperture aperture = Aperture::TopHat;

  double aperture_amplitude(double u) const;  // phi(u), centred at 0

  // phi without the support indicator, for quadratures whose integration
  // limits already clamp the support (the indicator re-test would inject a
  // spurious half-ulp discontinuity at the edges).
  double profile_amplitude(double u) const;

  Complex evaluate(double x_plus, double x_minus) const;

  // Integration cutoff: top-hat support edge, or 10 sigma for Gaussian.
  double factor_cutoff() const;

  // Analytic trace (integral of the diagonal).
  double trace_analytic() const;

  bool hermitian_closure(double tol = 0.0) const;

  // Keeps only terms with center_plus == center_minus. Removing the mixed
  // terms is the ablation that should kill the interference fringes.
  AnalyticDensity diagonal_only() const;
};

// psi0(x) = (phi(x-d) + phi(x+d)) / sqrt(2) with the top-hat profile.
double slit_wavefunction(const SlitGeometry& g, double x);

AnalyticDensity initial_density(const SlitGeometry& g,
                                Aperture aperture = Aperture::TopHat);

// Cell-centred sampling of the analytic density on axis x axis. Requires the
// axis to cover the slit support with at least 8 cells across each slit
// width; throws GridTooCoarseError otherwise.
DensityMatrixGrid discretize(const AnalyticDensity& density,
                             const GridAxis& axis);

}  // namespace qbm
