#pragma once

#include "qbm/pattern.hpp"
#include "qbm/quadrature.hpp"
#include "qbm/slits.hpp"

namespace qbm {

// Free-particle Hamilton-Jacobi action M dx^2 / (2t). Throws
// NonpositiveTimeError for t <= 0.
double action_free(double dx, double t, const PhysParams& p);

// Screen density at time t from the full Fresnel propagator. Each product
// term of rho0 factorizes the double integral into two one-dimensional
// Fresnel integrals over the aperture support, evaluated by adaptive
// Gauss-Kronrod.
DiffractionPattern pattern_exact(const AnalyticDensity& rho0, double t,
                                 const std::vector<double>& xs,
                                 const PhysParams& p, const QuadConfig& quad = {},
                                 int threads = 0);

// Far-field (linearized-phase) density, evaluated in closed form per term:
// each aperture factor integrates to a sinc (top-hat) or Gaussian factor.
DiffractionPattern pattern_farfield(const AnalyticDensity& rho0, double t,
                                    const std::vector<double>& xs,
                                    const PhysParams& p, int threads = 0);

// Two-slit fringe formula: P(x) = (beta K / pi) sinc^2(beta K x / 2) cos^2(K x),
// the elementary evaluation of the far-field integral for equal top-hat
// slits. The x = 0 value is the analytic limit beta K / pi.
DiffractionPattern pattern_closed_form(const PatternParams& pp,
                                       const std::vector<double>& xs);

// Damped pattern via the time-rescaling route: evaluates the far field at
// the renormalized time tau (gamma tau = e^-(gt) sinh(gt)) and scales the
// result by e^-(gt).
DiffractionPattern pattern_damped_rescaled(const AnalyticDensity& rho0,
                                           double t,
                                           const std::vector<double>& xs,
                                           const PhysParams& p,
                                           int threads = 0);

}  // namespace qbm
