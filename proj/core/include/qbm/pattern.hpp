#pragma once

#include <limits>
#include <vector>

#include "qbm/numeric.hpp"

namespace qbm {

enum class PatternMethod {
  ExactFresnel,    // full quadratic-phase propagator, numerical quadrature
  FarField,        // linearized phase, analytic per term
  ClosedForm,      // fringe formula in (K, beta)
  DampedRescaled,  // far field at the renormalized time, scaled by e^-(gt)
  DampedKernel,    // zero-temperature kernel, numerical quadrature
  DampedPaper50a,  // same, with the cross term at its large-gt limit
  EvolverDiagonal, // diagonal of a grid-evolved density matrix
};

const char* to_string(PatternMethod m);

// Sampled screen density P(x) plus the provenance needed to reproduce it.
struct DiffractionPattern {
  std::vector<double> x;
  std::vector<double> density;
  PatternMethod method = PatternMethod::ClosedForm;
  double time = std::numeric_limits<double>::quiet_NaN();
  double K = std::numeric_limits<double>::quiet_NaN();
  double beta = std::numeric_limits<double>::quiet_NaN();
  double gamma = std::numeric_limits<double>::quiet_NaN();
};

// Default screen sampling: n uniform points with K*x spanning +-kx_span.
std::vector<double> default_screen_samples(double K, std::size_t n = 1024,
                                           double kx_span = 6.0 * kPi);

}  // namespace qbm
