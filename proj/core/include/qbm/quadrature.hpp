#pragma once

#include <functional>

#include "qbm/numeric.hpp"

namespace qbm {

struct QuadConfig {
  double abs_tol = 1e-10;     // absolute tolerance on the integral value
  int max_intervals = 4000;   // node budget: 15 evaluations per interval
};

struct QuadResult {
  Complex value;
  double error_estimate = 0.0;
  int intervals = 0;
};

// Adaptive Gauss-Kronrod (G7,K15) on [a,b]. Splits the interval with the
// largest error estimate until the summed estimate drops below abs_tol.
// Throws QuadratureFailureError when the interval budget is exhausted first.
QuadResult integrate_gk(const std::function<Complex(double)>& f, double a,
                        double b, const QuadConfig& cfg = {});

QuadResult integrate_gk_real(const std::function<double(double)>& f, double a,
                             double b, const QuadConfig& cfg = {});

}  // namespace qbm
