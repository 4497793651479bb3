#pragma once

#include "qbm/errors.hpp"

namespace qbm {

// Physical backbone: particle mass M, drag coefficient R, action quantum
// hbar and bath thermal energy k_B T, all in caller-chosen coherent units.
// hbar defaults to 1 so dimensionless test setups stay terse.
struct PhysParams {
  double mass;
  double friction;
  double hbar;
  double thermal_energy;

  PhysParams(double mass_, double friction_, double hbar_ = 1.0,
             double thermal_energy_ = 0.0);
};

enum class RegimeTag { Quantum, Crossover, Classical };

const char* to_string(RegimeTag tag);

struct Regime {
  RegimeTag tag;
  double ratio;  // T / T_gamma
};

// Damping rate gamma = R / (2M).
double gamma(const PhysParams& p);

// Crossover scale as an energy: k_B T_gamma = hbar * gamma.
double crossover_temperature(const PhysParams& p);

// Einstein relation D = k_B T / R. Throws ZeroFrictionError when R == 0.
double einstein_diffusion(const PhysParams& p);

// Classifies by ratio = k_B T / (hbar gamma): Quantum below 1/threshold,
// Classical above threshold, Crossover between. threshold must exceed 1.
Regime classify_regime(const PhysParams& p, double threshold = 10.0);

}  // namespace qbm
