#include "qbm/params.hpp"

#include <cmath>
#include <string>

namespace qbm {

PhysParams::PhysParams(double mass_, double friction_, double hbar_,
                       double thermal_energy_)
    : mass(mass_),
      friction(friction_),
      hbar(hbar_),
      thermal_energy(thermal_energy_) {
  auto bad = [](double v) { return !std::isfinite(v); };
  if (bad(mass) || bad(friction) || bad(hbar) || bad(thermal_energy))
    throw ConfigError("PhysParams: all fields must be finite");
  if (mass <= 0.0) throw ConfigError("PhysParams: mass must be > 0");
  if (hbar <= 0.0) throw ConfigError("PhysParams: hbar must be > 0");
  if (friction < 0.0) throw ConfigError("PhysParams: friction must be >= 0");
  if (thermal_energy < 0.0)
    throw ConfigError("PhysParams: thermal energy must be >= 0");
}

const char* to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::Quantum: return "Quantum";
    case RegimeTag::Crossover: return "Crossover";
    case RegimeTag::Classical: return "Classical";
  }
  return "?";
}

double gamma(const PhysParams& p) { return p.friction / (2.0 * p.mass); }

double crossover_temperature(const PhysParams& p) { return p.hbar * gamma(p); }

double einstein_diffusion(const PhysParams& p) {
  if (p.friction == 0.0) throw ZeroFrictionError();
  return p.thermal_energy / p.friction;
}

Regime classify_regime(const PhysParams& p, double threshold) {
  if (p.friction == 0.0) throw ZeroFrictionError();
  if (!(threshold > 1.0))
    throw ConfigError("classify_regime: threshold must be > 1");
  const double ratio = p.thermal_energy / crossover_temperature(p);
  RegimeTag tag = RegimeTag::Crossover;
  if (ratio < 1.0 / threshold)
    tag = RegimeTag::Quantum;
  else if (ratio > threshold)
    tag = RegimeTag::Classical;
  return {tag, ratio};
}

}  // namespace qbm
