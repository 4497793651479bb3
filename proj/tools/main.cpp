// qbm: two-slit diffraction, damped density-matrix evolution, Langevin
// ensembles and dissipative-flux phases from one command line.

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qbm/errors.hpp"
#include "qbm/version.hpp"

namespace {

void add_common(CLI::App* cmd, qbmcli::CommonOpts& common) {
  cmd->add_option("--out", common.out_dir,
                  "Output directory (manifest and data files)")
      ->capture_default_str();
  cmd->add_option("--threads", common.threads,
                  "Worker thread cap; 0 uses QBM_THREADS or all cores")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum Brownian motion toolkit"};
  app.set_version_flag("--version", qbm::kVersion);
  app.require_subcommand(1);

  qbmcli::PatternOpts pattern;
  auto* cmd_pattern = app.add_subcommand(
      "pattern", "Two-slit screen density by one of six methods");
  add_common(cmd_pattern, pattern.common);
  cmd_pattern->add_option("--config", pattern.config_file,
                          "JSON with geometry and params blocks");
  cmd_pattern->add_option("--geometry", pattern.geometry_file,
                          "geometry JSON {w, d, D, v} (lengths, speed)");
  cmd_pattern->add_option("--params", pattern.params_file,
                          "params JSON {mass, friction, hbar, kBT}");
  cmd_pattern->add_option(
      "--method", pattern.method,
      "exact|farfield|closed|damped-rescaled|damped-kernel|damped-paper50a")
      ->capture_default_str();
  cmd_pattern->add_option("--compare", pattern.compare,
                          "two methods \"a,b\": write both plus a diff CSV");
  cmd_pattern->add_option("--t", pattern.t,
                          "propagation time (time units; default D/v)");
  cmd_pattern->add_option("--samples", pattern.samples,
                          "number of screen samples")
      ->capture_default_str();
  cmd_pattern->add_option("--kx-span", pattern.kx_span_pi,
                          "half-range of K*x in units of pi")
      ->capture_default_str();
  cmd_pattern->add_option("--quad-tol", pattern.quad_tol,
                          "absolute quadrature tolerance")
      ->capture_default_str();
  cmd_pattern->add_option("--quad-budget", pattern.quad_budget,
                          "max adaptive quadrature intervals")
      ->capture_default_str();

  qbmcli::EvolveOpts evolve;
  auto* cmd_evolve = app.add_subcommand(
      "evolve", "Grid integration of the Brownian master equation");
  add_common(cmd_evolve, evolve.common);
  cmd_evolve->add_option("--config", evolve.config_file,
                         "evolver config JSON (see README)")
      ->required();
  cmd_evolve->add_flag("--emit-diagonal", evolve.emit_diagonal,
                       "also write the final diagonal as a pattern CSV");

  qbmcli::LangevinOpts langevin;
  auto* cmd_langevin = app.add_subcommand(
      "langevin", "Classical Langevin ensemble and diffusion estimate");
  add_common(cmd_langevin, langevin.common);
  cmd_langevin->add_option("--config", langevin.config_file,
                           "full config JSON (optional)");
  cmd_langevin->add_option("--params", langevin.params_file,
                           "params JSON {mass, friction, hbar, kBT}");
  cmd_langevin->add_option("--dt", langevin.dt, "time step (time units)");
  cmd_langevin->add_option("--steps", langevin.steps, "number of steps");
  cmd_langevin->add_option("--ensembles", langevin.ensembles,
                           "number of trajectories (>= 100)");
  cmd_langevin->add_option("--seed", langevin.seed, "64-bit RNG seed");
  cmd_langevin->add_option("--record-stride", langevin.record_stride,
                           "record every k-th step");

  qbmcli::FluxOpts flux;
  auto* cmd_flux = app.add_subcommand(
      "flux", "Oriented area and interference phase between paths");
  add_common(cmd_flux, flux.common);
  cmd_flux->add_option("--path1", flux.path1_file,
                       "path CSV (x_plus,x_minus); closed loop if no --path2")
      ->required();
  cmd_flux->add_option("--path2", flux.path2_file,
                       "second path CSV sharing endpoints with --path1");
  cmd_flux->add_option("--params", flux.params_file, "params JSON")
      ->required();

  qbmcli::RegimeOpts regime;
  auto* cmd_regime = app.add_subcommand(
      "regime", "Quantum/classical regime classification");
  add_common(cmd_regime, regime.common);
  cmd_regime->add_option("--params", regime.params_file, "params JSON")
      ->required();
  cmd_regime->add_option("--threshold", regime.threshold,
                         "decade threshold on T/T_gamma (> 1)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmd_pattern->parsed()) return qbmcli::run_pattern(pattern);
    if (cmd_evolve->parsed()) return qbmcli::run_evolve(evolve);
    if (cmd_langevin->parsed()) return qbmcli::run_langevin(langevin);
    if (cmd_flux->parsed()) return qbmcli::run_flux(flux);
    if (cmd_regime->parsed()) return qbmcli::run_regime(regime);
  } catch (const qbm::NaNDetectedError& e) {
    std::cerr << "instability: " << e.what() << " (step " << e.step() << ")"
              << std::endl;
    return 4;
  } catch (const qbm::InstabilityError& e) {
    std::cerr << "instability: " << e.what() << std::endl;
    return 4;
  } catch (const qbm::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << std::endl;
    return 3;
  } catch (const qbm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
