#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>

#include <json.hpp>

#include "qbm/diffraction.hpp"
#include "qbm/evolver.hpp"
#include "qbm/io.hpp"
#include "qbm/kernel.hpp"
#include "qbm/stochastic.hpp"
#include "qbm/version.hpp"

namespace qbmcli {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace qbm;

namespace {

json load_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Recover a line/column diagnostic for the exit-2 message.
    std::size_t line = 1, col = 1;
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(path + ": JSON parse error at line " +
                      std::to_string(line) + ", column " + std::to_string(col));
  }
  // Replaying a manifest: unwrap its embedded config block.
  if (j.is_object() && j.contains("config") && j.contains("subcommand"))
    return j.at("config");
  return j;
}

PhysParams params_from_json(const json& j) {
  if (!j.contains("mass") || !j.contains("friction"))
    throw ConfigError("params: \"mass\" and \"friction\" are required");
  return PhysParams(j.at("mass").get<double>(), j.at("friction").get<double>(),
                    j.value("hbar", 1.0), j.value("kBT", 0.0));
}

json params_to_json(const PhysParams& p) {
  return {{"mass", p.mass},
          {"friction", p.friction},
          {"hbar", p.hbar},
          {"kBT", p.thermal_energy}};
}

SlitGeometry geometry_from_json(const json& j) {
  for (const char* key : {"w", "d", "D", "v"})
    if (!j.contains(key))
      throw ConfigError(std::string("geometry: missing field \"") + key + "\"");
  return SlitGeometry(j.at("w").get<double>(), j.at("d").get<double>(),
                      j.at("D").get<double>(), j.at("v").get<double>());
}

json geometry_to_json(const SlitGeometry& g) {
  return {{"w", g.width},
          {"d", g.half_separation},
          {"D", g.screen_distance},
          {"v", g.speed}};
}

class ManifestWriter {
 public:
  ManifestWriter(std::string subcommand, std::string out_dir)
      : subcommand_(std::move(subcommand)),
        out_dir_(std::move(out_dir)),
        start_(std::chrono::steady_clock::now()) {
    fs::create_directories(out_dir_);
  }

  std::string path(const std::string& name) const {
    return (fs::path(out_dir_) / name).string();
  }

  void add_output(const std::string& name) { outputs_.push_back(name); }

  void finish(const json& resolved_config,
              std::optional<std::uint64_t> seed = std::nullopt) {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    json m = {{"subcommand", subcommand_},
              {"version", kVersion},
              {"duration_seconds", secs},
              {"config", resolved_config},
              {"outputs", outputs_}};
    if (seed) m["seed"] = *seed;
    write_text_file(path("manifest.json"), m.dump(2) + "\n");
  }

 private:
  std::string subcommand_;
  std::string out_dir_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

struct MethodSpec {
  PatternMethod method;
  const char* flag;
};

constexpr MethodSpec kMethods[] = {
    {PatternMethod::ExactFresnel, "exact"},
    {PatternMethod::FarField, "farfield"},
    {PatternMethod::ClosedForm, "closed"},
    {PatternMethod::DampedRescaled, "damped-rescaled"},
    {PatternMethod::DampedKernel, "damped-kernel"},
    {PatternMethod::DampedPaper50a, "damped-paper50a"},
};

PatternMethod method_from_flag(const std::string& flag) {
  for (const auto& m : kMethods)
    if (flag == m.flag) return m.method;
  throw ConfigError("unknown pattern method \"" + flag +
                    "\" (exact|farfield|closed|damped-rescaled|damped-kernel|"
                    "damped-paper50a)");
}

DiffractionPattern compute_pattern(PatternMethod method,
                                   const SlitGeometry& g, const PhysParams& p,
                                   double t, const std::vector<double>& xs,
                                   const QuadConfig& quad, int threads) {
  const AnalyticDensity rho0 = initial_density(g);
  switch (method) {
    case PatternMethod::ExactFresnel:
      return pattern_exact(rho0, t, xs, p, quad, threads);
    case PatternMethod::FarField:
      return pattern_farfield(rho0, t, xs, p, threads);
    case PatternMethod::ClosedForm: {
      // Closed form is defined at the screen time t = D/v.
      DiffractionPattern pat = pattern_closed_form(PatternParams::from(g, p), xs);
      pat.time = g.time_of_flight();
      pat.gamma = gamma(p);
      return pat;
    }
    case PatternMethod::DampedRescaled:
      return pattern_damped_rescaled(rho0, t, xs, p, threads);
    case PatternMethod::DampedKernel:
      return pattern_damped_kernel(rho0, t, xs, p, quad, threads).full;
    case PatternMethod::DampedPaper50a:
      return pattern_damped_kernel(rho0, t, xs, p, quad, threads).paper50a;
    default:
      throw ConfigError("method not computable from geometry");
  }
}

}  // namespace

int run_pattern(const PatternOpts& opts) {
  json geometry_json, params_json;
  if (!opts.config_file.empty()) {
    const json cfg = load_json_file(opts.config_file);
    if (!cfg.contains("geometry") || !cfg.contains("params"))
      throw ConfigError("pattern config needs \"geometry\" and \"params\"");
    geometry_json = cfg.at("geometry");
    params_json = cfg.at("params");
  } else {
    if (opts.geometry_file.empty() || opts.params_file.empty())
      throw ConfigError("pattern: provide --config or --geometry + --params");
    geometry_json = load_json_file(opts.geometry_file);
    params_json = load_json_file(opts.params_file);
  }
  const SlitGeometry g = geometry_from_json(geometry_json);
  const PhysParams p = params_from_json(params_json);
  const double t = opts.t.value_or(g.time_of_flight());
  const PatternParams pp = PatternParams::from(g, p);
  const auto xs =
      default_screen_samples(pp.K, opts.samples, opts.kx_span_pi * kPi);
  const QuadConfig quad{opts.quad_tol, opts.quad_budget};

  ManifestWriter manifest("pattern", opts.common.out_dir);
  json resolved = {{"geometry", geometry_to_json(g)},
                   {"params", params_to_json(p)},
                   {"t", t},
                   {"samples", opts.samples},
                   {"kx_span_pi", opts.kx_span_pi},
                   {"quad_tol", opts.quad_tol},
                   {"quad_budget", opts.quad_budget}};

  if (!opts.compare.empty()) {
    const auto comma = opts.compare.find(',');
    if (comma == std::string::npos)
      throw ConfigError("--compare expects \"methodA,methodB\"");
    const std::string flag_a = opts.compare.substr(0, comma);
    const std::string flag_b = opts.compare.substr(comma + 1);
    const auto pat_a = compute_pattern(method_from_flag(flag_a), g, p, t, xs,
                                       quad, opts.common.threads);
    const auto pat_b = compute_pattern(method_from_flag(flag_b), g, p, t, xs,
                                       quad, opts.common.threads);
    const std::string name_a = "pattern_" + flag_a + ".csv";
    const std::string name_b = "pattern_" + flag_b + ".csv";
    write_pattern_csv(manifest.path(name_a), pat_a);
    write_pattern_csv(manifest.path(name_b), pat_b);
    const PatternDiff diff =
        write_pattern_diff_csv(manifest.path("diff.csv"), pat_a, pat_b);
    manifest.add_output(name_a);
    manifest.add_output(name_b);
    manifest.add_output("diff.csv");
    resolved["compare"] = opts.compare;
    json summary = {{"max_rel_dev", diff.max_rel_dev},
                    {"mean_rel_dev", diff.mean_rel_dev}};
    resolved["diff_summary"] = summary;
    manifest.finish(resolved);
    std::cout << summary.dump(2) << "\n";
    return 0;
  }

  const auto pat = compute_pattern(method_from_flag(opts.method), g, p, t, xs,
                                   quad, opts.common.threads);
  const std::string name = "pattern_" + opts.method + ".csv";
  write_pattern_csv(manifest.path(name), pat);
  manifest.add_output(name);
  resolved["method"] = opts.method;
  manifest.finish(resolved);
  return 0;
}

int run_evolve(const EvolveOpts& opts) {
  if (opts.config_file.empty()) throw ConfigError("evolve: --config required");
  const json cfg_json = load_json_file(opts.config_file);
  if (!cfg_json.contains("params"))
    throw ConfigError("evolve config: \"params\" block required");
  const PhysParams p = params_from_json(cfg_json.at("params"));

  EvolverConfig cfg;
  if (cfg_json.contains("grid")) {
    const json& gj = cfg_json.at("grid");
    cfg.axis = GridAxis{gj.value("min", -16.0), gj.value("max", 16.0),
                        gj.value("n", std::size_t{256})};
  }
  cfg.dt = cfg_json.value("dt", 1e-3);
  cfg.t_final = cfg_json.value("t_final", 1.0);
  cfg.snapshot_stride = cfg_json.value("snapshot_stride", std::size_t{50});
  cfg.c_stab = cfg_json.value("c_stab", 0.2);
  const std::string scheme = cfg_json.value("scheme", std::string("spectral"));
  if (scheme == "spectral")
    cfg.scheme = DerivativeScheme::Spectral;
  else if (scheme == "central4")
    cfg.scheme = DerivativeScheme::CentralOrder4;
  else
    throw ConfigError("evolve config: scheme must be spectral|central4");
  const std::string boundary =
      cfg_json.value("boundary", std::string("periodic"));
  if (boundary != "periodic")
    throw ConfigError("evolve config: only periodic boundaries are supported");

  Potential potential = Potential::zero();
  json pot_json = {{"type", "zero"}};
  if (cfg_json.contains("potential")) {
    const json& uj = cfg_json.at("potential");
    const std::string type = uj.value("type", std::string("zero"));
    if (type == "quadratic") {
      const double k = uj.value("k", 1.0);
      potential = Potential::quadratic(k);
      pot_json = {{"type", "quadratic"}, {"k", k}};
    } else if (type != "zero") {
      throw ConfigError("evolve config: potential type must be zero|quadratic");
    }
  }

  const json init =
      cfg_json.value("initial", json{{"type", "gaussian"}, {"sigma", 1.0}});
  const std::string init_type = init.value("type", std::string("gaussian"));
  DensityMatrixGrid rho0(cfg.axis);
  if (init_type == "gaussian") {
    const double sigma = init.value("sigma", 1.0);
    const double x0 = init.value("x0", 0.0);
    const double k0 = init.value("k0", 0.0);
    const auto xs = cfg.axis.nodes();
    const double norm = 1.0 / (std::sqrt(2.0 * kPi) * sigma);
    for (std::size_t i = 0; i < cfg.axis.n; ++i)
      for (std::size_t j = 0; j < cfg.axis.n; ++j) {
        const double a = xs[i] - x0, b = xs[j] - x0;
        rho0.at(i, j) = norm * std::exp(Complex{
                                   -(a * a + b * b) / (4.0 * sigma * sigma),
                                   k0 * (a - b)});
      }
  } else if (init_type == "slits") {
    const SlitGeometry g = geometry_from_json(init.at("geometry"));
    const std::string aperture =
        init.value("aperture", std::string("gaussian"));
    rho0 = discretize(initial_density(g, aperture == "tophat"
                                             ? Aperture::TopHat
                                             : Aperture::Gaussian),
                      cfg.axis);
  } else {
    throw ConfigError("evolve config: initial type must be gaussian|slits");
  }

  ManifestWriter manifest("evolve", opts.common.out_dir);
  const EvolveResult res = evolve(rho0, potential, p, cfg, opts.common.threads);

  char name[64];
  for (std::size_t s = 0; s < res.snapshots.size(); ++s) {
    std::snprintf(name, sizeof name, "rho_%06zu.csv", s);
    write_grid_csv(manifest.path(name), res.snapshots[s]);
    manifest.add_output(name);
  }
  write_trace_csv(manifest.path("trace.csv"), res.diag.step_times,
                  res.diag.trace_series, gamma(p));
  manifest.add_output("trace.csv");
  if (opts.emit_diagonal) {
    const auto diag =
        diagonal_pattern(res.snapshots.back(), res.snapshot_times.back(), p);
    write_pattern_csv(manifest.path("diagonal.csv"), diag);
    manifest.add_output("diagonal.csv");
  }

  json resolved = {{"params", params_to_json(p)},
                   {"grid",
                    {{"min", cfg.axis.min},
                     {"max", cfg.axis.max},
                     {"n", cfg.axis.n}}},
                   {"dt", cfg.dt},
                   {"t_final", cfg.t_final},
                   {"scheme", scheme},
                   {"boundary", "periodic"},
                   {"snapshot_stride", cfg.snapshot_stride},
                   {"c_stab", cfg.c_stab},
                   {"potential", pot_json},
                   {"initial", init},
                   {"dt_actual", res.dt_actual},
                   {"steps", res.steps}};
  json diag_json = {
      {"final_trace_re", res.diag.trace_series.back().real()},
      {"final_trace_im", res.diag.trace_series.back().imag()},
      {"final_herm_residual", res.diag.herm_residual.back()},
      {"max_boundary_mass",
       *std::max_element(res.diag.boundary_mass.begin(),
                         res.diag.boundary_mass.end())}};
  resolved["diagnostics"] = diag_json;
  manifest.finish(resolved);
  std::cout << diag_json.dump(2) << "\n";
  return 0;
}

int run_langevin(const LangevinOpts& opts) {
  json cfg_json = json::object();
  if (!opts.config_file.empty()) cfg_json = load_json_file(opts.config_file);

  PhysParams p = [&] {
    if (!opts.params_file.empty())
      return params_from_json(load_json_file(opts.params_file));
    if (cfg_json.contains("params"))
      return params_from_json(cfg_json.at("params"));
    throw ConfigError("langevin: provide --params or a config with params");
  }();

  LangevinConfig cfg;
  cfg.dt = opts.dt.value_or(cfg_json.value("dt", 0.05 * p.mass /
                                                     std::max(p.friction, 1e-300)));
  cfg.n_steps = opts.steps.value_or(cfg_json.value("steps", std::size_t{2000}));
  cfg.n_ensembles =
      opts.ensembles.value_or(cfg_json.value("ensembles", std::size_t{10000}));
  cfg.seed = opts.seed.value_or(cfg_json.value("seed", std::uint64_t{1}));
  cfg.x0 = cfg_json.value("x0", 0.0);
  cfg.v0 = cfg_json.value("v0", 0.0);
  cfg.record_stride =
      opts.record_stride.value_or(cfg_json.value("record_stride", std::size_t{1}));
  const double fit_lo = cfg_json.value("fit_lo", 10.0);
  const double fit_hi = cfg_json.value("fit_hi", 100.0);
  const std::size_t blocks = cfg_json.value("blocks", std::size_t{100});

  ManifestWriter manifest("langevin", opts.common.out_dir);
  const MsdSeries series = ensemble_msd(cfg, p, blocks, opts.common.threads);
  write_msd_csv(manifest.path("msd.csv"), series.t, series.msd, series.sem);
  manifest.add_output("msd.csv");

  const DiffusionEstimate est = estimate_diffusion(series, p, fit_lo, fit_hi);
  const double d_einstein = einstein_diffusion(p);
  const double z = est.std_error > 0.0
                       ? (est.d_hat - d_einstein) / est.std_error
                       : 0.0;
  const json diffusion = {
      {"D_hat", est.d_hat},
      {"stderr", est.std_error},
      {"D_einstein", d_einstein},
      {"z_score", z},
      {"fit_window", {est.window_lo, est.window_hi}},
      {"equipartition",
       {{"v2_mean", series.v2_tail_mean},
        {"v2_sem", series.v2_tail_sem},
        {"expected", p.thermal_energy / p.mass}}}};
  write_text_file(manifest.path("diffusion.json"), diffusion.dump(2) + "\n");
  manifest.add_output("diffusion.json");

  const json resolved = {{"params", params_to_json(p)},
                         {"dt", cfg.dt},
                         {"steps", cfg.n_steps},
                         {"ensembles", cfg.n_ensembles},
                         {"seed", cfg.seed},
                         {"x0", cfg.x0},
                         {"v0", cfg.v0},
                         {"record_stride", cfg.record_stride},
                         {"fit_lo", fit_lo},
                         {"fit_hi", fit_hi},
                         {"blocks", blocks}};
  manifest.finish(resolved, cfg.seed);
  std::cout << diffusion.dump(2) << "\n";
  return 0;
}

int run_flux(const FluxOpts& opts) {
  if (opts.path1_file.empty()) throw ConfigError("flux: --path1 required");
  if (opts.params_file.empty()) throw ConfigError("flux: --params required");
  const PhysParams p = params_from_json(load_json_file(opts.params_file));
  const PlanarPath p1 = read_path_csv(opts.path1_file);

  double sigma = 0.0;
  if (!opts.path2_file.empty()) {
    const PlanarPath p2 = read_path_csv(opts.path2_file);
    sigma = oriented_area_between(p1, p2);
  } else {
    sigma = loop_area_literal(p1);
  }
  const double phase = p.friction * sigma / p.hbar;
  const QuantizationResult q = constructive_condition(sigma, p);

  ManifestWriter manifest("flux", opts.common.out_dir);
  const json result = {{"sigma", sigma},
                       {"phase", phase},
                       {"n", q.n},
                       {"residual", q.residual}};
  write_text_file(manifest.path("flux.json"), result.dump(2) + "\n");
  manifest.add_output("flux.json");
  const json resolved = {{"params", params_to_json(p)},
                         {"path1", opts.path1_file},
                         {"path2", opts.path2_file}};
  manifest.finish(resolved);
  std::cout << result.dump(2) << "\n";
  return 0;
}

int run_regime(const RegimeOpts& opts) {
  if (opts.params_file.empty()) throw ConfigError("regime: --params required");
  const PhysParams p = params_from_json(load_json_file(opts.params_file));
  if (p.friction == 0.0)
    throw ConfigError(
        "regime: friction R = 0 has no Einstein diffusion or crossover "
        "temperature; provide R > 0");
  const Regime r = classify_regime(p, opts.threshold);

  ManifestWriter manifest("regime", opts.common.out_dir);
  const json result = {{"gamma", gamma(p)},
                       {"T_gamma_energy", crossover_temperature(p)},
                       {"D", einstein_diffusion(p)},
                       {"ratio", r.ratio},
                       {"regime", to_string(r.tag)}};
  write_text_file(manifest.path("regime.json"), result.dump(2) + "\n");
  manifest.add_output("regime.json");
  const json resolved = {{"params", params_to_json(p)},
                         {"threshold", opts.threshold}};
  manifest.finish(resolved);
  std::cout << result.dump(2) << "\n";
  return 0;
}

}  // namespace qbmcli
