#pragma once

#include <optional>
#include <string>

namespace qbmcli {

struct CommonOpts {
  std::string out_dir = ".";
  int threads = 0;
};

struct PatternOpts {
  CommonOpts common;
  std::string config_file;    // optional combined config
  std::string geometry_file;  // or separate geometry + params files
  std::string params_file;
  std::string method = "closed";
  std::string compare;  // "methodA,methodB"
  std::optional<double> t;
  std::size_t samples = 1024;
  double kx_span_pi = 6.0;  // K x spans +- this many pi
  double quad_tol = 1e-10;
  int quad_budget = 4000;
};

struct EvolveOpts {
  CommonOpts common;
  std::string config_file;
  bool emit_diagonal = false;
};

struct LangevinOpts {
  CommonOpts common;
  std::string config_file;
  std::string params_file;
  std::optional<double> dt;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> ensembles;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> record_stride;
};

struct FluxOpts {
  CommonOpts common;
  std::string path1_file;
  std::string path2_file;  // optional: single closed path when empty
  std::string params_file;
};

struct RegimeOpts {
  CommonOpts common;
  std::string params_file;
  double threshold = 10.0;
};

int run_pattern(const PatternOpts& opts);
int run_evolve(const EvolveOpts& opts);
int run_langevin(const LangevinOpts& opts);
int run_flux(const FluxOpts& opts);
int run_regime(const RegimeOpts& opts);

}  // namespace qbmcli
