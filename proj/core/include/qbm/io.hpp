#pragma once

#include <string>
#include <vector>

#include "qbm/flux.hpp"
#include "qbm/grid.hpp"
#include "qbm/params.hpp"
#include "qbm/pattern.hpp"
#include "qbm/slits.hpp"

namespace qbm {

// All CSV output: '\n' newlines, '.' decimal separator, doubles printed with
// 17 significant digits (round-trip exact).
std::string format_double(double v);

// header: x,P,method,t,K,beta,gamma
void write_pattern_csv(const std::string& path, const DiffractionPattern& pat);

// header: x_plus,x_minus,re,im
void write_grid_csv(const std::string& path, const DensityMatrixGrid& rho);

// header: t,re_trace,im_trace,predicted   (predicted = e^{-gamma t} * N0)
void write_trace_csv(const std::string& path, const std::vector<double>& t,
                     const std::vector<Complex>& traces, double gamma_rate);

// header: t,msd,stderr
void write_msd_csv(const std::string& path, const std::vector<double>& t,
                   const std::vector<double>& msd,
                   const std::vector<double>& sem);

// header: x,P_a,P_b,rel_dev
struct PatternDiff {
  double max_rel_dev = 0.0;
  double mean_rel_dev = 0.0;
};
PatternDiff write_pattern_diff_csv(const std::string& path,
                                   const DiffractionPattern& a,
                                   const DiffractionPattern& b);

// header: x_plus,x_minus (one vertex per row)
PlanarPath read_path_csv(const std::string& path);
void write_path_csv(const std::string& path, const PlanarPath& p);

// JSON parameter blocks. parse errors carry a line/column diagnostic and
// throw ConfigError.
//   params:   {"mass": f, "friction": f, "hbar": f, "kBT": f}
//             (hbar defaults to 1, kBT to 0)
//   geometry: {"w": f, "d": f, "D": f, "v": f}
PhysParams parse_phys_params_json(const std::string& text);
SlitGeometry parse_geometry_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qbm
