#include "qbm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qbm/errors.hpp"

namespace qbm {

namespace {

using nlohmann::json;

// Maps a byte offset from nlohmann's parse_error to a line/column pair.
std::pair<std::size_t, std::size_t> line_col(const std::string& text,
                                             std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(what + ": JSON parse error at line " +
                      std::to_string(line) + ", column " + std::to_string(col) +
                      " (" + e.what() + ")");
  }
}

double require_number(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ConfigError(what + ": missing or non-numeric field \"" + key + "\"");
  return j.at(key).get<double>();
}

double optional_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError(std::string("non-numeric field \"") + key + "\"");
  return j.at(key).get<double>();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);  // binary: '\n' stays '\n'
  if (!os) throw ConfigError("cannot open for writing: " + path);
  return os;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_pattern_csv(const std::string& path,
                       const DiffractionPattern& pat) {
  std::ofstream os = open_out(path);
  os << "x,P,method,t,K,beta,gamma\n";
  const char* method = to_string(pat.method);
  const std::string t = format_double(pat.time);
  const std::string K = format_double(pat.K);
  const std::string beta = format_double(pat.beta);
  const std::string g = format_double(pat.gamma);
  for (std::size_t i = 0; i < pat.x.size(); ++i)
    os << format_double(pat.x[i]) << ',' << format_double(pat.density[i])
       << ',' << method << ',' << t << ',' << K << ',' << beta << ',' << g
       << '\n';
}

void write_grid_csv(const std::string& path, const DensityMatrixGrid& rho) {
  std::ofstream os = open_out(path);
  os << "x_plus,x_minus,re,im\n";
  const auto xs = rho.axis.nodes();
  for (std::size_t i = 0; i < rho.axis.n; ++i)
    for (std::size_t j = 0; j < rho.axis.n; ++j) {
      const Complex v = rho.at(i, j);
      os << format_double(xs[i]) << ',' << format_double(xs[j]) << ','
         << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
}

void write_trace_csv(const std::string& path, const std::vector<double>& t,
                     const std::vector<Complex>& traces, double gamma_rate) {
  std::ofstream os = open_out(path);
  os << "t,re_trace,im_trace,predicted\n";
  const double n0 = traces.empty() ? 1.0 : traces.front().real();
  for (std::size_t i = 0; i < t.size(); ++i)
    os << format_double(t[i]) << ',' << format_double(traces[i].real()) << ','
       << format_double(traces[i].imag()) << ','
       << format_double(n0 * std::exp(-gamma_rate * t[i])) << '\n';
}

void write_msd_csv(const std::string& path, const std::vector<double>& t,
                   const std::vector<double>& msd,
                   const std::vector<double>& sem) {
  std::ofstream os = open_out(path);
  os << "t,msd,stderr\n";
  for (std::size_t i = 0; i < t.size(); ++i)
    os << format_double(t[i]) << ',' << format_double(msd[i]) << ','
       << format_double(sem[i]) << '\n';
}

PatternDiff write_pattern_diff_csv(const std::string& path,
                                   const DiffractionPattern& a,
                                   const DiffractionPattern& b) {
  if (a.x.size() != b.x.size())
    throw ConfigError("pattern diff: sample grids differ in size");
  std::ofstream os = open_out(path);
  os << "x,P_a,P_b,rel_dev\n";
  PatternDiff d;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    const double pa = a.density[i];
    const double pb = b.density[i];
    const double denom = std::max(std::abs(pa), std::abs(pb));
    const double rel = denom == 0.0 ? 0.0 : std::abs(pa - pb) / denom;
    d.max_rel_dev = std::max(d.max_rel_dev, rel);
    sum += rel;
    os << format_double(a.x[i]) << ',' << format_double(pa) << ','
       << format_double(pb) << ',' << format_double(rel) << '\n';
  }
  d.mean_rel_dev = a.x.empty() ? 0.0 : sum / static_cast<double>(a.x.size());
  return d;
}

PlanarPath read_path_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open path CSV: " + path);
  PlanarPath p;
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("x_plus", 0) == 0) continue;  // header
    }
    std::istringstream ss(line);
    double a, b;
    char comma;
    if (!(ss >> a >> comma >> b) || comma != ',')
      throw ConfigError(path + ": bad vertex at line " +
                        std::to_string(lineno));
    p.vertices.push_back({a, b});
  }
  return p;
}

void write_path_csv(const std::string& path, const PlanarPath& p) {
  std::ofstream os = open_out(path);
  os << "x_plus,x_minus\n";
  for (const auto& v : p.vertices)
    os << format_double(v[0]) << ',' << format_double(v[1]) << '\n';
}

PhysParams parse_phys_params_json(const std::string& text) {
  const json j = parse_json(text, "params");
  return PhysParams(require_number(j, "mass", "params"),
                    require_number(j, "friction", "params"),
                    optional_number(j, "hbar", 1.0),
                    optional_number(j, "kBT", 0.0));
}

SlitGeometry parse_geometry_json(const std::string& text) {
  const json j = parse_json(text, "geometry");
  return SlitGeometry(
      require_number(j, "w", "geometry"), require_number(j, "d", "geometry"),
      require_number(j, "D", "geometry"), require_number(j, "v", "geometry"));
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os = open_out(path);
  os << content;
}

}  // namespace qbm
