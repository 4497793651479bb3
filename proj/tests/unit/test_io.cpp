#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qbm/diffraction.hpp"
#include "qbm/io.hpp"

using namespace qbm;

namespace {

std::string tmp_file(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) { return read_text_file(path); }

}  // namespace

TEST_SUITE("io") {

TEST_CASE("doubles round-trip at 17 significant digits") {
  for (double v : {1.0, -0.1, kPi, 1e-300, 123456789.123456789, 0.375}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("pattern csv layout") {
  DiffractionPattern pat;
  pat.x = {0.0, 0.5};
  pat.density = {1.0, 0.25};
  pat.method = PatternMethod::ClosedForm;
  pat.time = 10.0;
  pat.K = 0.1;
  pat.beta = 0.2;
  pat.gamma = 0.0;
  const std::string path = tmp_file("qbm_test_pattern.csv");
  write_pattern_csv(path, pat);
  const std::string text = slurp(path);
  CHECK(text.rfind("x,P,method,t,K,beta,gamma\n", 0) == 0);
  CHECK(text.find("ClosedForm") != std::string::npos);
  CHECK(text.find("\r") == std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("path csv round trip") {
  PlanarPath p{{{0.0, 0.0}, {1.0, 0.125}, {-0.5, 2.0}}, false};
  const std::string path = tmp_file("qbm_test_path.csv");
  write_path_csv(path, p);
  const PlanarPath q = read_path_csv(path);
  CHECK(q.vertices == p.vertices);
  std::remove(path.c_str());
}

TEST_CASE("params json parsing and defaults") {
  const PhysParams p =
      parse_phys_params_json(R"({"mass": 2.0, "friction": 0.5})");
  CHECK(p.mass == 2.0);
  CHECK(p.friction == 0.5);
  CHECK(p.hbar == 1.0);
  CHECK(p.thermal_energy == 0.0);

  const PhysParams q = parse_phys_params_json(
      R"({"mass": 1.0, "friction": 1.0, "hbar": 2.0, "kBT": 0.25})");
  CHECK(q.hbar == 2.0);
  CHECK(q.thermal_energy == 0.25);

  CHECK_THROWS_AS(parse_phys_params_json(R"({"friction": 1.0})"), ConfigError);
}

TEST_CASE("json parse errors carry line and column") {
  bool caught = false;
  try {
    parse_phys_params_json("{\n  \"mass\": 1.0,\n  oops\n}");
  } catch (const ConfigError& e) {
    caught = true;
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("column") != std::string::npos);
  }
  CHECK(caught);
}

TEST_CASE("geometry json") {
  const SlitGeometry g =
      parse_geometry_json(R"({"w": 0.2, "d": 1.0, "D": 20.0, "v": 2.0})");
  CHECK(g.width == 0.2);
  CHECK(g.time_of_flight() == 10.0);
  CHECK_THROWS_AS(parse_geometry_json(R"({"w": 3.0, "d": 1.0, "D": 1, "v": 1})"),
                  ConfigError);
}

TEST_CASE("pattern diff summary") {
  DiffractionPattern a, b;
  a.x = b.x = {0.0, 1.0, 2.0};
  a.density = {1.0, 2.0, 4.0};
  b.density = {1.0, 2.2, 4.0};
  const std::string path = tmp_file("qbm_test_diff.csv");
  const PatternDiff d = write_pattern_diff_csv(path, a, b);
  CHECK(d.max_rel_dev == doctest::Approx(0.2 / 2.2));
  CHECK(d.mean_rel_dev == doctest::Approx(0.2 / 2.2 / 3.0));
  std::remove(path.c_str());
}

}  // TEST_SUITE
