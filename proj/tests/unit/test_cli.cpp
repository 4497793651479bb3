#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "qbm/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout + stderr merged
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(QBM_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  RunResult r{};
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) {
  return (fs::path(QBM_FIXTURES_DIR) / name).string();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

json stdout_json(const std::string& text) {
  return json::parse(text);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("regime reports the crossover fixture") {
  const auto dir = fresh_dir("qbm_cli_regime");
  const RunResult r = run_cli("regime --params " +
                              fixture("params_crossover.json") + " --out " +
                              dir.string());
  REQUIRE(r.exit_code == 0);
  const json j = stdout_json(r.output);
  CHECK(j.at("regime") == "Crossover");
  CHECK(j.at("ratio").get<double>() == doctest::Approx(1.0));
  CHECK(j.at("gamma").get<double>() == doctest::Approx(0.5));
  CHECK(j.at("T_gamma_energy").get<double>() == doctest::Approx(0.5));
  CHECK(j.at("D").get<double>() == doctest::Approx(0.5));
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "regime.json"));
}

TEST_CASE("regime rejects zero friction with exit 2") {
  const auto dir = fresh_dir("qbm_cli_regime_r0");
  const RunResult r = run_cli("regime --params " +
                              fixture("params_free.json") + " --out " +
                              dir.string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("friction") != std::string::npos);
}

TEST_CASE("malformed json exits 2 with line/column diagnostics") {
  const auto dir = fresh_dir("qbm_cli_badjson");
  const auto bad = dir / "bad.json";
  std::ofstream(bad) << "{\n  \"mass\": 1.0,\n  broken\n}\n";
  const RunResult r =
      run_cli("regime --params " + bad.string() + " --out " + dir.string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("line 3") != std::string::npos);
  CHECK(r.output.find("column") != std::string::npos);
}

TEST_CASE("closed-form pattern lands its fringe zeros on the grid") {
  const auto dir = fresh_dir("qbm_cli_pattern");
  const RunResult r = run_cli(
      "pattern --geometry " + fixture("geometry_fig2.json") + " --params " +
      fixture("params_free.json") + " --method closed --out " + dir.string());
  REQUIRE(r.exit_code == 0);
  const fs::path csv = dir / "pattern_closed.csv";
  REQUIRE(fs::exists(csv));

  std::ifstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line == "x,P,method,t,K,beta,gamma");
  std::vector<double> xs, ps;
  while (std::getline(is, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    xs.push_back(std::stod(line.substr(0, c1)));
    ps.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
  }
  REQUIRE(xs.size() == 1024);
  // K = 0.1: cos^2 zeros at x = (k + 1/2) pi / K; the sampled minimum next
  // to each zero must be within one grid step.
  const double K = 0.1;
  const double step = xs[1] - xs[0];
  for (int k = 0; k < 6; ++k) {
    const double x0 = (k + 0.5) * 3.14159265358979323846 / K;
    std::size_t best = 0;
    for (std::size_t i = 1; i < xs.size(); ++i)
      if (xs[i] > x0 - 2 * step && xs[i] < x0 + 2 * step &&
          ps[i] < ps[best])
        best = i;
    CHECK(std::abs(xs[best] - x0) <= step);
  }
}

TEST_CASE("compare farfield vs closed stays below 1e-10") {
  const auto dir = fresh_dir("qbm_cli_compare");
  const RunResult r = run_cli(
      "pattern --geometry " + fixture("geometry_fig2.json") + " --params " +
      fixture("params_free.json") + " --compare farfield,closed --out " +
      dir.string());
  REQUIRE(r.exit_code == 0);
  const json j = stdout_json(r.output);
  CHECK(j.at("max_rel_dev").get<double>() < 1e-10);
  CHECK(fs::exists(dir / "diff.csv"));
  CHECK(fs::exists(dir / "pattern_farfield.csv"));
  CHECK(fs::exists(dir / "pattern_closed.csv"));
}

TEST_CASE("damped-rescaled at R = 0 is numerically identical to farfield") {
  const auto dir = fresh_dir("qbm_cli_r0");
  const RunResult r = run_cli(
      "pattern --geometry " + fixture("geometry_fig2.json") + " --params " +
      fixture("params_free.json") +
      " --compare damped-rescaled,farfield --out " + dir.string());
  REQUIRE(r.exit_code == 0);
  const json j = stdout_json(r.output);
  CHECK(j.at("max_rel_dev").get<double>() == 0.0);
}

TEST_CASE("quadrature budget exhaustion exits 3") {
  const auto dir = fresh_dir("qbm_cli_quadfail");
  // A short propagation time makes the Fresnel integrand wildly
  // oscillatory, far beyond an 8-interval budget.
  const RunResult r = run_cli(
      "pattern --geometry " + fixture("geometry_fig2.json") + " --params " +
      fixture("params_free.json") +
      " --method exact --t 0.01 --quad-tol 1e-12 --quad-budget 8 --out " +
      dir.string());
  CHECK(r.exit_code == 3);
}

TEST_CASE("langevin runs are byte-reproducible for a fixed seed") {
  const auto dir_a = fresh_dir("qbm_cli_lang_a");
  const auto dir_b = fresh_dir("qbm_cli_lang_b");
  const std::string base = "langevin --config " +
                           fixture("langevin_small.json") + " --out ";
  REQUIRE(run_cli(base + dir_a.string()).exit_code == 0);
  REQUIRE(run_cli(base + dir_b.string() + " --threads 2").exit_code == 0);
  CHECK(qbm::read_text_file((dir_a / "msd.csv").string()) ==
        qbm::read_text_file((dir_b / "msd.csv").string()));
  CHECK(qbm::read_text_file((dir_a / "diffusion.json").string()) ==
        qbm::read_text_file((dir_b / "diffusion.json").string()));
}

TEST_CASE("flux of the unit square loop") {
  const auto dir = fresh_dir("qbm_cli_flux");
  const RunResult r =
      run_cli("flux --path1 " + fixture("path_square.csv") + " --params " +
              fixture("params_unit.json") + " --out " + dir.string());
  REQUIRE(r.exit_code == 0);
  const json j = stdout_json(r.output);
  CHECK(j.at("sigma").get<double>() == -1.0);
  CHECK(j.at("n").get<long long>() == 0);
}

TEST_CASE("flux between two paths matches the frozen fixture") {
  const auto dir = fresh_dir("qbm_cli_flux2");
  const RunResult r = run_cli(
      "flux --path1 " + fixture("path_square_p1.csv") + " --path2 " +
      fixture("path_return_p2.csv") + " --params " +
      fixture("params_hbar2pi.json") + " --out " + dir.string());
  REQUIRE(r.exit_code == 0);
  const json got = stdout_json(r.output);
  const json want =
      json::parse(qbm::read_text_file(fixture("flux_square_expected.json")));
  CHECK(got.at("sigma").get<double>() == want.at("sigma").get<double>());
  CHECK(got.at("phase").get<double>() == want.at("phase").get<double>());
  CHECK(got.at("n").get<long long>() == want.at("n").get<long long>());
  CHECK(got.at("residual").get<double>() ==
        want.at("residual").get<double>());
}

TEST_CASE("flux endpoint mismatch exits 2") {
  const auto dir = fresh_dir("qbm_cli_flux_bad");
  const auto other = dir / "other.csv";
  std::ofstream(other) << "x_plus,x_minus\n0,0\n2,3\n";
  const RunResult r = run_cli(
      "flux --path1 " + fixture("path_square_p1.csv") + " --path2 " +
      other.string() + " --params " + fixture("params_unit.json") + " --out " +
      dir.string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("endpoint") != std::string::npos);
}

TEST_CASE("evolve smoke run decays its trace as predicted") {
  const auto dir = fresh_dir("qbm_cli_evolve");
  const RunResult r = run_cli("evolve --config " + fixture("evolve_smoke.json") +
                              " --out " + dir.string() + " --emit-diagonal");
  REQUIRE(r.exit_code == 0);
  REQUIRE(fs::exists(dir / "trace.csv"));
  CHECK(fs::exists(dir / "diagonal.csv"));

  std::ifstream is(dir / "trace.csv");
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,re_trace,im_trace,predicted");
  std::string last;
  while (std::getline(is, line))
    if (!line.empty()) last = line;
  // layout: t,re,im,predicted
  std::vector<double> cols;
  std::size_t pos = 0;
  while (pos != std::string::npos) {
    const auto next = last.find(',', pos);
    cols.push_back(std::stod(last.substr(pos, next - pos)));
    pos = next == std::string::npos ? next : next + 1;
  }
  REQUIRE(cols.size() == 4);
  CHECK(std::abs(cols[1] - cols[3]) < 1e-3 * cols[3]);
  CHECK(std::abs(cols[2]) < 1e-8);

  // Manifest exists and only names files inside the output directory.
  const json manifest =
      json::parse(qbm::read_text_file((dir / "manifest.json").string()));
  for (const auto& name : manifest.at("outputs"))
    CHECK(fs::exists(dir / name.get<std::string>()));
}

TEST_CASE("manifest replay reproduces a pattern run byte-for-byte") {
  const auto dir_a = fresh_dir("qbm_cli_replay_a");
  const auto dir_b = fresh_dir("qbm_cli_replay_b");
  REQUIRE(run_cli("pattern --geometry " + fixture("geometry_fig2.json") +
                  " --params " + fixture("params_unit.json") +
                  " --method damped-rescaled --out " + dir_a.string())
              .exit_code == 0);
  REQUIRE(run_cli("pattern --config " + (dir_a / "manifest.json").string() +
                  " --method damped-rescaled --out " + dir_b.string())
              .exit_code == 0);
  CHECK(qbm::read_text_file((dir_a / "pattern_damped-rescaled.csv").string()) ==
        qbm::read_text_file((dir_b / "pattern_damped-rescaled.csv").string()));
}

TEST_CASE("evolve with an unstable dt exits 4") {
  const auto dir = fresh_dir("qbm_cli_evolve_bad");
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({
    "params": {"mass": 1.0, "friction": 1.0},
    "grid": {"min": -12.0, "max": 12.0, "n": 64},
    "dt": 0.5, "t_final": 1.0
  })";
  const RunResult r =
      run_cli("evolve --config " + cfg.string() + " --out " + dir.string());
  CHECK(r.exit_code == 4);
  CHECK(r.output.find("stability") != std::string::npos);
}

}  // TEST_SUITE
