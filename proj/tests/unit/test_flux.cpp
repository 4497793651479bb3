#include <doctest.h>

#include <cmath>

#include "qbm/flux.hpp"
#include "qbm/numeric.hpp"
#include "qbm/rng.hpp"

using namespace qbm;

namespace {

PlanarPath random_path(std::uint64_t stream, std::size_t n,
                       std::array<double, 2> first, std::array<double, 2> last) {
  PlanarPath p;
  p.vertices.push_back(first);
  for (std::size_t i = 0; i + 2 < n; ++i) {
    const auto b = philox_block(4242, stream, i);
    p.vertices.push_back({4.0 * bits_to_open_unit(b[0], b[1]) - 2.0,
                          4.0 * bits_to_open_unit(b[2], b[3]) - 2.0});
  }
  p.vertices.push_back(last);
  return p;
}

}  // namespace

TEST_SUITE("flux") {

TEST_CASE("resistive action on elementary segments") {
  const PhysParams p(1.0, 1.0);
  // Along the classical diagonal x+ = x- the integrand cancels.
  PlanarPath diag{{{-1.0, -1.0}, {0.5, 0.5}, {2.0, 2.0}}, false};
  CHECK(resistive_action(diag, p) == 0.0);

  PlanarPath horiz{{{0.0, 0.0}, {1.0, 0.0}}, false};
  CHECK(resistive_action(horiz, p) == 0.0);

  PlanarPath vert{{{1.0, 0.0}, {1.0, 1.0}}, false};
  CHECK(resistive_action(vert, p) == -0.5);  // -R/2

  CHECK_THROWS_AS(resistive_action(PlanarPath{{{0.0, 0.0}}, false}, p),
                  DegeneratePathError);
  const double nan = std::nan("");
  CHECK_THROWS_AS(
      resistive_action(PlanarPath{{{0.0, 0.0}, {nan, 1.0}}, false}, p),
      ConfigError);
}

TEST_CASE("unit square gives Sigma = -1 (literal integrand convention)") {
  // Counterclockwise square as upper path P1 + straight return path P2.
  PlanarPath p1{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}, false};
  PlanarPath p2{{{0.0, 0.0}, {0.0, 1.0}}, false};
  CHECK(oriented_area_between(p1, p2) == -1.0);
  CHECK(oriented_area_between(p2, p1) == 1.0);  // orientation reversal

  // Same loop as a closed single path.
  PlanarPath loop{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}, true};
  CHECK(loop_area_literal(loop) == -1.0);

  CHECK(oriented_area_between(p1, p1) == 0.0);

  PlanarPath other{{{0.0, 0.0}, {0.5, 1.0}}, false};
  CHECK_THROWS_AS(oriented_area_between(p1, other), EndpointMismatchError);
}

TEST_CASE("closed-loop action equals R times its literal area") {
  const PhysParams p(1.0, 1.7);
  PlanarPath loop = random_path(1, 7, {0.3, -0.2}, {1.1, 0.4});
  loop.closed = true;
  CHECK(resistive_action(loop, p) ==
        doctest::Approx(p.friction * loop_area_literal(loop)).epsilon(1e-14));
}

TEST_CASE("area additivity over shared endpoints") {
  for (std::size_t trial = 0; trial < 100; ++trial) {
    const std::array<double, 2> a{-1.0, 0.5}, b{2.0, -0.3};
    const PlanarPath p1 = random_path(10 + trial, 5, a, b);
    const PlanarPath p2 = random_path(200 + trial, 6, a, b);
    const PlanarPath p3 = random_path(300 + trial, 4, a, b);
    const double lhs =
        oriented_area_between(p1, p2) + oriented_area_between(p2, p3);
    const double rhs = oriented_area_between(p1, p3);
    CHECK(std::abs(lhs - rhs) <=
          1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)}));
  }
}

TEST_CASE("phase scales quadratically with coordinates") {
  const PhysParams p(1.0, 2.0);
  const PlanarPath p1 = random_path(31, 5, {0.0, 0.0}, {1.0, 1.0});
  const PlanarPath p2 = random_path(32, 5, {0.0, 0.0}, {1.0, 1.0});
  const double base = interference_phase(p1, p2, p);
  const double lam = 1.7;
  auto scale = [lam](PlanarPath q) {
    for (auto& v : q.vertices) {
      v[0] *= lam;
      v[1] *= lam;
    }
    return q;
  };
  CHECK(interference_phase(scale(p1), scale(p2), p) ==
        doctest::Approx(lam * lam * base).epsilon(1e-12));
}

TEST_CASE("magnetic-analogy relabeling") {
  // Replacing the friction coefficient by eB/c reproduces the magnetic-flux
  // phase form: phase = (eB/c) * Sigma / hbar.
  const double eB_over_c = 0.37;
  const PhysParams magnetic(1.0, eB_over_c);
  const PlanarPath p1{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}}, false};
  const PlanarPath p2{{{0.0, 0.0}, {1.0, 1.0}}, false};
  const double sigma = oriented_area_between(p1, p2);
  CHECK(interference_phase(p1, p2, magnetic) ==
        doctest::Approx(eB_over_c * sigma / magnetic.hbar).epsilon(1e-15));
}

TEST_CASE("constructive interference quantization") {
  const PhysParams p(1.0, 1.0);
  for (long long n = -2; n <= 2; ++n) {
    const double sigma = kTwoPi * static_cast<double>(n) * p.hbar / p.friction;
    const QuantizationResult q = constructive_condition(sigma, p);
    CHECK(q.n == n);
    CHECK(q.residual == 0.0);  // exact: 2 pi n is exact for |n| <= 2
  }
  const QuantizationResult zero = constructive_condition(0.0, p);
  CHECK(zero.n == 0);
  CHECK(zero.residual == 0.0);

  // Half-integer tie: phase = pi rounds to even n = 0, residual +pi.
  const QuantizationResult tie = constructive_condition(kPi, p);
  CHECK(tie.n == 0);
  CHECK(tie.residual == doctest::Approx(kPi));
  const QuantizationResult tie3 = constructive_condition(3.0 * kPi, p);
  CHECK(tie3.n == 2);  // 1.5 rounds to even 2
  CHECK(tie3.residual == doctest::Approx(-kPi));

  // Generic residual stays in (-pi, pi).
  const QuantizationResult g = constructive_condition(2.5, p);
  CHECK(g.residual > -kPi);
  CHECK(g.residual < kPi);
  CHECK(g.n * kTwoPi + g.residual == doctest::Approx(2.5));
}

}  // TEST_SUITE
