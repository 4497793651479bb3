#include <doctest.h>

#include <cmath>

#include "qbm/errors.hpp"
#include "qbm/numeric.hpp"
#include "qbm/quadrature.hpp"

using namespace qbm;

TEST_SUITE("quadrature") {

// The Kronrod extension integrates polynomials up to degree 22 exactly on a
// single panel; any error here means wrong tabulated nodes or weights.
TEST_CASE("single-panel polynomial exactness") {
  for (int deg = 0; deg <= 13; ++deg) {
    const auto f = [deg](double x) { return std::pow(x, deg); };
    const QuadResult r = integrate_gk_real(f, 0.0, 1.0, {1e30, 1});
    const double want = 1.0 / (deg + 1);
    CHECK(r.value.real() == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("sin over a period") {
  const QuadResult r =
      integrate_gk_real([](double x) { return std::sin(x); }, 0.0, kPi);
  CHECK(r.value.real() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(r.value.imag()) == 0.0);
}

TEST_CASE("oscillatory integrand needs and gets subdivision") {
  // int_0^10 cos(50 x) dx = sin(500) / 50
  const QuadResult r = integrate_gk_real(
      [](double x) { return std::cos(50.0 * x); }, 0.0, 10.0, {1e-12, 4000});
  CHECK(r.value.real() ==
        doctest::Approx(std::sin(500.0) / 50.0).epsilon(1e-10));
  CHECK(r.intervals > 10);
}

TEST_CASE("complex quadratic-phase integrand") {
  // int_0^1 exp(i a x) dx = (exp(i a) - 1) / (i a)
  const double a = 37.0;
  const QuadResult r = integrate_gk(
      [a](double x) { return std::exp(Complex{0.0, a * x}); }, 0.0, 1.0,
      {1e-13, 2000});
  const Complex want =
      (std::exp(Complex{0.0, a}) - Complex{1.0, 0.0}) / Complex{0.0, a};
  CHECK(std::abs(r.value - want) < 1e-12);
}

TEST_CASE("budget exhaustion throws") {
  CHECK_THROWS_AS(integrate_gk_real([](double x) { return std::cos(500.0 * x); },
                                    0.0, 100.0, {1e-14, 4}),
                  QuadratureFailureError);
}

}  // TEST_SUITE
