#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace qbm {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// sin(z)/z with the removable singularity filled in. sin(z)/z is relatively
// accurate for small z, so only z == 0 needs the branch.
inline double sinc(double z) { return z == 0.0 ? 1.0 : std::sin(z) / z; }

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Pairwise (cascade) summation: order-insensitive reductions use this so a
// fixed input ordering gives a fixed result independent of chunking.
template <typename T>
T pairwise_sum(std::span<const T> v) {
  const std::size_t n = v.size();
  if (n == 0) return T{};
  if (n <= 8) {
    T s = v[0];
    for (std::size_t i = 1; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(std::span<const T>(v));
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> xs(n);
  if (n == 1) {
    xs[0] = a;
    return xs;
  }
  const double step = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) xs[i] = a + step * static_cast<double>(i);
  return xs;
}

}  // namespace qbm
