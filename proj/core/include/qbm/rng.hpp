#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "qbm/numeric.hpp"

// Counter-based random numbers (Philox4x32-10, Salmon et al. SC'11).
// Every draw is a pure function of (seed, stream, step), which makes parallel
// Monte Carlo runs reproducible: work can be split across threads in any way
// without changing a single bit of output.

namespace qbm {

namespace detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                      std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace detail

inline std::array<std::uint32_t, 4> philox4x32_10(
    std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    detail::mul_hi_lo(detail::kPhiloxM0, ctr[0], hi0, lo0);
    detail::mul_hi_lo(detail::kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += detail::kPhiloxW0;
    key[1] += detail::kPhiloxW1;
  }
  return ctr;
}

// One 128-bit block addressed by (seed, stream, step).
inline std::array<std::uint32_t, 4> philox_block(std::uint64_t seed,
                                                 std::uint64_t stream,
                                                 std::uint64_t step) {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
      static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32)};
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return philox4x32_10(ctr, key);
}

// Open-interval uniform in (0,1): 53 random bits, offset by half an ulp so
// log() and Box-Muller never see 0 or 1.
inline double bits_to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t w = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
}

struct NormalPair {
  double z0;
  double z1;
};

// Two independent standard normals per counter block (Box-Muller).
inline NormalPair gaussian_pair(std::uint64_t seed, std::uint64_t stream,
                                std::uint64_t step) {
  const auto b = philox_block(seed, stream, step);
  const double u1 = bits_to_open_unit(b[0], b[1]);
  const double u2 = bits_to_open_unit(b[2], b[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = kTwoPi * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

inline double gaussian(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t step) {
  return gaussian_pair(seed, stream, step).z0;
}

}  // namespace qbm
