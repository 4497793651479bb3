#include "qbm/fft.hpp"

#include <stdexcept>

namespace qbm {

Fft::Fft(std::size_t n) : n_(n) {
  if (!is_pow2(n)) throw std::invalid_argument("Fft: size must be a power of 2");
  bitrev_.resize(n);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    bitrev_[i] = r;
  }
  // Twiddles for each butterfly stage, laid out stage by stage.
  twiddle_fwd_.reserve(n);
  twiddle_inv_.reserve(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -kTwoPi / static_cast<double>(len);
    for (std::size_t k = 0; k < len / 2; ++k) {
      const double a = ang * static_cast<double>(k);
      twiddle_fwd_.emplace_back(std::cos(a), std::sin(a));
      twiddle_inv_.emplace_back(std::cos(a), -std::sin(a));
    }
  }
}

void Fft::transform(Complex* data, bool inverse) const {
  const std::size_t n = n_;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = bitrev_[i];
    if (j > i) std::swap(data[i], data[j]);
  }
  const std::vector<Complex>& tw = inverse ? twiddle_inv_ : twiddle_fwd_;
  std::size_t tw_base = 0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex w = tw[tw_base + k];
        Complex& a = data[start + k];
        Complex& b = data[start + k + half];
        const Complex t = w * b;
        b = a - t;
        a += t;
      }
    }
    tw_base += half;
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) data[i] *= scale;
  }
}

std::vector<double> Fft::wavenumbers(std::size_t n, double period) {
  std::vector<double> k(n);
  const double dk = kTwoPi / period;
  for (std::size_t j = 0; j < n; ++j) {
    const auto sj = static_cast<std::ptrdiff_t>(j);
    const auto sn = static_cast<std::ptrdiff_t>(n);
    k[j] = dk * static_cast<double>(sj < sn / 2 ? sj : sj - sn);
  }
  return k;
}

}  // namespace qbm
