#pragma once

#include <cstddef>
#include <vector>

#include "qbm/numeric.hpp"

namespace qbm {

// Power-of-two complex FFT with precomputed twiddles. A plan is immutable
// after construction; transform() on distinct buffers is safe from many
// threads at once, which is what the evolver's line-parallel derivative
// sweeps rely on.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }

  void forward(Complex* data) const { transform(data, false); }
  void inverse(Complex* data) const { transform(data, true); }  // scales by 1/n

  // Angular wavenumber for bin j on a periodic domain of length `period`
  // (standard ordering: 0..n/2-1 positive, then negative).
  static std::vector<double> wavenumbers(std::size_t n, double period);

 private:
  void transform(Complex* data, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<Complex> twiddle_fwd_;
  std::vector<Complex> twiddle_inv_;
};

}  // namespace qbm
