#pragma once

#include <cstddef>
#include <vector>

#include "qbm/errors.hpp"
#include "qbm/numeric.hpp"

namespace qbm {

// Uniform cell-centered axis over [min, max): n cells, node j at the center
// of cell j. Cell-centered sampling doubles as the periodic grid for the
// evolver (period max - min, no duplicated endpoint).
struct GridAxis {
  double min;
  double max;
  std::size_t n;

  double spacing() const { return (max - min) / static_cast<double>(n); }
  double node(std::size_t j) const {
    return min + (static_cast<double>(j) + 0.5) * spacing();
  }
  double length() const { return max - min; }
  std::vector<double> nodes() const {
    std::vector<double> xs(n);
    for (std::size_t j = 0; j < n; ++j) xs[j] = node(j);
    return xs;
  }
  bool operator==(const GridAxis&) const = default;
};

// rho(x_plus, x_minus) sampled on axis x axis, row-major with x_plus as the
// row index.
struct DensityMatrixGrid {
  GridAxis axis;
  std::vector<Complex> values;

  DensityMatrixGrid() : axis{0.0, 1.0, 0} {}
  explicit DensityMatrixGrid(const GridAxis& ax)
      : axis(ax), values(ax.n * ax.n, Complex{0.0, 0.0}) {}

  std::size_t size() const { return axis.n; }
  Complex& at(std::size_t i, std::size_t j) { return values[i * axis.n + j]; }
  const Complex& at(std::size_t i, std::size_t j) const {
    return values[i * axis.n + j];
  }

  double max_abs() const;

  // max |rho(i,j) - conj(rho(j,i))| normalized by max |rho|.
  double hermiticity_residual() const;

  // Fraction of |rho|^2 mass within `band` of the domain boundary (either
  // argument). Used to monitor periodic wrap-around contamination.
  double boundary_mass_fraction(double band_fraction = 0.05) const;
};

}  // namespace qbm
