#pragma once

#include <array>
#include <vector>

#include "qbm/params.hpp"

namespace qbm {

// Polyline in the (x+, x-) plane. Closed paths store each vertex once; the
// closing segment back to the first vertex is implicit.
struct PlanarPath {
  std::vector<std::array<double, 2>> vertices;
  bool closed = false;

  void validate() const;  // >= 2 vertices, finite coordinates
};

// Resistive action S_R = (R/2) int (x- dx+ - x+ dx-) along the polyline.
// Segment integrals of the bilinear integrand are exact. Includes the
// implicit closing segment when the path is marked closed.
double resistive_action(const PlanarPath& path, const PhysParams& p);

// Signed area Sigma(P1, P2) = (1/2) closed-loop integral of
// (x- dx+ - x+ dx-) around P1 followed by P2 reversed. The integrand is
// taken literally, which makes Sigma the NEGATIVE of the conventional
// counterclockwise shoelace area. Paths must share first and last vertices;
// throws EndpointMismatchError otherwise.
double oriented_area_between(const PlanarPath& p1, const PlanarPath& p2);

// Same loop integral for a single closed path (against the constant path).
double loop_area_literal(const PlanarPath& path);

// Interference phase R * Sigma / hbar between the two paths.
double interference_phase(const PlanarPath& p1, const PlanarPath& p2,
                          const PhysParams& p);

struct QuantizationResult {
  long long n;
  double residual;  // radians, in [-pi, pi]; +-pi only at half-integer ties
};

// Nearest quantization integer for R Sigma = 2 pi n hbar and the leftover
// phase. Half-integer ties round to even n (banker's rounding), so the
// residual at a tie is +-pi.
QuantizationResult constructive_condition(double sigma, const PhysParams& p);

}  // namespace qbm
