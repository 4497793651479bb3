#include "qbm/flux.hpp"

#include <cmath>

#include "qbm/errors.hpp"
#include "qbm/numeric.hpp"

namespace qbm {

namespace {

// Exact segment integral of (x- dx+ - x+ dx-) from a to b:
// the trapezoid value, which for a bilinear integrand on a straight segment
// is exact and reduces to a[1]*b[0] - a[0]*b[1].
double segment_integral(const std::array<double, 2>& a,
                        const std::array<double, 2>& b) {
  return a[1] * b[0] - a[0] * b[1];
}

double path_integral(const PlanarPath& path) {
  path.validate();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i)
    acc += segment_integral(path.vertices[i], path.vertices[i + 1]);
  if (path.closed)
    acc += segment_integral(path.vertices.back(), path.vertices.front());
  return acc;
}

}  // namespace

void PlanarPath::validate() const {
  if (vertices.size() < 2) throw DegeneratePathError();
  for (const auto& v : vertices)
    if (!std::isfinite(v[0]) || !std::isfinite(v[1]))
      throw ConfigError("PlanarPath: non-finite vertex coordinate");
}

double resistive_action(const PlanarPath& path, const PhysParams& p) {
  return 0.5 * p.friction * path_integral(path);
}

double oriented_area_between(const PlanarPath& p1, const PlanarPath& p2) {
  p1.validate();
  p2.validate();
  if (p1.vertices.front() != p2.vertices.front() ||
      p1.vertices.back() != p2.vertices.back())
    throw EndpointMismatchError(
        "endpoint mismatch: paths must share first and last vertices");
  return 0.5 * (path_integral(p1) - path_integral(p2));
}

double loop_area_literal(const PlanarPath& path) {
  PlanarPath loop = path;
  loop.closed = true;
  return 0.5 * path_integral(loop);
}

double interference_phase(const PlanarPath& p1, const PlanarPath& p2,
                          const PhysParams& p) {
  return p.friction * oriented_area_between(p1, p2) / p.hbar;
}

QuantizationResult constructive_condition(double sigma, const PhysParams& p) {
  const double phase = p.friction * sigma / p.hbar;
  // nearbyint under the default rounding mode rounds half to even.
  const double n = std::nearbyint(phase / kTwoPi);
  return {static_cast<long long>(n), phase - kTwoPi * n};
}

}  // namespace qbm
