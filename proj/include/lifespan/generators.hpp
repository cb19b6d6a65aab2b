#pragma once

// Deterministic synthetic datasets.

#include "lifespan/metric_core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lifespan {

enum class Shape {
  Circle,               // radius `radius`, equally spaced
  Ellipse,              // semi-axes a, b, equally spaced parameter
  Ellipsoid,            // semi-axes a, b, c, Fibonacci lattice
  LinfSphere,           // boundary of [-1,1]^2, perimeter walk from a corner, linf norm
  SquareBoundary,       // same points, l2 norm
  Torus,                // radii a (major), b (minor) in R^3
  Uniform,              // uniform in [lo, hi]^dim
  TripodLoops,          // boundary of the radius-b neighborhood of a tripod with legs of length a
  EllipsoidWithHandles, // ellipsoid (a, b, c) with `handles` vertical tubes of radius `tube`
  TreeMetric,           // random weighted tree, integer weights in [1, 10]
  RandomMetric,         // integer points of [0, 20]^3 under l1
};

Shape parse_shape(std::string_view name);
std::string_view to_string(Shape shape);

struct ShapeParams {
  double radius = 1.0;
  double a = 2.0;
  double b = 1.0;
  double c = 1.0;
  int dim = 2;
  double lo = 0.0;
  double hi = 1.0;
  int handles = 1;
  double tube = 0.3;
};

struct Dataset {
  std::string name;
  std::optional<PointCloud> cloud;
  std::optional<FiniteMetricSpace> metric;

  /// The metric of the cloud when no explicit one is stored.
  FiniteMetricSpace metric_space() const;
};

Dataset generate(Shape shape, const ShapeParams& params, std::size_t n, std::uint64_t seed);

}  // namespace lifespan
