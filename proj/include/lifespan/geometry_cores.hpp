#pragma once

// Convex-hull geometry (convexity deficiency, medial axes of convex polygons)
// and tight-span geometry (hyperconvexity deficiency).
//
// Hyperconvexity deficiency reduces to a single max-min problem. For f in the
// tight span E(X), ||f - d(x,.)||_inf = f(x), so the distance from f to X is
// min_x f(x). X sits inside E(X) (x -> d(x,.)), so the X-to-E(X) side of the
// Hausdorff distance is 0 and hcdef(X) = max over f in E(X) of min_x f(x).

#include "lifespan/metric_core.hpp"
#include "lifespan/widths.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lifespan {

enum class PolygonKind { Point, Segment, Polygon };

/// Counterclockwise convex polygon. Degenerate hulls keep one vertex (Point)
/// or the two segment endpoints (Segment).
struct Polygon2D {
  std::vector<Eigen::Vector2d> vertices;
  PolygonKind kind = PolygonKind::Polygon;

  /// Convexity, orientation and distinct vertices (throws Error).
  void validate() const;
  bool contains(const Eigen::Vector2d& p, double tol = 1e-12) const;
};

/// Andrew's monotone chain; collinear boundary points are dropped.
Polygon2D convex_hull_2d(std::span<const Point> points);

struct DeficiencyResult {
  double value = 0.0;
  Exactness exactness = Exactness::Exact;
  Point argmax;
  /// For lower estimates: width of the band in which a bound check is
  /// reported inconclusive instead of violated.
  double band = 0.0;
};

struct CdefOptions {
  int restarts = 64;
  std::uint64_t seed = 1;
  /// Relative (to the diameter) band attached to N >= 3 lower estimates.
  double relative_band = 0.02;
};

/// sup over conv(X) of the distance to X (l2). Exact in the plane by
/// enumerating Voronoi vertices inside the hull and Voronoi edges crossing
/// the hull boundary; a multistart lower estimate in higher dimensions.
DeficiencyResult convexity_deficiency(const PointCloud& cloud, const CdefOptions& options = {});

/// Medial axis of a non-degenerate convex polygon by the straight-skeleton
/// wavefront (edges move inward at unit speed). Certificate Tree / Proven.
SimplicialCore medial_axis_core(const Polygon2D& poly);

/// The polygon as a triangle fan, certificate ConvexSet / Proven.
SimplicialCore polygon_core(const Polygon2D& poly);

struct TightSpanResult {
  double value = 0.0;
  Eigen::VectorXd witness;
  Exactness exactness = Exactness::Exact;
};

/// Exact for n <= exact_limit (branch and bound over tight pairs with a
/// linear program per node); a lower bound otherwise, from multistart
/// retraction followed, up to 40 points, by a local search over tight-partner
/// cells and a node-limited branch and bound.
TightSpanResult hyperconvexity_deficiency(const FiniteMetricSpace& ms, int exact_limit = 8, std::uint64_t seed = 1);

/// f*(x) = max over x' of d(x, x') - f(x').
Eigen::VectorXd conjugate(const Eigen::VectorXd& f, const FiniteMetricSpace& ms);

/// f(x) + f(x') >= d(x, x') and f = f* within tol.
bool tight_span_membership(const Eigen::VectorXd& f, const FiniteMetricSpace& ms, double tol = kTolerance);

/// Lifespan cap d_H(X, T) for a convex core T (l2).
double convex_core_lifespan_bound(const PointCloud& cloud, const SimplicialCore& core, double gap = 1e-6);

}  // namespace lifespan
