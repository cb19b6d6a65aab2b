#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lifespan/geometry_cores.hpp"
#include "lifespan/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace lifespan;

namespace {

Point p2(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

PointCloud random_cloud(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back(p2(u(rng), u(rng)));
  return PointCloud(pts, Norm::L2);
}

PointCloud square_boundary(int per_side) {
  std::vector<Point> pts;
  for (int s = 0; s < 4 * per_side; ++s) {
    const double t = 8.0 * s / (4 * per_side);
    if (t < 2)
      pts.push_back(p2(-1 + t, -1));
    else if (t < 4)
      pts.push_back(p2(1, -1 + (t - 2)));
    else if (t < 6)
      pts.push_back(p2(1 - (t - 4), 1));
    else
      pts.push_back(p2(-1, 1 - (t - 6)));
  }
  return PointCloud(pts, Norm::L2);
}

// Largest distance to the cloud over grid points inside the hull.
double cdef_grid(const PointCloud& cloud, int steps, double& h) {
  const Polygon2D hull = convex_hull_2d(cloud.points());
  double lo_x = kInfinity, hi_x = -kInfinity, lo_y = kInfinity, hi_y = -kInfinity;
  for (const auto& v : hull.vertices) {
    lo_x = std::min(lo_x, v.x());
    hi_x = std::max(hi_x, v.x());
    lo_y = std::min(lo_y, v.y());
    hi_y = std::max(hi_y, v.y());
  }
  h = std::hypot(hi_x - lo_x, hi_y - lo_y) / steps;
  double best = 0.0;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j) {
      const Eigen::Vector2d q(lo_x + (hi_x - lo_x) * i / steps, lo_y + (hi_y - lo_y) * j / steps);
      if (!hull.contains(q, 1e-12)) continue;
      double near = kInfinity;
      for (std::size_t k = 0; k < cloud.size(); ++k) near = std::min(near, (cloud[k] - Point(q)).norm());
      best = std::max(best, near);
    }
  return best;
}

FiniteMetricSpace metric(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd d(rows.size(), rows.size());
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (double v : r) d(i, j++) = v;
    ++i;
  }
  return FiniteMetricSpace(d);
}

// max over near-tight functions on a grid of min_x f(x), four points. The
// last coordinate is the least value keeping f admissible against the others.
double hcdef_grid(const FiniteMetricSpace& ms, double h) {
  const double top = [&] {
    double m = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) m = std::max(m, ms(i, j));
    return m;
  }();
  const int steps = static_cast<int>(std::ceil(top / h));
  double best = 0.0;
  Eigen::VectorXd f(4);
  for (int a = 0; a <= steps; ++a)
    for (int b = 0; b <= steps; ++b)
      for (int c = 0; c <= steps; ++c) {
        f << a * h, b * h, c * h, 0.0;
        double last = 0.0;
        for (int y = 0; y < 3; ++y) last = std::max(last, ms(3, y) - f[y]);
        f[3] = last;
        if ((f - conjugate(f, ms)).cwiseAbs().maxCoeff() > 2 * h) continue;
        best = std::max(best, f.minCoeff());
      }
  return best;
}

}  // namespace

TEST_CASE("convex hull") {
  const std::vector<Point> pts{p2(0, 0), p2(2, 0), p2(1, 0), p2(2, 2), p2(0, 2), p2(1, 1)};
  const Polygon2D hull = convex_hull_2d(pts);
  hull.validate();
  CHECK(hull.kind == PolygonKind::Polygon);
  CHECK(hull.vertices.size() == 4);
  CHECK(hull.contains(Eigen::Vector2d(1, 1)));
  CHECK_FALSE(hull.contains(Eigen::Vector2d(3, 1)));
  CHECK(convex_hull_2d(std::vector<Point>{p2(0, 0), p2(1, 1), p2(2, 2)}).kind == PolygonKind::Segment);
  CHECK(convex_hull_2d(std::vector<Point>{p2(1, 1)}).kind == PolygonKind::Point);
}

TEST_CASE("planar convexity deficiency matches a grid") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const PointCloud cloud = random_cloud(rng, 12);
    const DeficiencyResult r = convexity_deficiency(cloud);
    CHECK(r.exactness == Exactness::Exact);
    double h = 0.0;
    const double grid = cdef_grid(cloud, 200, h);
    CHECK(grid <= r.value + 1e-9);
    CHECK(r.value - grid <= h);
  }
}

TEST_CASE("convexity deficiency of a circle") {
  std::vector<Point> pts;
  for (int k = 0; k < 120; ++k) pts.push_back(p2(std::cos(2 * M_PI * k / 120), std::sin(2 * M_PI * k / 120)));
  const DeficiencyResult r = convexity_deficiency(PointCloud(pts, Norm::L2));
  CHECK(r.value >= 0.97);
  CHECK(r.value <= 1.0 + 1e-9);
  CHECK(r.argmax.norm() < 1e-9);
}

TEST_CASE("medial axis of a square and a rectangle") {
  const PointCloud sq = square_boundary(50);
  const Polygon2D hull = convex_hull_2d(sq.points());
  const SimplicialCore axis = medial_axis_core(hull);
  axis.validate();
  CHECK(axis.certificate == CoreCertificate::Tree);
  CHECK(axis.status == CertificateStatus::Proven);
  CHECK(core_hausdorff(sq, axis) == doctest::Approx(1.0).epsilon(1e-6));

  const std::vector<Point> rect{p2(0, 0), p2(4, 0), p2(4, 2), p2(0, 2)};
  const Polygon2D r = convex_hull_2d(rect);
  const SimplicialCore ra = medial_axis_core(r);
  ra.validate();
  // Every skeleton vertex is equidistant from its nearest sides.
  for (const auto& v : ra.vertices) {
    std::vector<double> d{v[0], 4 - v[0], v[1], 2 - v[1]};
    std::sort(d.begin(), d.end());
    CHECK(d[1] - d[0] < 1e-9);
  }
  // The spine is the segment from (1,1) to (3,1).
  bool found = false;
  for (const auto& v : ra.vertices) found |= (v - p2(1, 1)).norm() < 1e-9 || (v - p2(3, 1)).norm() < 1e-9;
  CHECK(found);
}

TEST_CASE("polygon core") {
  const Polygon2D hull = convex_hull_2d(square_boundary(10).points());
  const SimplicialCore core = polygon_core(hull);
  core.validate();
  CHECK(core.certificate == CoreCertificate::ConvexSet);
  CHECK(convex_core_lifespan_bound(square_boundary(10), core) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("hyperconvexity deficiency: closed forms") {
  const auto equilateral = metric({{0, 2, 2}, {2, 0, 2}, {2, 2, 0}});
  const TightSpanResult e = hyperconvexity_deficiency(equilateral);
  CHECK(e.exactness == Exactness::Exact);
  CHECK(e.value == doctest::Approx(1.0));
  CHECK(e.witness.isApprox(Eigen::VectorXd::Constant(3, 1.0)));

  // Star with unit edges: hub and three leaves at mutual distance 2.
  const auto star = metric({{0, 1, 1, 1}, {1, 0, 2, 2}, {1, 2, 0, 2}, {1, 2, 2, 0}});
  CHECK(hyperconvexity_deficiency(star).value == doctest::Approx(0.5));

  // Unit square under l1: the tight span is the square itself.
  const auto cycle = metric({{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 1, 0, 1}, {1, 2, 1, 0}});
  CHECK(hyperconvexity_deficiency(cycle).value == doctest::Approx(1.0));
}

TEST_CASE("hyperconvexity deficiency matches a grid on four points") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<Point> pts;
    for (int i = 0; i < 4; ++i) pts.push_back(p2(u(rng), u(rng)));
    const FiniteMetricSpace ms = pairwise_distances(PointCloud(pts, Norm::L2));
    const TightSpanResult r = hyperconvexity_deficiency(ms);
    CHECK(tight_span_membership(r.witness, ms));
    CHECK(r.witness.minCoeff() == doctest::Approx(r.value));
    CHECK(std::abs(r.value - hcdef_grid(ms, 0.01)) <= 0.03);
  }
}

TEST_CASE("hyperconvexity deficiency is at most the radius") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const FiniteMetricSpace ms = pairwise_distances(random_cloud(rng, 7));
    const TightSpanResult r = hyperconvexity_deficiency(ms);
    CHECK(r.value <= radius(ms) + 1e-9);
    CHECK(tight_span_membership(r.witness, ms));
    // The large-n search is a lower estimate.
    const TightSpanResult h = hyperconvexity_deficiency(ms, 3);
    CHECK(h.exactness == Exactness::Heuristic);
    CHECK(h.value <= r.value + 1e-9);
    CHECK(tight_span_membership(h.witness, ms));
  }
}

TEST_CASE("conjugate and membership") {
  const auto ms = metric({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  Eigen::VectorXd f(3);
  f << 1, 0, 1;
  CHECK(tight_span_membership(f, ms));
  f << 2, 1, 2;
  CHECK_FALSE(tight_span_membership(f, ms));
  CHECK(conjugate(f, ms).isApprox(Eigen::Vector3d(0, -1, 0)));
}
