#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lifespan/metric_core.hpp"

#include <cmath>
#include <random>

using namespace lifespan;

namespace {

Point p2(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

// Grid search over candidate centers; an independent upper estimate of the
// enclosing radius accurate to about one grid step.
double grid_enclosing_radius(const std::vector<Point>& pts, Norm norm, double lo, double hi, int steps) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j) {
      const Point c = p2(lo + (hi - lo) * i / steps, lo + (hi - lo) * j / steps);
      double r = 0.0;
      for (const auto& p : pts) r = std::max(r, distance(p, c, norm));
      best = std::min(best, r);
    }
  return best;
}

}  // namespace

TEST_CASE("norms") {
  const Point a = p2(0, 0), b = p2(3, -4);
  CHECK(distance(a, b, Norm::L2) == doctest::Approx(5.0));
  CHECK(distance(a, b, Norm::L1) == doctest::Approx(7.0));
  CHECK(distance(a, b, Norm::Linf) == doctest::Approx(4.0));
  CHECK(parse_norm("linf") == Norm::Linf);
  CHECK_THROWS_AS(parse_norm("l3"), Error);
}

TEST_CASE("point cloud validation") {
  CHECK_THROWS_AS(PointCloud({}, Norm::L2), Error);
  Point bad(2);
  bad << 0.0, std::nan("");
  CHECK_THROWS_AS(PointCloud({bad}, Norm::L2), Error);
  CHECK_THROWS_AS(PointCloud({p2(0, 0), Point::Zero(3)}, Norm::L2), Error);
  CHECK_THROWS_AS(check_distinct(PointCloud({p2(1, 1), p2(0, 0), p2(1, 1)}, Norm::L2)), Error);
}

TEST_CASE("metric validation") {
  Eigen::MatrixXd asym(2, 2);
  asym << 0, 1, 2, 0;
  CHECK_THROWS_AS(FiniteMetricSpace{asym}, Error);
  Eigen::MatrixXd triangle(3, 3);
  triangle << 0, 1, 5, 1, 0, 1, 5, 1, 0;
  CHECK_THROWS_AS(FiniteMetricSpace{triangle}, Error);
}

TEST_CASE("diameter and radius of a path metric") {
  Eigen::MatrixXd d(3, 3);
  d << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  const FiniteMetricSpace ms(d);
  CHECK(diameter(ms) == 2.0);
  CHECK(radius(ms) == 1.0);
  CHECK(radius_center(ms) == 1);
}

TEST_CASE("enclosing balls: closed forms") {
  // Equilateral triangle inscribed in the unit circle.
  std::vector<Point> tri;
  for (int k = 0; k < 3; ++k) tri.push_back(p2(std::cos(2 * M_PI * k / 3), std::sin(2 * M_PI * k / 3)));
  CHECK(min_enclosing_ball(tri, Norm::L2).radius == doctest::Approx(1.0).epsilon(1e-12));
  // Obtuse triangle: half the longest side.
  std::vector<Point> obtuse{p2(-1, 0), p2(1, 0), p2(0, 0.2)};
  const Ball b = min_enclosing_ball(obtuse, Norm::L2);
  CHECK(b.radius == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.center.norm() < 1e-12);
  // linf: half the widest coordinate extent.
  std::vector<Point> box{p2(0, 0), p2(4, 1), p2(2, -1)};
  CHECK(min_enclosing_ball(box, Norm::Linf).radius == doctest::Approx(2.0));
  CHECK_THROWS_AS(min_enclosing_ball(box, Norm::L1), Error);
}

TEST_CASE("enclosing balls agree with a grid oracle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point> pts;
    for (int i = 0; i < 7; ++i) pts.push_back(p2(u(rng), u(rng)));
    for (Norm norm : {Norm::L2, Norm::Linf}) {
      const Ball b = min_enclosing_ball(pts, norm);
      const double h = 2.0 / 400;
      const double grid = grid_enclosing_radius(pts, norm, -1.0, 1.0, 400);
      CHECK(b.radius <= grid + 1e-12);
      CHECK(grid - b.radius <= h);
      for (const auto& p : pts) CHECK(distance(p, b.center, norm) <= b.radius + 1e-12);
    }
  }
}

TEST_CASE("hausdorff distance") {
  const PointCloud a({p2(0, 0), p2(1, 0)}, Norm::L2);
  const PointCloud b({p2(0, 0), p2(1, 0), p2(1, 3)}, Norm::L2);
  CHECK(hausdorff_distance(a, b) == doctest::Approx(3.0));
  CHECK(directed_hausdorff(a.points(), b.points(), Norm::L2) == 0.0);
}

TEST_CASE("kuratowski embedding is isometric") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  for (int i = 0; i < 9; ++i) pts.push_back(p2(u(rng), u(rng)));
  const FiniteMetricSpace ms = pairwise_distances(PointCloud(pts, Norm::L1));
  const PointCloud emb = kuratowski_embed(ms);
  CHECK(emb.norm() == Norm::Linf);
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = 0; j < ms.size(); ++j)
      CHECK(distance(emb[i], emb[j], Norm::Linf) == doctest::Approx(ms(i, j)).epsilon(1e-14));
}

TEST_CASE("subspaces and subsets") {
  const PointCloud c({p2(0, 0), p2(1, 0), p2(0, 2)}, Norm::L2);
  const std::vector<std::size_t> idx{2, 0};
  const PointCloud s = c.subset(idx);
  CHECK(s.size() == 2);
  CHECK(s[0] == c[2]);
  const FiniteMetricSpace ms = pairwise_distances(c).subspace(idx);
  CHECK(ms(0, 1) == doctest::Approx(2.0));
}
