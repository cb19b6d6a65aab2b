#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lifespan/complexes.hpp"
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

PersistenceDiagram diagram(std::vector<Interval> iv) { return PersistenceDiagram(std::move(iv)); }

// Bottleneck by trying every matching of small diagrams, each point either
// matched or sent to the diagonal.
double bottleneck_oracle(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  // Pad both sides with diagonal slots; a slot index >= size means "diagonal".
  const std::size_t n = a.size() + b.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  auto half = [](const Interval& iv) { return (iv.death - iv.birth) / 2; };
  double best = kInfinity;
  do {
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = perm[i];
      const bool ra = i < a.size();
      const bool rb = j < b.size();
      if (ra && rb)
        cost = std::max(cost, std::max(std::abs(a[i].birth - b[j].birth), std::abs(a[i].death - b[j].death)));
      else if (ra)
        cost = std::max(cost, half(a[i]));
      else if (rb)
        cost = std::max(cost, half(b[j]));
    }
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

FiniteMetricSpace random_metric(std::mt19937_64& rng, int n, int dim) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) {
    Point p(dim);
    for (int j = 0; j < dim; ++j) p[j] = u(rng);
    pts.push_back(p);
  }
  return pairwise_distances(PointCloud(pts, Norm::L2));
}

}  // namespace

TEST_CASE("square cycle in Vietoris-Rips") {
  const PointCloud sq({p2(0, 0), p2(1, 0), p2(1, 1), p2(0, 1)}, Norm::L2);
  const FilteredComplex fc = vietoris_rips(pairwise_distances(sq), 2, 10.0);
  const PersistenceDiagram pd = compute_persistence(fc, 1);
  const auto h1 = pd.in_degree(1);
  REQUIRE(h1.size() == 1);
  CHECK(h1[0].birth == doctest::Approx(1.0));
  CHECK(h1[0].death == doctest::Approx(std::sqrt(2.0)));
  // Reduced degree 0: three finite bars of length 1.
  const auto h0 = pd.in_degree(0);
  REQUIRE(h0.size() == 3);
  for (const auto& iv : h0) CHECK(iv.death == doctest::Approx(1.0));
  CHECK(extinction_time(pd) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("circle in Cech") {
  std::vector<Point> pts;
  for (int k = 0; k < 24; ++k) pts.push_back(p2(std::cos(2 * M_PI * k / 24), std::sin(2 * M_PI * k / 24)));
  const PointCloud circle(pts, Norm::L2);
  const PersistenceDiagram pd = compute_persistence(cech(circle, 2), 1);
  const auto h1 = pd.in_degree(1);
  REQUIRE(h1.size() == 1);
  CHECK(h1[0].birth == doctest::Approx(std::sin(M_PI / 24)));
  CHECK(h1[0].death == doctest::Approx(1.0));
}

TEST_CASE("fast reduction agrees with rank brute force") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 15; ++trial) {
    const FiniteMetricSpace ms = random_metric(rng, 7, 3);
    const FilteredComplex fc = vietoris_rips(ms, 3);
    CHECK(compute_persistence(fc, 2) == brute_force_persistence(fc, 2));
  }
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point> pts;
    for (int i = 0; i < 8; ++i) pts.push_back(p2(u(rng), u(rng)));
    const FilteredComplex fc = cech(PointCloud(pts, Norm::L2), 3);
    CHECK(compute_persistence(fc, 2) == brute_force_persistence(fc, 2));
  }
}

TEST_CASE("truncated filtration keeps essential classes") {
  const PointCloud sq({p2(0, 0), p2(1, 0), p2(1, 1), p2(0, 1)}, Norm::L2);
  const FilteredComplex fc = vietoris_rips(pairwise_distances(sq), 2, 1.2);
  const PersistenceDiagram pd = compute_persistence(fc, 1);
  const auto h1 = pd.in_degree(1);
  REQUIRE(h1.size() == 1);
  CHECK(h1[0].essential());
  CHECK_FALSE(pd.warnings().empty());
}

TEST_CASE("bottleneck hand cases") {
  const auto a = diagram({{1, 0.0, 1.0}});
  CHECK(bottleneck_distance(a, diagram({{1, 0.0, 1.2}}), 1) == doctest::Approx(0.2));
  CHECK(bottleneck_distance(a, PersistenceDiagram(), 1) == doctest::Approx(0.5));
  CHECK(bottleneck_distance(a, a, 1) == 0.0);
  CHECK(bottleneck_distance(a, PersistenceDiagram(), 0) == 0.0);
  const auto e = diagram({{1, 0.0, kInfinity}});
  CHECK(bottleneck_distance(e, a, 1) == kInfinity);
  CHECK(bottleneck_distance(e, diagram({{1, 0.3, kInfinity}}), 1) == doctest::Approx(0.3));
}

TEST_CASE("bottleneck agrees with a matching oracle") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto random_diagram = [&](int n) {
    std::vector<Interval> iv;
    for (int i = 0; i < n; ++i) {
      const double b = u(rng);
      iv.push_back({1, b, b + u(rng)});
    }
    return iv;
  };
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = random_diagram(1 + trial % 4);
    const auto b = random_diagram(1 + trial % 3);
    const PersistenceDiagram da(a), db(b);
    CHECK(bottleneck_distance(da, db, 1) == doctest::Approx(bottleneck_oracle(da.in_degree(1), db.in_degree(1))));
  }
}

TEST_CASE("diagram utilities") {
  const auto pd = diagram({{0, 0.0, 1.0}, {1, 0.5, 2.0}, {1, 0.2, kInfinity}, {1, 1.0, 1.0}});
  CHECK(pd.size() == 3);
  CHECK(pd.max_degree() == 1);
  CHECK(extinction_time(pd) == 2.0);
  CHECK(extinction_time(PersistenceDiagram()) == 0.0);
  const auto s = pd.scaled(2.0);
  CHECK(s.in_degree(1)[1].death == 4.0);
  const auto ls = lifespans(pd, 1);
  REQUIRE(ls.size() == 2);
}
