#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lifespan/complexes.hpp"

#include <cmath>
#include <random>

using namespace lifespan;

namespace {

Point p2(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

PointCloud unit_square() { return PointCloud({p2(0, 0), p2(1, 0), p2(1, 1), p2(0, 1)}, Norm::L2); }

std::size_t count_dim(const FilteredComplex& fc, int d) {
  std::size_t n = 0;
  for (const auto& s : fc.simplices()) n += s.dim() == d;
  return n;
}

PointCloud random_cloud(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back(p2(u(rng), u(rng)));
  return PointCloud(pts, Norm::L2);
}

}  // namespace

TEST_CASE("Vietoris-Rips of the unit square") {
  const auto ms = pairwise_distances(unit_square());
  const FilteredComplex fc = vietoris_rips(ms, 2, 10.0);
  fc.validate();
  CHECK(fc.size() == 4 + 6 + 4);
  CHECK(fc.flavor() == ComplexFlavor::VietorisRips);
  const Vertex side[] = {0, 1};
  const Vertex diag[] = {0, 2};
  const Vertex tri[] = {0, 1, 2};
  CHECK(fc[*fc.find(side)].value == doctest::Approx(1.0));
  CHECK(fc[*fc.find(diag)].value == doctest::Approx(std::sqrt(2.0)));
  CHECK(fc[*fc.find(tri)].value == doctest::Approx(std::sqrt(2.0)));
  // The cap keeps only the sides.
  const FilteredComplex capped = vietoris_rips(ms, 2, 1.2);
  CHECK(count_dim(capped, 1) == 4);
  CHECK(count_dim(capped, 2) == 0);
}

TEST_CASE("Cech values are enclosing radii") {
  const FilteredComplex fc = cech(unit_square(), 2, 10.0);
  fc.validate();
  const Vertex side[] = {0, 1};
  const Vertex tri[] = {0, 1, 2};
  CHECK(fc[*fc.find(side)].value == doctest::Approx(0.5));
  CHECK(fc[*fc.find(tri)].value == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK_THROWS_AS(cech(unit_square().with_norm(Norm::L1), 2), Error);
}

TEST_CASE("default caps reach a cone") {
  const auto sq = unit_square();
  const FilteredComplex c = cech(sq, 3);
  CHECK(c.max_value() >= std::sqrt(2.0) / 2);
  CHECK(count_dim(c, 3) == 1);
  const FilteredComplex v = vietoris_rips(pairwise_distances(sq), 3);
  CHECK(v.max_value() >= std::sqrt(2.0));
  CHECK(count_dim(v, 3) == 1);
}

TEST_CASE("filtration order and lookups") {
  std::mt19937_64 rng(11);
  const PointCloud cloud = random_cloud(rng, 12);
  const FilteredComplex fc = cech(cloud, 3);
  fc.validate();
  for (std::size_t i = 1; i < fc.size(); ++i) {
    const auto& a = fc[i - 1];
    const auto& b = fc[i];
    CHECK((a.value < b.value || (a.value == b.value && a.dim() <= b.dim())));
  }
  for (std::size_t i = 0; i < fc.size(); ++i) CHECK(*fc.find(fc[i].vertices) == i);
}

TEST_CASE("custom filtrations and validation") {
  // Values from the vertex count only: a monotone function.
  const FilteredComplex fc =
      build_filtration(4, 2, 10.0, [](std::span<const Vertex> s) { return static_cast<double>(s.size() - 1); });
  CHECK(fc.size() == 4 + 6 + 4);
  CHECK(fc.flavor() == ComplexFlavor::Custom);
  // Faces must exist and values must be monotone.
  std::vector<Simplex> broken{{{0}, 0.0}, {{0, 1}, 1.0}};
  CHECK_THROWS_AS(FilteredComplex(broken, 2, 1, 1.0, ComplexFlavor::Custom).validate(), Error);
  std::vector<Simplex> decreasing{{{0}, 0.0}, {{1}, 2.0}, {{0, 1}, 1.0}};
  CHECK_THROWS_AS(FilteredComplex(decreasing, 2, 1, 2.0, ComplexFlavor::Custom).validate(), Error);
}

TEST_CASE("dump format") {
  const FilteredComplex fc = vietoris_rips(pairwise_distances(unit_square()), 1, 1.0);
  const std::string text = fc.dump();
  CHECK(text.rfind("0;0\n", 0) == 0);
  CHECK(text.find("1;0,1\n") != std::string::npos);
}

TEST_CASE("Cech and Rips interleave") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const PointCloud cloud = random_cloud(rng, 10);
    const FilteredComplex c = cech(cloud, 2, 2.0);
    const FilteredComplex v = vietoris_rips(pairwise_distances(cloud), 2, 4.0);
    const double scales[] = {0.05, 0.1, 0.2, 0.4, 0.8};
    CHECK(validate_interleaving(v, c, scales));
  }
}
