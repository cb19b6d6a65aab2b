#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lifespan/harness.hpp"

#include <cmath>
#include <sstream>

using namespace lifespan;

namespace {

Dataset make(Shape shape, std::size_t n, ShapeParams params = {}) { return generate(shape, params, n, 1); }

}  // namespace

TEST_CASE("generators") {
  ShapeParams p;
  p.radius = 2.0;
  const Dataset c = make(Shape::Circle, 50, p);
  REQUIRE(c.cloud);
  for (const auto& x : c.cloud->points()) CHECK(std::abs(x.norm() - 2.0) < 1e-12);

  const Dataset s = make(Shape::LinfSphere, 40);
  CHECK(s.cloud->norm() == Norm::Linf);
  for (const auto& x : s.cloud->points()) CHECK(x.cwiseAbs().maxCoeff() == doctest::Approx(1.0));

  p.a = 2.0;
  p.b = 1.0;
  const Dataset e = make(Shape::Ellipse, 60, p);
  for (const auto& x : e.cloud->points()) CHECK(x[0] * x[0] / 4 + x[1] * x[1] == doctest::Approx(1.0));

  p.a = 1.0;
  p.b = 0.15;
  const Dataset t = make(Shape::TripodLoops, 90, p);
  CHECK(t.cloud->size() == 90);

  const Dataset tree = make(Shape::TreeMetric, 12);
  REQUIRE(tree.metric);
  CHECK(tree.metric->size() == 12);

  // Same seed, same data.
  p = {};
  p.dim = 3;
  const Dataset u1 = generate(Shape::Uniform, p, 20, 9), u2 = generate(Shape::Uniform, p, 20, 9);
  for (std::size_t i = 0; i < 20; ++i) CHECK((*u1.cloud)[i] == (*u2.cloud)[i]);
  CHECK(parse_shape(to_string(Shape::EllipsoidWithHandles)) == Shape::EllipsoidWithHandles);
}

TEST_CASE("check statuses") {
  CHECK(make_check(Theorem::T1, 1, nullptr, 1.0, 1.0, Exactness::Exact).status == CheckStatus::Satisfied);
  CHECK(make_check(Theorem::T1, 1, nullptr, 1.0, 0.9, Exactness::Exact).status == CheckStatus::Violated);
  CHECK(make_check(Theorem::T1, 1, nullptr, 1.0, 0.95, Exactness::Heuristic, 0.1).status ==
        CheckStatus::Inconclusive);
  CHECK(make_check(Theorem::T1, 1, nullptr, 1.0, 0.8, Exactness::Heuristic, 0.1).status == CheckStatus::Violated);
  CHECK(make_check(Theorem::T1, 1, nullptr, 1.0 + 1e-7, 1.0, Exactness::Exact).status == CheckStatus::Satisfied);
}

TEST_CASE("theorem lists") {
  const auto s = parse_theorem_list("T1,T4,T9");
  CHECK(s.size() == 3);
  CHECK(s.count(Theorem::T4) == 1);
  CHECK_THROWS_AS(parse_theorem_list("T1,T12"), Error);
  CHECK(parse_theorem(to_string(Theorem::UrysohnSandwich)) == Theorem::UrysohnSandwich);
}

TEST_CASE("circle bounds hold") {
  VerifyConfig config;
  config.checks = {Theorem::T1, Theorem::T4, Theorem::T9};
  const ExperimentReport r = verify_bounds(make(Shape::Circle, 60), config);
  CHECK_FALSE(r.has_certified_violation());
  CHECK_FALSE(r.checks.empty());
  for (const auto& c : r.checks) CHECK(c.status == CheckStatus::Satisfied);
  for (const auto& s : r.summary()) CHECK(s.rows > 0);
}

TEST_CASE("corrupted diagrams are caught") {
  VerifyConfig config;
  config.checks = {Theorem::T1, Theorem::T9};
  config.inject_corruption = true;
  const ExperimentReport r = verify_bounds(make(Shape::Circle, 60), config);
  CHECK(r.has_certified_violation());
}

TEST_CASE("inapplicable checks are rejected") {
  VerifyConfig config;
  config.checks = {Theorem::T1};
  CHECK_THROWS_AS(verify_bounds(make(Shape::TreeMetric, 10), config), Error);
}

TEST_CASE("reports are deterministic apart from timing") {
  VerifyConfig config;
  const Dataset d = make(Shape::Uniform, 12);
  Json a = verify_bounds(d, config).to_json();
  Json b = verify_bounds(d, config).to_json();
  a.erase("run");
  b.erase("run");
  CHECK(a.dump() == b.dump());
  CHECK_FALSE(verify_bounds(d, config).to_csv().empty());
}

TEST_CASE("PCA comparison") {
  ShapeParams p;
  p.a = 2.0;
  p.b = 1.0;
  const PcaTable t = pca_comparison({make(Shape::Ellipse, 40, p), make(Shape::Circle, 40)}, 1);
  CHECK(t.rows.size() == 4);
  for (const auto& r : t.rows) CHECK(r.kw <= r.pca_residual + 1e-9);
  CHECK(t.to_csv().find("# corr") != std::string::npos);
}

TEST_CASE("input and output round trips") {
  const Dataset d = make(Shape::Uniform, 10);
  std::stringstream cloud_text;
  write_cloud(cloud_text, *d.cloud);
  const PointCloud back = read_cloud(cloud_text);
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i] == (*d.cloud)[i]);

  std::stringstream metric_text;
  write_distance_matrix(metric_text, d.metric_space());
  const FiniteMetricSpace m = read_distance_matrix(metric_text);
  CHECK(m(2, 5) == d.metric_space()(2, 5));

  const PersistenceDiagram pd({{0, 0.0, 1.5}, {1, 0.25, 2.0}, {1, 0.5, kInfinity}});
  CHECK(diagram_from_json(diagram_to_json(pd)) == pd);
  CHECK(diagram_to_csv(pd).rfind("degree,birth,death", 0) == 0);

  SimplicialCore core;
  Point a(2), b(2);
  a << 0, 0;
  b << 1, 0.5;
  core.vertices = {a, b};
  core.cells = {{0}, {1}, {0, 1}};
  core.certificate = CoreCertificate::Tree;
  core.status = CertificateStatus::Proven;
  std::stringstream core_text;
  write_core(core_text, core);
  const SimplicialCore c2 = read_core(core_text);
  CHECK(c2.vertices == core.vertices);
  CHECK(c2.cells == core.cells);
  CHECK(c2.certificate == core.certificate);
  CHECK(format_number(0.1) == "0.1");
}

TEST_CASE("parallel loop covers every index") {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK(thread_budget() >= 1);
}
