#include "lifespan/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace lifespan {

namespace {

constexpr struct {
  Shape shape;
  std::string_view name;
} kShapeNames[] = {
    {Shape::Circle, "circle"},
    {Shape::Ellipse, "ellipse"},
    {Shape::Ellipsoid, "ellipsoid"},
    {Shape::LinfSphere, "linf_sphere"},
    {Shape::SquareBoundary, "square_boundary"},
    {Shape::Torus, "torus"},
    {Shape::Uniform, "uniform"},
    {Shape::TripodLoops, "tripod_loops"},
    {Shape::EllipsoidWithHandles, "ellipsoid_with_handles"},
    {Shape::TreeMetric, "tree_metric"},
    {Shape::RandomMetric, "random_metric"},
};

Point point2(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

Point point3(double x, double y, double z) {
  Point p(3);
  p << x, y, z;
  return p;
}

std::vector<Point> square_walk(std::size_t n) {
  // Perimeter 8 walked counterclockwise from (-1,-1); corners land on samples when 4 | n.
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = 8.0 * static_cast<double>(i) / static_cast<double>(n);
    if (s < 2.0)
      out.push_back(point2(-1.0 + s, -1.0));
    else if (s < 4.0)
      out.push_back(point2(1.0, -1.0 + (s - 2.0)));
    else if (s < 6.0)
      out.push_back(point2(1.0 - (s - 4.0), 1.0));
    else
      out.push_back(point2(-1.0, 1.0 - (s - 6.0)));
  }
  return out;
}

std::vector<Point> fibonacci_ellipsoid(std::size_t n, double a, double b, double c) {
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    out.push_back(point3(a * r * std::cos(phi), b * r * std::sin(phi), c * z));
  }
  return out;
}

double segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (p - a - t * ab).norm();
}

std::vector<Point> tripod_boundary(std::size_t n, double leg, double eps) {
  const Eigen::Vector2d origin(0.0, 0.0);
  std::vector<Eigen::Vector2d> tips;
  for (int j = 0; j < 3; ++j) {
    const double ang = M_PI / 2.0 + 2.0 * M_PI * j / 3.0;
    tips.emplace_back(leg * std::cos(ang), leg * std::sin(ang));
  }
  auto dist_to_tripod = [&](const Eigen::Vector2d& p) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& t : tips) d = std::min(d, segment_distance(p, origin, t));
    return d;
  };
  const std::size_t dense = 400 * std::max<std::size_t>(n, 8);
  std::vector<Eigen::Vector2d> candidates;
  for (const auto& tip : tips) {
    const Eigen::Vector2d u = tip.normalized();
    const Eigen::Vector2d normal(-u.y(), u.x());
    for (std::size_t i = 0; i <= dense; ++i) {
      const double s = leg * static_cast<double>(i) / static_cast<double>(dense);
      for (double side : {1.0, -1.0}) candidates.push_back(origin + s * u + side * eps * normal);
    }
    for (std::size_t i = 0; i <= dense; ++i) {
      const double ang = -M_PI / 2.0 + M_PI * static_cast<double>(i) / static_cast<double>(dense);
      candidates.push_back(tip + eps * (std::cos(ang) * u + std::sin(ang) * normal));
    }
  }
  std::vector<std::pair<double, Eigen::Vector2d>> kept;
  for (const auto& p : candidates)
    if (dist_to_tripod(p) >= eps - 1e-12) kept.emplace_back(std::atan2(p.y(), p.x()), p);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> arc{0.0};
  for (std::size_t i = 1; i < kept.size(); ++i) arc.push_back(arc.back() + (kept[i].second - kept[i - 1].second).norm());
  const double total = arc.back() + (kept.front().second - kept.back().second).norm();
  std::vector<Point> out;
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(n);
    while (cursor + 1 < arc.size() && arc[cursor + 1] <= target) ++cursor;
    const auto& p = kept[cursor].second;
    if (!out.empty() && out.back()[0] == p.x() && out.back()[1] == p.y()) continue;
    out.push_back(point2(p.x(), p.y()));
  }
  return out;
}

std::vector<Point> ellipsoid_with_handles(std::size_t n, const ShapeParams& p) {
  std::vector<Eigen::Vector2d> centers;
  for (int j = 0; j < p.handles; ++j)
    centers.emplace_back(p.a * (-0.5 + (j + 0.5) / p.handles), 0.0);
  auto in_tube = [&](double x, double y) {
    for (const auto& c : centers)
      if ((Eigen::Vector2d(x, y) - c).squaredNorm() < p.tube * p.tube) return true;
    return false;
  };
  const std::size_t shell_target = n * 3 / 4;
  std::vector<Point> out;
  for (const auto& q : fibonacci_ellipsoid(shell_target, p.a, p.b, p.c))
    if (!in_tube(q[0], q[1])) out.push_back(q);
  const std::size_t wall = n > out.size() ? n - out.size() : 0;
  const std::size_t per_handle = std::max<std::size_t>(wall / std::max(p.handles, 1), 1);
  const auto rings = static_cast<std::size_t>(std::max(2.0, std::sqrt(static_cast<double>(per_handle) / 4.0)));
  const std::size_t around = std::max<std::size_t>(per_handle / rings, 3);
  for (const auto& c : centers)
    for (std::size_t k = 0; k < around; ++k) {
      const double phi = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(around);
      const double x = c.x() + p.tube * std::cos(phi), y = c.y() + p.tube * std::sin(phi);
      const double h = p.c * std::sqrt(std::max(0.0, 1.0 - x * x / (p.a * p.a) - y * y / (p.b * p.b)));
      for (std::size_t r = 0; r < rings; ++r) {
        const double z = -h + 2.0 * h * (static_cast<double>(r) + 0.5) / static_cast<double>(rings);
        out.push_back(point3(x, y, z));
      }
    }
  return out;
}

FiniteMetricSpace tree_metric(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  std::uniform_int_distribution<int> weight(1, 10);
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> parent(0, i - 1);
    const auto p = parent(rng);
    const double w = weight(rng);
    adj[i].emplace_back(p, w);
    adj[p].emplace_back(i, w);
  }
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> stack{s};
    std::vector<char> seen(n, 0);
    seen[s] = 1;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (const auto& [v, w] : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          d(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(v)) = d(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(u)) + w;
          stack.push_back(v);
        }
    }
  }
  return FiniteMetricSpace(std::move(d));
}

}  // namespace

Shape parse_shape(std::string_view name) {
  for (const auto& entry : kShapeNames)
    if (entry.name == name) return entry.shape;
  throw Error("unknown shape '" + std::string(name) + "'");
}

std::string_view to_string(Shape shape) {
  for (const auto& entry : kShapeNames)
    if (entry.shape == shape) return entry.name;
  return "unknown";
}

FiniteMetricSpace Dataset::metric_space() const {
  if (metric) return *metric;
  if (!cloud) throw Error("dataset has neither a cloud nor a metric");
  return pairwise_distances(*cloud);
}

Dataset generate(Shape shape, const ShapeParams& params, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error("generate: n must be positive");
  std::mt19937_64 rng(seed);
  Dataset out;
  out.name = std::string(to_string(shape));
  std::vector<Point> pts;
  Norm norm = Norm::L2;
  switch (shape) {
    case Shape::Circle:
      for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
        pts.push_back(point2(params.radius * std::cos(t), params.radius * std::sin(t)));
      }
      break;
    case Shape::Ellipse:
      for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
        pts.push_back(point2(params.a * std::cos(t), params.b * std::sin(t)));
      }
      break;
    case Shape::Ellipsoid:
      pts = fibonacci_ellipsoid(n, params.a, params.b, params.c);
      break;
    case Shape::LinfSphere:
      pts = square_walk(n);
      norm = Norm::Linf;
      break;
    case Shape::SquareBoundary:
      pts = square_walk(n);
      break;
    case Shape::Torus: {
      std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
      for (std::size_t i = 0; i < n; ++i) {
        const double u = angle(rng), v = angle(rng);
        const double ring = params.a + params.b * std::cos(v);
        pts.push_back(point3(ring * std::cos(u), ring * std::sin(u), params.b * std::sin(v)));
      }
      break;
    }
    case Shape::Uniform: {
      if (params.dim < 1) throw Error("uniform: dim must be positive");
      std::uniform_real_distribution<double> coord(params.lo, params.hi);
      for (std::size_t i = 0; i < n; ++i) {
        Point p(params.dim);
        for (int k = 0; k < params.dim; ++k) p[k] = coord(rng);
        pts.push_back(std::move(p));
      }
      break;
    }
    case Shape::TripodLoops:
      pts = tripod_boundary(n, params.a, params.b);
      break;
    case Shape::EllipsoidWithHandles:
      pts = ellipsoid_with_handles(n, params);
      break;
    case Shape::TreeMetric:
      out.metric = tree_metric(n, rng);
      return out;
    case Shape::RandomMetric: {
      std::uniform_int_distribution<int> coord(0, 20);
      std::set<std::vector<int>> used;
      std::vector<Point> ints;
      while (ints.size() < n) {
        std::vector<int> c{coord(rng), coord(rng), coord(rng)};
        if (!used.insert(c).second) continue;
        ints.push_back(point3(c[0], c[1], c[2]));
      }
      out.metric = pairwise_distances(PointCloud(std::move(ints), Norm::L1));
      return out;
    }
  }
  out.cloud = PointCloud(std::move(pts), norm);
  return out;
}

}  // namespace lifespan
