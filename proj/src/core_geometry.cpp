#include "lifespan/detail/core_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace lifespan::detail {

namespace {

Point closest_on_segment(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return a;
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

// Region-based closest point on a triangle; only dot products are used, so
// the ambient dimension is arbitrary.
Point closest_on_triangle(const Point& p, const Point& a, const Point& b, const Point& c) {
  const Point ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Point bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
  const Point cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  const double denom = va + vb + vc;
  if (!(std::abs(denom) > 0.0)) {
    // Degenerate triangle: best of the three edges.
    Point best = closest_on_segment(p, a, b);
    for (const Point& q : {closest_on_segment(p, b, c), closest_on_segment(p, a, c)})
      if ((p - q).squaredNorm() < (p - best).squaredNorm()) best = q;
    return best;
  }
  const double v = vb / denom, w = vc / denom;
  return a + v * ab + w * ac;
}

}  // namespace

Point closest_point_on_simplex(const Point& p, std::span<const Point> simplex) {
  switch (simplex.size()) {
    case 1: return simplex[0];
    case 2: return closest_on_segment(p, simplex[0], simplex[1]);
    case 3: return closest_on_triangle(p, simplex[0], simplex[1], simplex[2]);
    default: throw Error("core cells of dimension above 2 are not supported");
  }
}

double distance_to_simplex(const Point& p, std::span<const Point> simplex) {
  return (p - closest_point_on_simplex(p, simplex)).norm();
}

double distance_to_cells(const Point& p, const std::vector<Cell>& cells) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& cell : cells) best = std::min(best, distance_to_simplex(p, cell));
  return best;
}

namespace {

struct Node {
  double upper;
  Cell cell;
  bool operator<(const Node& o) const { return upper < o.upper; }
};

std::vector<Cell> split(const Cell& cell) {
  if (cell.size() == 2) {
    const Point m = 0.5 * (cell[0] + cell[1]);
    return {{cell[0], m}, {m, cell[1]}};
  }
  const Point ab = 0.5 * (cell[0] + cell[1]);
  const Point bc = 0.5 * (cell[1] + cell[2]);
  const Point ca = 0.5 * (cell[2] + cell[0]);
  return {{cell[0], ab, ca}, {ab, cell[1], bc}, {ca, bc, cell[2]}, {ab, bc, ca}};
}

}  // namespace

double lipschitz_sup(const std::vector<Cell>& cells, const std::function<double(const Point&)>& f, double gap,
                     double* lower) {
  double best = -std::numeric_limits<double>::infinity();
  std::priority_queue<Node> queue;
  auto push = [&](Cell cell) {
    Point centroid = cell[0];
    for (std::size_t i = 1; i < cell.size(); ++i) centroid += cell[i];
    centroid /= static_cast<double>(cell.size());
    double radius = 0.0;
    for (const auto& v : cell) radius = std::max(radius, (v - centroid).norm());
    const double value = f(centroid);
    best = std::max(best, value);
    if (radius == 0.0) return;
    queue.push(Node{value + radius, std::move(cell)});
  };
  for (const auto& cell : cells) {
    for (const auto& v : cell) best = std::max(best, f(v));
    push(cell);
  }
  constexpr std::size_t kMaxNodes = 4'000'000;
  std::size_t processed = 0;
  while (!queue.empty()) {
    if (queue.top().upper <= best + gap || ++processed > kMaxNodes) break;
    Node node = queue.top();
    queue.pop();
    for (auto& child : split(node.cell)) push(std::move(child));
  }
  if (lower) *lower = best;
  return queue.empty() ? best : std::max(best, queue.top().upper);
}

double minmax_segment_distance(const std::vector<Cell>& segments, double tol) {
  if (segments.empty()) throw Error("minmax_segment_distance: no segments");
  const auto n = segments.front().front().size();
  auto objective = [&](const Point& y, Point* grad) {
    double worst = -1.0;
    Point arg;
    for (const auto& s : segments) {
      const Point q = closest_point_on_simplex(y, s);
      const double d = (y - q).norm();
      if (d > worst) {
        worst = d;
        arg = q;
      }
    }
    if (grad) *grad = worst > 0.0 ? Point((y - arg) / worst) : Point(Point::Zero(n));
    return worst;
  };
  Point center = Point::Zero(n);
  std::size_t count = 0;
  for (const auto& s : segments)
    for (const auto& v : s) {
      center += v;
      ++count;
    }
  center /= static_cast<double>(count);
  double radius = 0.0;
  for (const auto& s : segments)
    for (const auto& v : s) radius = std::max(radius, (v - center).norm());
  radius = 2.0 * radius + 1.0;

  if (n == 1) {
    double lo = center[0] - radius, hi = center[0] + radius;
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      Point a(1), b(1);
      a << m1;
      b << m2;
      if (objective(a, nullptr) <= objective(b, nullptr))
        hi = m2;
      else
        lo = m1;
    }
    Point m(1);
    m << 0.5 * (lo + hi);
    return objective(m, nullptr);
  }

  const double dn = static_cast<double>(n);
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) * radius * radius;
  Point x = center;
  Point g;
  double best = objective(x, &g);
  for (int it = 0; it < 50000; ++it) {
    const double value = objective(x, &g);
    best = std::min(best, value);
    if (value == 0.0) return 0.0;
    const Eigen::VectorXd Pg = P * g;
    const double gPg = g.dot(Pg);
    if (!(gPg > 0.0)) break;
    const double scale = std::sqrt(gPg);
    if (scale < tol) break;
    const Eigen::VectorXd step = Pg / scale;
    x -= step / (dn + 1.0);
    P = (dn * dn / (dn * dn - 1.0)) * (P - (2.0 / (dn + 1.0)) * step * step.transpose());
    P = 0.5 * (P + P.transpose());
  }
  return best;
}

}  // namespace lifespan::detail
