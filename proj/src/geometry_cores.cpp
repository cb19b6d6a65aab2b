#include "lifespan/geometry_cores.hpp"

#include "lifespan/detail/core_geometry.hpp"
#include "lifespan/detail/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace lifespan {

namespace {

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

void Polygon2D::validate() const {
  const std::size_t m = vertices.size();
  const std::size_t expected = kind == PolygonKind::Point ? 1 : kind == PolygonKind::Segment ? 2 : 0;
  if (expected && m != expected) throw Error("degenerate polygon has the wrong vertex count");
  if (!expected && m < 3) throw Error("polygon needs at least three vertices");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (vertices[i] == vertices[j]) throw Error("polygon has repeated vertices");
  if (kind != PolygonKind::Polygon) return;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& a = vertices[i];
    const auto& b = vertices[(i + 1) % m];
    const auto& c = vertices[(i + 2) % m];
    if (cross(b - a, c - b) < -1e-12) throw Error("polygon is not convex and counterclockwise");
  }
}

bool Polygon2D::contains(const Eigen::Vector2d& p, double tol) const {
  if (kind == PolygonKind::Point) return (p - vertices[0]).norm() <= tol;
  if (kind == PolygonKind::Segment) {
    const Point q = detail::closest_point_on_simplex(Point(p), std::vector<Point>{vertices[0], vertices[1]});
    return (Point(p) - q).norm() <= tol;
  }
  const std::size_t m = vertices.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Vector2d e = vertices[(i + 1) % m] - vertices[i];
    if (cross(e, p - vertices[i]) < -tol * std::max(1.0, e.norm())) return false;
  }
  return true;
}

Polygon2D convex_hull_2d(std::span<const Point> points) {
  if (points.empty()) throw Error("convex hull of an empty set");
  std::vector<Eigen::Vector2d> pts;
  for (const auto& p : points) {
    if (p.size() != 2) throw Error("convex_hull_2d needs planar points");
    pts.emplace_back(p[0], p[1]);
  }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Polygon2D out;
  if (pts.size() == 1) {
    out.kind = PolygonKind::Point;
    out.vertices = pts;
    return out;
  }
  std::vector<Eigen::Vector2d> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() <= 2) {
    out.kind = PolygonKind::Segment;
    out.vertices = {pts.front(), pts.back()};
    return out;
  }
  out.kind = PolygonKind::Polygon;
  out.vertices = std::move(hull);
  return out;
}

namespace {

// min over the cloud of the distance to y, giving up once below `floor`.
double nearest_distance(const std::vector<Point>& pts, const Point& y, double floor) {
  double best = std::numeric_limits<double>::infinity();
  const double floor2 = floor * floor;
  for (const auto& p : pts) {
    best = std::min(best, (p - y).squaredNorm());
    if (best <= floor2) break;
  }
  return std::sqrt(best);
}

DeficiencyResult cdef_planar(const PointCloud& cloud) {
  const auto& pts = cloud.points();
  const Polygon2D hull = convex_hull_2d(pts);
  DeficiencyResult out;
  out.exactness = Exactness::Exact;
  out.argmax = pts.front();
  if (hull.kind == PolygonKind::Point) return out;
  if (hull.kind == PolygonKind::Segment) {
    const Eigen::Vector2d a = hull.vertices[0];
    const Eigen::Vector2d dir = (hull.vertices[1] - a).normalized();
    std::vector<double> t;
    for (const auto& p : pts) t.push_back(dir.dot(Eigen::Vector2d(p[0], p[1]) - a));
    std::sort(t.begin(), t.end());
    for (std::size_t i = 1; i < t.size(); ++i)
      if ((t[i] - t[i - 1]) / 2.0 > out.value) {
        out.value = (t[i] - t[i - 1]) / 2.0;
        out.argmax = Point(a + dir * (t[i] + t[i - 1]) / 2.0);
      }
    return out;
  }
  auto consider = [&](const Eigen::Vector2d& y) {
    const Point yp(y);
    const double d = nearest_distance(pts, yp, out.value);
    if (d > out.value) {
      out.value = d;
      out.argmax = yp;
    }
  };
  const std::size_t n = pts.size();
  // Voronoi vertices: circumcenters inside the hull.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const Eigen::Vector2d a(pts[i][0], pts[i][1]), b(pts[j][0], pts[j][1]), c(pts[k][0], pts[k][1]);
        const Eigen::Vector2d ab = b - a, ac = c - a;
        const double den = 2.0 * cross(ab, ac);
        if (std::abs(den) <= 1e-14 * ab.squaredNorm() * ac.norm() / std::max(ab.norm(), 1e-300)) continue;
        const Eigen::Vector2d off(ac.y() * ab.squaredNorm() - ab.y() * ac.squaredNorm(),
                                  ab.x() * ac.squaredNorm() - ac.x() * ab.squaredNorm());
        const Eigen::Vector2d center = a + off / den;
        // Quick rejection: the circumradius bounds the value from above.
        if ((center - a).norm() <= out.value) continue;
        if (!hull.contains(center, 1e-12)) continue;
        consider(center);
      }
  // Voronoi edges leaving the hull: pair bisectors crossing hull edges.
  const auto& v = hull.vertices;
  for (std::size_t e = 0; e < v.size(); ++e) {
    const Eigen::Vector2d a = v[e], b = v[(e + 1) % v.size()];
    const Eigen::Vector2d ab = b - a;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const Eigen::Vector2d p(pts[i][0], pts[i][1]), q(pts[j][0], pts[j][1]);
        const Eigen::Vector2d w = 2.0 * (q - p);
        const double den = w.dot(ab);
        if (den == 0.0) continue;
        const double s = (q.squaredNorm() - p.squaredNorm() - w.dot(a)) / den;
        if (s < 0.0 || s > 1.0) continue;
        consider(a + s * ab);
      }
    consider(a);
  }
  return out;
}

bool in_hull(const std::vector<Point>& pts, const Point& y) {
  detail::LinearProgram lp;
  lp.variables = pts.size();
  std::vector<double> ones(pts.size(), 1.0);
  lp.add_row(ones, detail::RowSense::Equal, 1.0);
  for (Eigen::Index c = 0; c < y.size(); ++c) {
    std::vector<double> row(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) row[i] = pts[i][c];
    lp.add_row(std::move(row), detail::RowSense::Equal, y[c]);
  }
  return detail::solve(lp).status == detail::LpStatus::Optimal;
}

DeficiencyResult cdef_search(const PointCloud& cloud, const CdefOptions& options) {
  const auto& pts = cloud.points();
  const std::size_t n = pts.size();
  const auto dim = static_cast<Eigen::Index>(cloud.dim());
  std::mt19937_64 rng(options.seed);
  DeficiencyResult out;
  out.exactness = Exactness::Heuristic;
  out.argmax = pts.front();
  double diam = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) diam = std::max(diam, (pts[i] - pts[j]).norm());
  out.band = options.relative_band * diam;

  // Candidates: circumcenters of (N+1)-subsets, then random convex combinations.
  std::vector<std::pair<double, Point>> candidates;
  const std::size_t simplex_size = static_cast<std::size_t>(dim) + 1;
  if (n >= simplex_size) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int trial = 0; trial < 4000; ++trial) {
      std::set<std::size_t> s;
      while (s.size() < simplex_size) s.insert(pick(rng));
      std::vector<std::size_t> idx(s.begin(), s.end());
      Eigen::MatrixXd a(dim, dim);
      Eigen::VectorXd rhs(dim);
      for (Eigen::Index r = 0; r < dim; ++r) {
        const Point diff = pts[idx[static_cast<std::size_t>(r) + 1]] - pts[idx[0]];
        a.row(r) = 2.0 * diff.transpose();
        rhs[r] = pts[idx[static_cast<std::size_t>(r) + 1]].squaredNorm() - pts[idx[0]].squaredNorm();
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (!lu.isInvertible()) continue;
      const Point c = lu.solve(rhs);
      candidates.emplace_back(nearest_distance(pts, c, 0.0), c);
    }
  }
  std::exponential_distribution<double> expo(1.0);
  for (int r = 0; r < options.restarts; ++r) {
    Point y = Point::Zero(dim);
    double total = 0.0;
    for (const auto& p : pts) {
      const double w = expo(rng);
      y += w * p;
      total += w;
    }
    y /= total;
    candidates.emplace_back(nearest_distance(pts, y, 0.0), y);
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  int climbs = 0;
  for (const auto& [value, start] : candidates) {
    if (climbs >= options.restarts) break;
    if (!in_hull(pts, start)) continue;
    ++climbs;
    Point y = start;
    double fy = value;
    double step = 0.25 * diam;
    while (step > 1e-9 * std::max(diam, 1.0)) {
      bool moved = false;
      for (Eigen::Index axis = 0; axis < dim && !moved; ++axis)
        for (double sign : {1.0, -1.0}) {
          Point trial = y;
          trial[axis] += sign * step;
          const double ft = nearest_distance(pts, trial, fy);
          if (ft > fy && in_hull(pts, trial)) {
            y = trial;
            fy = ft;
            moved = true;
            break;
          }
        }
      if (!moved) step *= 0.5;
    }
    if (fy > out.value) {
      out.value = fy;
      out.argmax = y;
    }
  }
  return out;
}

}  // namespace

DeficiencyResult convexity_deficiency(const PointCloud& cloud, const CdefOptions& options) {
  if (cloud.norm() != Norm::L2) throw Error("convexity_deficiency requires the l2 norm");
  check_distinct(cloud);
  if (cloud.size() == 1) return DeficiencyResult{0.0, Exactness::Exact, cloud[0], 0.0};
  if (cloud.dim() == 1) {
    std::vector<double> t;
    for (const auto& p : cloud.points()) t.push_back(p[0]);
    std::sort(t.begin(), t.end());
    DeficiencyResult out{0.0, Exactness::Exact, cloud[0], 0.0};
    for (std::size_t i = 1; i < t.size(); ++i)
      if ((t[i] - t[i - 1]) / 2.0 > out.value) {
        out.value = (t[i] - t[i - 1]) / 2.0;
        out.argmax = Point::Constant(1, (t[i] + t[i - 1]) / 2.0);
      }
    return out;
  }
  if (cloud.dim() == 2) return cdef_planar(cloud);
  return cdef_search(cloud, options);
}

namespace {

struct Line {
  Eigen::Vector2d normal;  // inward unit normal
  double offset;           // normal . y = offset + t at time t
};

struct WaveVertex {
  Eigen::Vector2d start;
};

// Point where lines a, b, c meet and the time they do, if defined.
std::optional<std::pair<Eigen::Vector2d, double>> triple_meet(const Line& a, const Line& b, const Line& c) {
  Eigen::Matrix3d m;
  m << a.normal.x(), a.normal.y(), -1.0, b.normal.x(), b.normal.y(), -1.0, c.normal.x(), c.normal.y(), -1.0;
  const Eigen::Vector3d rhs(a.offset, b.offset, c.offset);
  Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
  if (!lu.isInvertible()) return std::nullopt;
  const Eigen::Vector3d s = lu.solve(rhs);
  return std::make_pair(Eigen::Vector2d(s[0], s[1]), s[2]);
}

std::optional<Eigen::Vector2d> pair_meet(const Line& a, const Line& b, double t) {
  Eigen::Matrix2d m;
  m << a.normal.x(), a.normal.y(), b.normal.x(), b.normal.y();
  if (std::abs(m.determinant()) < 1e-12) return std::nullopt;
  return Eigen::Vector2d(m.inverse() * Eigen::Vector2d(a.offset + t, b.offset + t));
}

}  // namespace

SimplicialCore medial_axis_core(const Polygon2D& poly) {
  if (poly.kind != PolygonKind::Polygon) throw Error("medial axis needs a non-degenerate convex polygon");
  poly.validate();
  const auto& v = poly.vertices;
  const std::size_t m = v.size();
  double scale = 0.0;
  for (const auto& p : v) scale = std::max(scale, p.norm());
  const double eps = 1e-12 * std::max(scale, 1.0);

  std::vector<Line> lines;
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Vector2d e = (v[(i + 1) % m] - v[i]).normalized();
    const Eigen::Vector2d normal(-e.y(), e.x());
    lines.push_back(Line{normal, normal.dot(v[i])});
  }
  // Active edges in cyclic order; wave vertex i sits between active edge i and i+1.
  std::vector<std::size_t> edges(m);
  std::iota(edges.begin(), edges.end(), std::size_t{0});
  std::vector<WaveVertex> verts;
  for (std::size_t i = 0; i < m; ++i) verts.push_back(WaveVertex{v[(i + 1) % m]});

  std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> arcs;
  auto emit = [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    if ((a - b).norm() > eps) arcs.emplace_back(a, b);
  };
  double now = 0.0;
  while (edges.size() > 2) {
    const std::size_t k = edges.size();
    std::size_t victim = k;
    double when = std::numeric_limits<double>::infinity();
    Eigen::Vector2d where;
    for (std::size_t i = 0; i < k; ++i) {
      const auto meet =
          triple_meet(lines[edges[(i + k - 1) % k]], lines[edges[i]], lines[edges[(i + 1) % k]]);
      if (!meet || meet->second < now - eps) continue;
      if (meet->second < when - eps) {
        when = meet->second;
        where = meet->first;
        victim = i;
      }
    }
    if (victim == k) throw Error("medial axis: wavefront failed to collapse");
    now = std::max(now, when);
    // Edge `victim` vanishes: its two wave vertices meet at `where`.
    const std::size_t left = (victim + k - 1) % k;  // vertex between victim-1 and victim
    emit(verts[left].start, where);
    emit(verts[victim].start, where);
    verts[left].start = where;
    verts.erase(verts.begin() + static_cast<std::ptrdiff_t>(victim));
    edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(victim));
  }
  // Two edges remain. Crossing lines: both vertices converge on the crossing
  // point. Parallel lines: the remaining vertices lie on the midline.
  if (auto meet = pair_meet(lines[edges[0]], lines[edges[1]], now)) {
    for (const auto& w : verts) emit(w.start, *meet);
  } else {
    std::vector<Eigen::Vector2d> ends;
    for (const auto& w : verts) ends.push_back(w.start);
    const Eigen::Vector2d dir(-lines[edges[0]].normal.y(), lines[edges[0]].normal.x());
    std::sort(ends.begin(), ends.end(), [&](const auto& a, const auto& b) { return dir.dot(a) < dir.dot(b); });
    for (std::size_t i = 1; i < ends.size(); ++i) emit(ends[i - 1], ends[i]);
  }

  SimplicialCore core;
  core.certificate = CoreCertificate::Tree;
  core.status = CertificateStatus::Proven;
  const double merge = 1e-9 * std::max(scale, 1.0);
  auto vertex_id = [&](const Eigen::Vector2d& p) {
    for (std::size_t i = 0; i < core.vertices.size(); ++i)
      if ((core.vertices[i] - Point(p)).norm() <= merge) return i;
    core.vertices.emplace_back(p);
    return core.vertices.size() - 1;
  };
  std::set<std::vector<std::size_t>> cells;
  for (const auto& [a, b] : arcs) {
    const auto ia = vertex_id(a), ib = vertex_id(b);
    if (ia == ib) continue;
    cells.insert({ia});
    cells.insert({ib});
    cells.insert({std::min(ia, ib), std::max(ia, ib)});
  }
  if (core.vertices.empty()) core.vertices.emplace_back(v[0]);
  if (cells.empty()) cells.insert({0});
  core.cells.assign(cells.begin(), cells.end());
  std::stable_sort(core.cells.begin(), core.cells.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  core.validate();
  return core;
}

SimplicialCore polygon_core(const Polygon2D& poly) {
  poly.validate();
  SimplicialCore core;
  core.certificate = CoreCertificate::ConvexSet;
  core.status = CertificateStatus::Proven;
  for (const auto& p : poly.vertices) core.vertices.emplace_back(p);
  if (poly.kind == PolygonKind::Point)
    core.cells = {{0}};
  else if (poly.kind == PolygonKind::Segment)
    core.cells = {{0, 1}};
  else
    for (std::size_t i = 1; i + 1 < poly.vertices.size(); ++i) core.cells.push_back({0, i, i + 1});
  core.close_under_faces();
  return core;
}

Eigen::VectorXd conjugate(const Eigen::VectorXd& f, const FiniteMetricSpace& ms) {
  const std::size_t n = ms.size();
  if (static_cast<std::size_t>(f.size()) != n) throw Error("function length does not match the space");
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  for (std::size_t x = 0; x < n; ++x) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < n; ++y) best = std::max(best, ms(x, y) - f[static_cast<Eigen::Index>(y)]);
    out[static_cast<Eigen::Index>(x)] = best;
  }
  return out;
}

bool tight_span_membership(const Eigen::VectorXd& f, const FiniteMetricSpace& ms, double tol) {
  const std::size_t n = ms.size();
  if (static_cast<std::size_t>(f.size()) != n) throw Error("function length does not match the space");
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x; y < n; ++y)
      if (f[static_cast<Eigen::Index>(x)] + f[static_cast<Eigen::Index>(y)] < ms(x, y) - tol) return false;
  return (f - conjugate(f, ms)).cwiseAbs().maxCoeff() <= tol;
}

namespace {

// Lowers each coordinate to its conjugate value in turn. Starting from a
// function with f(x) + f(y) >= d(x, y), one sweep reaches f = f*.
void tighten(Eigen::VectorXd& g, const FiniteMetricSpace& ms) {
  const auto n = g.size();
  for (Eigen::Index x = 0; x < n; ++x) {
    double best = 0.0;
    for (Eigen::Index y = 0; y < n; ++y)
      if (y != x) best = std::max(best, ms(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) - g[y]);
    g[x] = best;
  }
}

Eigen::VectorXd retract(Eigen::VectorXd g, const FiniteMetricSpace& ms, double diam) {
  g = g.cwiseMax(conjugate(g, ms));
  for (int it = 0; it < 500; ++it) {
    const Eigen::VectorXd star = conjugate(g, ms);
    if ((g - star).cwiseAbs().maxCoeff() <= 1e-13 * std::max(1.0, diam)) break;
    g = 0.5 * (g + star);
  }
  tighten(g, ms);
  return g;
}

TightSpanResult hcdef_heuristic(const FiniteMetricSpace& ms, std::uint64_t seed) {
  const std::size_t n = ms.size();
  const auto m = static_cast<Eigen::Index>(n);
  const double diam = diameter(ms);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.5, 1.0);
  std::vector<Eigen::VectorXd> starts;
  for (int start = 0; start < 8; ++start) {
    Eigen::VectorXd g(m);
    for (Eigen::Index i = 0; i < m; ++i) g[i] = start == 0 ? diam / 2.0 : diam * unit(rng);
    starts.push_back(std::move(g));
  }
  // Midpoint guesses z -> max(d(z,x), d(z,y)) - d(x,y)/2, exact on tree metrics,
  // ranked by their own minimum.
  std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> pairs;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      double low = std::numeric_limits<double>::infinity();
      for (std::size_t z = 0; z < n; ++z) low = std::min(low, std::max(ms(z, x), ms(z, y)) - ms(x, y) / 2.0);
      pairs.push_back({low, {x, y}});
    }
  const std::size_t keep = std::min<std::size_t>(pairs.size(), 32);
  std::partial_sort(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(keep), pairs.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; i < keep; ++i) {
    const auto [x, y] = pairs[i].second;
    Eigen::VectorXd g(m);
    for (std::size_t z = 0; z < n; ++z)
      g[static_cast<Eigen::Index>(z)] = std::max(ms(z, x), ms(z, y)) - ms(x, y) / 2.0;
    starts.push_back(std::move(g));
  }
  TightSpanResult best;
  best.exactness = Exactness::Heuristic;
  best.value = -1.0;
  for (const auto& s : starts) {
    const Eigen::VectorXd g = retract(s, ms, diam);
    if (!tight_span_membership(g, ms)) continue;
    if (g.minCoeff() > best.value) {
      best.value = g.minCoeff();
      best.witness = g;
    }
  }
  if (best.value < 0.0) {
    // Rows of the distance matrix are always extremal.
    best.witness = ms.matrix().row(0).transpose();
    best.value = 0.0;
  }
  return best;
}

// Branch-and-bound nodes spent past the exact limit; one node costs about
// n^4 operations.
std::size_t hcdef_node_budget(std::size_t n) {
  const double nodes = 4e9 / std::pow(static_cast<double>(n), 4.0);
  return static_cast<std::size_t>(std::clamp(nodes, 100.0, 2000.0));
}

std::vector<double> eccentricities(const FiniteMetricSpace& ms) {
  std::vector<double> ecc(ms.size(), 0.0);
  for (std::size_t x = 0; x < ms.size(); ++x)
    for (std::size_t y = 0; y < ms.size(); ++y) ecc[x] = std::max(ecc[x], ms(x, y));
  return ecc;
}

struct CellOptimum {
  double value = 0.0;
  Eigen::VectorXd f;
};

// max t subject to t <= f(x) <= ecc(x), f(x) + f(y) >= d(x, y), with equality
// on `tight`. Solved in g = ecc - f, where every inequality has a
// nonnegative right-hand side and only the equalities need phase one.
std::optional<CellOptimum> cell_lp(const FiniteMetricSpace& ms, const std::vector<double>& ecc,
                                   const std::set<std::pair<std::size_t, std::size_t>>& tight) {
  const std::size_t n = ms.size();
  detail::LinearProgram lp;
  lp.variables = n + 1;
  lp.objective.assign(n + 1, 0.0);
  lp.objective[n] = 1.0;
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<double> row(n + 1, 0.0);
    row[n] = 1.0;
    row[x] = 1.0;
    lp.add_row(std::move(row), detail::RowSense::LessEqual, ecc[x]);
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      std::vector<double> row(n + 1, 0.0);
      row[x] = row[y] = 1.0;
      lp.add_row(std::move(row), tight.count({x, y}) ? detail::RowSense::Equal : detail::RowSense::LessEqual,
                 std::max(0.0, ecc[x] + ecc[y] - ms(x, y)));
    }
  const auto result = detail::solve(lp);
  if (result.status != detail::LpStatus::Optimal) return std::nullopt;
  CellOptimum out;
  out.value = result.value;
  out.f.resize(static_cast<Eigen::Index>(n));
  for (std::size_t x = 0; x < n; ++x) out.f[static_cast<Eigen::Index>(x)] = ecc[x] - result.x[x];
  return out;
}

// Optimum over the cell where f(x) + f(p(x)) = d(x, p(x)) for every x; any
// feasible point is extremal.
std::optional<Eigen::VectorXd> partner_lp(const FiniteMetricSpace& ms, const std::vector<double>& ecc,
                                          const std::vector<std::size_t>& partner) {
  std::set<std::pair<std::size_t, std::size_t>> eq;
  for (std::size_t x = 0; x < ms.size(); ++x) eq.insert({std::min(x, partner[x]), std::max(x, partner[x])});
  auto cell = cell_lp(ms, ecc, eq);
  if (!cell || !tight_span_membership(cell->f, ms)) return std::nullopt;
  return cell->f;
}

// Local search over tight-partner assignments, starting from the partners of
// the current witness. Each move re-pairs one point and keeps improvements.
void hcdef_partner_search(const FiniteMetricSpace& ms, TightSpanResult& best) {
  const std::size_t n = ms.size();
  const std::size_t budget = 40 * n;
  const std::vector<double> ecc = eccentricities(ms);
  std::size_t solved = 0;
  auto partners_of = [&](const Eigen::VectorXd& f) {
    std::vector<std::size_t> p(n);
    for (std::size_t x = 0; x < n; ++x) {
      double slack = std::numeric_limits<double>::infinity();
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x) continue;
        const double s = f[static_cast<Eigen::Index>(x)] + f[static_cast<Eigen::Index>(y)] - ms(x, y);
        if (s < slack) {
          slack = s;
          p[x] = y;
        }
      }
    }
    return p;
  };
  std::vector<std::size_t> current = partners_of(best.witness);
  if (auto f = partner_lp(ms, ecc, current); f && f->minCoeff() > best.value) {
    best.value = f->minCoeff();
    best.witness = *f;
    current = partners_of(*f);
  }
  ++solved;
  bool improved = true;
  while (improved && solved < budget) {
    improved = false;
    for (std::size_t x = 0; x < n && solved < budget; ++x) {
      // Candidates ordered by current slack, skipping pairs too close to
      // constrain the value.
      std::vector<std::pair<double, std::size_t>> order;
      for (std::size_t y = 0; y < n; ++y)
        if (y != x && y != current[x] && ms(x, y) > 2.0 * best.value)
          order.push_back({best.witness[static_cast<Eigen::Index>(x)] + best.witness[static_cast<Eigen::Index>(y)] -
                               ms(x, y),
                           y});
      std::sort(order.begin(), order.end());
      for (std::size_t c = 0; c < order.size() && solved < budget; ++c) {
        std::vector<std::size_t> trial = current;
        trial[x] = order[c].second;
        ++solved;
        const auto f = partner_lp(ms, ecc, trial);
        if (!f || f->minCoeff() <= best.value + 1e-12) continue;
        best.value = f->minCoeff();
        best.witness = *f;
        current = partners_of(*f);
        improved = true;
        break;
      }
    }
  }
}

class HcdefSearch {
 public:
  /// `node_limit` = 0 searches exhaustively.
  explicit HcdefSearch(const FiniteMetricSpace& ms, std::size_t node_limit = 0)
      : ms_(ms), n_(ms.size()), node_limit_(node_limit) {
    ecc_ = eccentricities(ms);
  }

  void run(TightSpanResult& best) {
    best_ = &best;
    std::vector<std::pair<std::size_t, std::size_t>> tight;
    recurse(tight);
  }

  /// False when the node budget ran out before the search finished.
  bool complete() const { return !exhausted_; }

 private:
  std::optional<CellOptimum> relax(const std::vector<std::pair<std::size_t, std::size_t>>& tight) {
    return cell_lp(ms_, ecc_, std::set<std::pair<std::size_t, std::size_t>>(tight.begin(), tight.end()));
  }

  void recurse(std::vector<std::pair<std::size_t, std::size_t>>& tight) {
    if (node_limit_ && seen_.size() >= node_limit_) {
      exhausted_ = true;
      return;
    }
    auto key = tight;
    std::sort(key.begin(), key.end());
    if (!seen_.insert(key).second) return;
    const auto lp = relax(tight);
    if (!lp) return;
    const double bound = lp->value;
    if (bound <= best_->value + 1e-12) return;
    const Eigen::VectorXd& f = lp->f;
    if (tight_span_membership(f, ms_)) {
      best_->value = f.minCoeff();
      best_->witness = f;
      return;
    }
    std::vector<char> covered(n_, 0);
    for (const auto& [a, b] : tight) covered[a] = covered[b] = 1;
    std::size_t x = n_;
    for (std::size_t i = 0; i < n_; ++i)
      if (!covered[i]) {
        x = i;
        break;
      }
    if (x == n_) return;  // fully covered nodes are extremal; reached only through rounding
    // Partners nearest to tight at the relaxed optimum first.
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t y = 0; y < n_; ++y)
      if (y != x) order.push_back({f[static_cast<Eigen::Index>(x)] + f[static_cast<Eigen::Index>(y)] - ms_(x, y), y});
    std::sort(order.begin(), order.end());
    for (const auto& [slack, y] : order) {
      if (ms_(x, y) <= 2.0 * best_->value) continue;
      tight.emplace_back(std::min(x, y), std::max(x, y));
      recurse(tight);
      tight.pop_back();
    }
  }

  const FiniteMetricSpace& ms_;
  std::size_t n_;
  std::size_t node_limit_;
  bool exhausted_ = false;
  std::vector<double> ecc_;
  TightSpanResult* best_ = nullptr;
  std::set<std::vector<std::pair<std::size_t, std::size_t>>> seen_;
};

}  // namespace

TightSpanResult hyperconvexity_deficiency(const FiniteMetricSpace& ms, int exact_limit, std::uint64_t seed) {
  const std::size_t n = ms.size();
  if (n == 1) return TightSpanResult{0.0, Eigen::VectorXd::Zero(1), Exactness::Exact};
  TightSpanResult best = hcdef_heuristic(ms, seed);
  if (static_cast<int>(n) > exact_limit) {
    // The cell programs have O(n^2) rows; past this size only the retraction
    // heuristic runs.
    if (n <= 40) {
      hcdef_partner_search(ms, best);
      HcdefSearch(ms, hcdef_node_budget(n)).run(best);
    }
    return best;
  }
  HcdefSearch(ms).run(best);
  best.exactness = Exactness::Exact;
  if (!tight_span_membership(best.witness, ms)) throw Error("hcdef witness failed the membership check");
  return best;
}

double convex_core_lifespan_bound(const PointCloud& cloud, const SimplicialCore& core, double gap) {
  if (cloud.norm() != Norm::L2) throw Error("convex core bound requires the l2 norm");
  if (core.certificate != CoreCertificate::ConvexSet && core.certificate != CoreCertificate::Point &&
      core.certificate != CoreCertificate::AffineFlat)
    throw Error("convex core bound needs a convex certificate");
  return core_hausdorff(cloud, core, gap);
}

}  // namespace lifespan
