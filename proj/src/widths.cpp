#include "lifespan/widths.hpp"

#include "lifespan/complexes.hpp"
#include "lifespan/detail/core_geometry.hpp"
#include "lifespan/geometry_cores.hpp"
#include "lifespan/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace lifespan {

std::string_view to_string(Exactness e) {
  switch (e) {
    case Exactness::Exact: return "exact";
    case Exactness::UpperBound: return "upper_bound";
    case Exactness::Heuristic: return "heuristic";
  }
  return "heuristic";
}

std::string_view to_string(CoreCertificate c) {
  switch (c) {
    case CoreCertificate::Point: return "point";
    case CoreCertificate::Tree: return "tree";
    case CoreCertificate::ConvexSet: return "convex_set";
    case CoreCertificate::AffineFlat: return "affine_flat";
    case CoreCertificate::None: return "none";
  }
  return "none";
}

CoreCertificate parse_certificate(std::string_view text) {
  for (auto c : {CoreCertificate::Point, CoreCertificate::Tree, CoreCertificate::ConvexSet, CoreCertificate::AffineFlat,
                 CoreCertificate::None})
    if (text == to_string(c)) return c;
  throw Error("unknown core certificate '" + std::string(text) + "'");
}

std::string_view to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::Proven: return "proven";
    case CertificateStatus::Verified: return "verified";
    case CertificateStatus::Assumed: return "assumed";
  }
  return "assumed";
}

std::string_view to_string(WidthKind k) {
  switch (k) {
    case WidthKind::KW: return "KW";
    case WidthKind::AW_upper: return "AW_upper";
    case WidthKind::TW_upper: return "TW_upper";
    case WidthKind::Spread: return "spread";
    case WidthKind::Uberspread_upper: return "uberspread_upper";
  }
  return "KW";
}

Point AffineFlat::project(const Point& p) const {
  if (directions.cols() == 0) return base;
  return base + directions * (directions.transpose() * (p - base));
}

int SimplicialCore::dim() const {
  int d = -1;
  for (const auto& c : cells) d = std::max(d, static_cast<int>(c.size()) - 1);
  return d;
}

void SimplicialCore::close_under_faces() {
  std::set<std::vector<std::size_t>> all;
  for (auto c : cells) {
    std::sort(c.begin(), c.end());
    const std::size_t m = c.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
      std::vector<std::size_t> face;
      for (std::size_t i = 0; i < m; ++i)
        if (mask & (std::size_t{1} << i)) face.push_back(c[i]);
      all.insert(std::move(face));
    }
  }
  cells.assign(all.begin(), all.end());
  std::stable_sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
}

void SimplicialCore::validate() const {
  if (vertices.empty()) throw Error("core has no vertices");
  const auto n = vertices.front().size();
  for (const auto& v : vertices)
    if (v.size() != n) throw Error("core vertices have mixed dimensions");
  std::set<std::vector<std::size_t>> present;
  for (const auto& c : cells) {
    if (c.empty() || c.size() > 3) throw Error("core cells must have dimension 0, 1 or 2");
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] >= vertices.size()) throw Error("core cell references a missing vertex");
      if (i > 0 && c[i - 1] >= c[i]) throw Error("core cell vertices must be strictly increasing");
    }
    present.insert(c);
  }
  for (const auto& c : cells)
    for (std::size_t drop = 0; c.size() > 1 && drop < c.size(); ++drop) {
      std::vector<std::size_t> face;
      for (std::size_t i = 0; i < c.size(); ++i)
        if (i != drop) face.push_back(c[i]);
      if (!present.count(face)) throw Error("core cells are not closed under faces");
    }
  if (certificate == CoreCertificate::Tree) {
    std::size_t edges = 0;
    std::vector<std::size_t> parent(vertices.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto root = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& c : cells) {
      if (c.size() == 3) throw Error("tree core has a 2-cell");
      if (c.size() != 2) continue;
      ++edges;
      const auto a = root(c[0]), b = root(c[1]);
      if (a == b) throw Error("tree core has a cycle");
      parent[a] = b;
    }
    if (edges + 1 != vertices.size()) throw Error("tree core is not connected");
  }
}

namespace {

void require_l2(const PointCloud& cloud, std::string_view what) {
  if (cloud.norm() != Norm::L2) throw Error(std::string(what) + " requires the l2 norm");
}

std::vector<detail::Cell> maximal_cells(const SimplicialCore& core) {
  std::set<std::vector<std::size_t>> faces;
  for (const auto& c : core.cells)
    for (std::size_t drop = 0; c.size() > 1 && drop < c.size(); ++drop) {
      std::vector<std::size_t> face;
      for (std::size_t i = 0; i < c.size(); ++i)
        if (i != drop) face.push_back(c[i]);
      faces.insert(std::move(face));
    }
  std::vector<detail::Cell> out;
  for (const auto& c : core.cells) {
    if (faces.count(c)) continue;
    detail::Cell cell;
    for (auto i : c) cell.push_back(core.vertices[i]);
    out.push_back(std::move(cell));
  }
  if (out.empty())
    for (const auto& v : core.vertices) out.push_back({v});
  return out;
}

}  // namespace

AffineFlat pca_flat(const PointCloud& cloud, int k) {
  const auto n = static_cast<Eigen::Index>(cloud.dim());
  if (k < 0 || k > n) throw Error("pca_flat: k out of range");
  Point mean = Point::Zero(n);
  for (const auto& p : cloud.points()) mean += p;
  mean /= static_cast<double>(cloud.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  for (const auto& p : cloud.points()) cov += (p - mean) * (p - mean).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  AffineFlat flat{mean, Eigen::MatrixXd(n, k)};
  for (int j = 0; j < k; ++j) flat.directions.col(j) = eig.eigenvectors().col(n - 1 - j);
  return flat;
}

double flat_residual(const PointCloud& cloud, const AffineFlat& flat) {
  double worst = 0.0;
  for (const auto& p : cloud.points()) worst = std::max(worst, flat.distance(p));
  return worst;
}

namespace {

void check_kw_args(const PointCloud& cloud, int k) {
  require_l2(cloud, "kolmogorov_width");
  if (k < 0 || static_cast<std::size_t>(k) >= cloud.dim()) {
    std::ostringstream os;
    os << "kolmogorov_width needs 0 <= k < N (k=" << k << ", N=" << cloud.dim() << ")";
    throw Error(os.str());
  }
}

WidthEstimate kw_point(const PointCloud& cloud) {
  const Ball b = min_enclosing_ball(cloud);
  WidthEstimate w;
  w.kind = WidthKind::KW;
  w.k = 0;
  w.value = b.radius;
  w.exactness = Exactness::Exact;
  w.witness = AffineFlat{b.center, Eigen::MatrixXd(static_cast<Eigen::Index>(cloud.dim()), 0)};
  return w;
}

// Lines in the plane: an optimal slab has a hull edge on one side, so the
// directions of hull vertex pairs contain an optimal one.
WidthEstimate kw_line_2d(const PointCloud& cloud) {
  const Polygon2D hull = convex_hull_2d(cloud.points());
  WidthEstimate w;
  w.kind = WidthKind::KW;
  w.k = 1;
  w.exactness = Exactness::Exact;
  if (hull.kind != PolygonKind::Polygon) {
    Eigen::Vector2d dir(1.0, 0.0);
    if (hull.kind == PolygonKind::Segment) dir = (hull.vertices[1] - hull.vertices[0]).normalized();
    w.value = 0.0;
    w.witness = AffineFlat{Point(hull.vertices[0]), Eigen::MatrixXd(dir)};
    return w;
  }
  const auto& v = hull.vertices;
  double best = std::numeric_limits<double>::infinity();
  Eigen::Vector2d best_dir, best_base;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const Eigen::Vector2d dir = (v[j] - v[i]).normalized();
      const Eigen::Vector2d normal(-dir.y(), dir.x());
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& p : v) {
        const double t = normal.dot(p);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
      }
      if ((hi - lo) / 2.0 < best) {
        best = (hi - lo) / 2.0;
        best_dir = dir;
        best_base = normal * ((hi + lo) / 2.0);
      }
    }
  w.value = best;
  w.witness = AffineFlat{Point(best_base), Eigen::MatrixXd(best_dir)};
  // Report the residual measured on the full cloud for consistency.
  w.value = flat_residual(cloud, std::get<AffineFlat>(w.witness));
  return w;
}

// Orthonormal basis of the complement of the columns of d (which are orthonormal).
Eigen::MatrixXd complement(const Eigen::MatrixXd& d) {
  const auto n = d.rows();
  if (d.cols() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(d);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - d.cols());
}

struct FlatFit {
  double value;
  Point base;
};

FlatFit fit_base(const PointCloud& cloud, const Eigen::MatrixXd& d) {
  const Eigen::MatrixXd q = complement(d);
  std::vector<Point> projected;
  projected.reserve(cloud.size());
  for (const auto& p : cloud.points()) projected.emplace_back(q.transpose() * p);
  const Ball b = min_enclosing_ball(projected, Norm::L2);
  return FlatFit{b.radius, q * b.center};
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return (qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

// Pattern search over orientations by plane rotations between a direction
// and a complement vector.
std::pair<Eigen::MatrixXd, FlatFit> local_search(const PointCloud& cloud, Eigen::MatrixXd d) {
  FlatFit best = fit_base(cloud, d);
  double theta = 0.25;
  int evaluations = 0;
  double checkpoint = best.value;
  int next_check = 500;
  while (theta > 1e-10 && evaluations < 20000) {
    // Creeping along a ridge of the max: stop once 500 evaluations gain little.
    if (evaluations >= next_check) {
      if (checkpoint - best.value < 1e-7 * (1.0 + best.value)) break;
      checkpoint = best.value;
      next_check = evaluations + 500;
    }
    bool improved = false;
    const Eigen::MatrixXd q = complement(d);
    for (Eigen::Index i = 0; i < d.cols() && !improved; ++i)
      for (Eigen::Index j = 0; j < q.cols() && !improved; ++j)
        for (double sign : {1.0, -1.0}) {
          Eigen::MatrixXd trial = d;
          trial.col(i) = std::cos(theta) * d.col(i) + sign * std::sin(theta) * q.col(j);
          const FlatFit fit = fit_base(cloud, trial);
          ++evaluations;
          if (fit.value < best.value - 1e-13 * (1.0 + best.value)) {
            best = fit;
            d = trial;
            improved = true;
            break;
          }
        }
    if (improved)
      theta = std::min(0.25, theta * 1.5);
    else
      theta *= 0.5;
  }
  return {d, best};
}

}  // namespace

WidthEstimate kolmogorov_width_search(const PointCloud& cloud, int k, int restarts, const AffineFlat* warm_start,
                                      std::uint64_t seed) {
  check_kw_args(cloud, k);
  if (k == 0) {
    WidthEstimate w = kw_point(cloud);
    w.exactness = Exactness::Heuristic;
    return w;
  }
  const auto n = static_cast<Eigen::Index>(cloud.dim());
  std::vector<Eigen::MatrixXd> starts;
  const AffineFlat pca = pca_flat(cloud, k);
  if (warm_start && warm_start->k() <= k && warm_start->k() > 0) {
    Eigen::MatrixXd m(n, k);
    m.leftCols(warm_start->k()) = warm_start->directions;
    // Fill with PCA axes orthogonal to the warm start.
    const Eigen::MatrixXd q = complement(warm_start->directions);
    const AffineFlat inner = pca_flat(
        PointCloud([&] {
          std::vector<Point> pts;
          for (const auto& p : cloud.points()) pts.emplace_back(q.transpose() * p);
          return pts;
        }(), Norm::L2),
        k - warm_start->k());
    m.rightCols(k - warm_start->k()) = q * inner.directions;
    starts.push_back(orthonormalize(m));
  }
  starts.push_back(pca.directions);
  if (n == 2) {
    for (int r = 0; r < restarts; ++r) {
      const double angle = M_PI * (r + 0.5) / restarts;
      Eigen::MatrixXd m(2, 1);
      m << std::cos(angle), std::sin(angle);
      starts.push_back(m);
    }
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (int r = 0; r < restarts; ++r) {
      Eigen::MatrixXd m(n, k);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < k; ++j) m(i, j) = gauss(rng);
      starts.push_back(orthonormalize(m));
    }
  }
  WidthEstimate w;
  w.kind = WidthKind::KW;
  w.k = k;
  w.exactness = Exactness::Heuristic;
  w.value = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    auto [d, fit] = local_search(cloud, s);
    if (fit.value < w.value) {
      w.value = fit.value;
      w.witness = AffineFlat{fit.base, d};
    }
  }
  return w;
}

WidthEstimate kolmogorov_width(const PointCloud& cloud, int k, int restarts) {
  check_kw_args(cloud, k);
  if (k == 0) return kw_point(cloud);
  if (cloud.dim() == 2 && k == 1) return kw_line_2d(cloud);
  return kolmogorov_width_search(cloud, k, restarts);
}

WidthEstimate core_displacement(const PointCloud& cloud, const SimplicialCore& core) {
  require_l2(cloud, "core_displacement");
  core.validate();
  if (core.vertices.front().size() != static_cast<Eigen::Index>(cloud.dim()))
    throw Error("core and cloud dimensions differ");
  const auto cells = maximal_cells(core);
  WidthEstimate w;
  w.kind = core.certificate == CoreCertificate::None ? WidthKind::AW_upper : WidthKind::TW_upper;
  w.k = std::max(core.dim(), 0);
  w.exactness = Exactness::UpperBound;
  for (const auto& p : cloud.points()) w.value = std::max(w.value, detail::distance_to_cells(p, cells));
  w.witness = core;
  return w;
}

SimplicialCore mst_core(const PointCloud& cloud) {
  require_l2(cloud, "mst_core");
  const std::size_t n = cloud.size();
  SimplicialCore core;
  core.vertices = cloud.points();
  core.certificate = CoreCertificate::Tree;
  core.status = CertificateStatus::Assumed;
  for (std::size_t i = 0; i < n; ++i) core.cells.push_back({i});
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> from(n, 0);
  std::vector<char> in_tree(n, 0);
  best[0] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t u = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!in_tree[i] && (u == n || best[i] < best[u])) u = i;
    in_tree[u] = 1;
    if (step > 0) core.cells.push_back({std::min(u, from[u]), std::max(u, from[u])});
    for (std::size_t i = 0; i < n; ++i) {
      if (in_tree[i]) continue;
      const double d = (cloud[i] - cloud[u]).norm();
      if (d < best[i]) {
        best[i] = d;
        from[i] = u;
      }
    }
  }
  return core;
}

SimplicialCore flat_core(const PointCloud& cloud, const AffineFlat& flat) {
  SimplicialCore core;
  core.certificate = CoreCertificate::AffineFlat;
  core.status = CertificateStatus::Proven;
  const int k = flat.k();
  if (k == 0) {
    core.vertices = {flat.base};
    core.cells = {{0}};
    return core;
  }
  std::vector<Point> coords;
  for (const auto& p : cloud.points()) coords.emplace_back(flat.directions.transpose() * (p - flat.base));
  if (k == 1) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& t : coords) {
      lo = std::min(lo, t[0]);
      hi = std::max(hi, t[0]);
    }
    if (hi - lo <= 0.0) {
      core.vertices = {Point(flat.base + flat.directions.col(0) * lo)};
      core.cells = {{0}};
      return core;
    }
    core.vertices = {Point(flat.base + flat.directions.col(0) * lo), Point(flat.base + flat.directions.col(0) * hi)};
    core.cells = {{0}, {1}, {0, 1}};
    return core;
  }
  if (k != 2) throw Error("flat cores are limited to k <= 2");
  const Polygon2D hull = convex_hull_2d(coords);
  for (const auto& v : hull.vertices) core.vertices.emplace_back(flat.base + flat.directions * v);
  if (hull.kind == PolygonKind::Polygon) {
    for (std::size_t i = 1; i + 1 < hull.vertices.size(); ++i) core.cells.push_back({0, i, i + 1});
  } else if (hull.kind == PolygonKind::Segment) {
    core.cells.push_back({0, 1});
  } else {
    core.cells.push_back({0});
  }
  core.close_under_faces();
  return core;
}

SimplicialCore disk_core(const Point& center, double radius, int sides) {
  if (center.size() != 2) throw Error("disk_core is planar only");
  if (sides < 3) throw Error("disk_core needs at least 3 sides");
  SimplicialCore core;
  core.certificate = CoreCertificate::ConvexSet;
  core.status = CertificateStatus::Proven;
  const double outer = radius / std::cos(M_PI / sides);
  core.vertices.push_back(center);
  for (int i = 0; i < sides; ++i) {
    const double a = 2.0 * M_PI * i / sides;
    Point v(2);
    v << center[0] + outer * std::cos(a), center[1] + outer * std::sin(a);
    core.vertices.push_back(v);
  }
  for (int i = 0; i < sides; ++i) {
    const std::size_t a = static_cast<std::size_t>(i) + 1;
    const std::size_t b = static_cast<std::size_t>((i + 1) % sides) + 1;
    core.cells.push_back({0, std::min(a, b), std::max(a, b)});
  }
  core.close_under_faces();
  return core;
}

namespace {

double subset_spread(const FiniteMetricSpace& ms, const std::vector<std::size_t>& subset) {
  double value = 0.0;
  for (auto a : subset)
    for (auto b : subset) value = std::max(value, ms(a, b));
  for (std::size_t x = 0; x < ms.size(); ++x) {
    double nearest = std::numeric_limits<double>::infinity();
    for (auto a : subset) nearest = std::min(nearest, ms(x, a));
    value = std::max(value, nearest);
  }
  return value;
}

// Is there a clique of G_delta of size <= limit dominating every vertex?
class SpreadSearch {
 public:
  SpreadSearch(const FiniteMetricSpace& ms, double delta) : ms_(ms), delta_(delta), covered_(ms.size(), 0) {}

  std::optional<std::vector<std::size_t>> run(std::size_t limit) {
    limit_ = limit;
    chosen_.clear();
    std::fill(covered_.begin(), covered_.end(), 0);
    if (recurse()) return chosen_;
    return std::nullopt;
  }

 private:
  bool recurse() {
    std::size_t x = ms_.size();
    for (std::size_t i = 0; i < ms_.size(); ++i)
      if (!covered_[i]) {
        x = i;
        break;
      }
    if (x == ms_.size()) return true;
    if (chosen_.size() >= limit_) return false;
    for (std::size_t a = 0; a < ms_.size(); ++a) {
      if (ms_(x, a) > delta_) continue;
      bool compatible = true;
      for (auto b : chosen_)
        if (b == a || ms_(a, b) > delta_) {
          compatible = false;
          break;
        }
      if (!compatible) continue;
      chosen_.push_back(a);
      for (std::size_t y = 0; y < ms_.size(); ++y)
        if (ms_(y, a) <= delta_) ++covered_[y];
      if (recurse()) return true;
      for (std::size_t y = 0; y < ms_.size(); ++y)
        if (ms_(y, a) <= delta_) --covered_[y];
      chosen_.pop_back();
    }
    return false;
  }

  const FiniteMetricSpace& ms_;
  double delta_;
  std::size_t limit_ = 0;
  std::vector<std::size_t> chosen_;
  std::vector<int> covered_;
};

std::optional<std::vector<std::size_t>> greedy_spread(const FiniteMetricSpace& ms, double delta) {
  const std::size_t n = ms.size();
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<std::size_t> chosen{start};
    std::vector<char> covered(n, 0);
    for (std::size_t y = 0; y < n; ++y) covered[y] = ms(y, start) <= delta;
    for (;;) {
      std::size_t x = n;
      for (std::size_t i = 0; i < n; ++i)
        if (!covered[i]) {
          x = i;
          break;
        }
      if (x == n) return chosen;
      std::size_t pick = n, gain = 0;
      for (std::size_t a = 0; a < n; ++a) {
        if (ms(x, a) > delta) continue;
        bool ok = true;
        for (auto b : chosen)
          if (b == a || ms(a, b) > delta) ok = false;
        if (!ok) continue;
        std::size_t g = 0;
        for (std::size_t y = 0; y < n; ++y) g += !covered[y] && ms(y, a) <= delta;
        if (pick == n || g > gain) {
          pick = a;
          gain = g;
        }
      }
      if (pick == n) break;
      chosen.push_back(pick);
      for (std::size_t y = 0; y < n; ++y)
        if (ms(y, pick) <= delta) covered[y] = 1;
    }
  }
  return std::nullopt;
}

}  // namespace

WidthEstimate spread(const FiniteMetricSpace& ms, int exact_limit) {
  const std::size_t n = ms.size();
  WidthEstimate w;
  w.kind = WidthKind::Spread;
  if (n == 1) {
    w.exactness = Exactness::Exact;
    w.witness = std::vector<std::size_t>{0};
    return w;
  }
  std::vector<double> values{0.0};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) values.push_back(ms(i, j));
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  const bool exact = static_cast<int>(n) <= exact_limit;
  auto feasible = [&](double delta) -> std::optional<std::vector<std::size_t>> {
    if (exact) return SpreadSearch(ms, delta).run(n);
    return greedy_spread(ms, delta);
  };
  std::size_t lo = 0, hi = values.size() - 1;
  std::vector<std::size_t> witness = *feasible(values[hi]);
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (auto found = feasible(values[mid])) {
      witness = std::move(*found);
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (exact) {
    // Smallest witness at the optimal threshold.
    SpreadSearch search(ms, values[lo]);
    for (std::size_t size = 1; size <= n; ++size)
      if (auto found = search.run(size)) {
        witness = std::move(*found);
        break;
      }
  }
  std::sort(witness.begin(), witness.end());
  w.value = subset_spread(ms, witness);
  w.exactness = exact ? Exactness::Exact : Exactness::UpperBound;
  w.witness = std::move(witness);
  return w;
}

double tree_acyclicity_threshold(const SimplicialCore& core) {
  if (core.certificate != CoreCertificate::Tree) throw Error("acyclicity screen applies to tree cores");
  core.validate();
  std::vector<detail::Cell> segments;
  for (const auto& c : core.cells)
    if (c.size() == 2) segments.push_back({core.vertices[c[0]], core.vertices[c[1]]});
  const auto ambient = static_cast<int>(core.vertices.front().size());
  if (segments.size() <= 1 || ambient == 1) return 0.0;
  const auto m = segments.size();
  auto value = [&](std::span<const Vertex> sigma) {
    if (sigma.size() == 1) return 0.0;
    std::vector<detail::Cell> chosen;
    for (auto v : sigma) chosen.push_back(segments[v]);
    return detail::minmax_segment_distance(chosen);
  };
  // Every nerve value is at most the value of the whole tree; the margin
  // absorbs solver error on subsets.
  const double whole = detail::minmax_segment_distance(segments);
  const double cap = whole + 1e-6 * std::max(1.0, whole);
  const int max_dim = std::min<int>(ambient, static_cast<int>(m) - 1);
  const FilteredComplex nerve = build_filtration(m, max_dim, cap, value);
  const PersistenceDiagram pd = compute_persistence(nerve, max_dim - 1);
  // Nerve values come from an iterative solver; classes shorter than its
  // tolerance are solver noise between values that agree exactly.
  double threshold = 0.0;
  for (const auto& iv : pd.intervals()) {
    if (iv.essential()) return kInfinity;
    if (iv.lifespan() > kTolerance * std::max(1.0, iv.death)) threshold = std::max(threshold, iv.death);
  }
  return threshold;
}

double core_hausdorff(const PointCloud& cloud, const SimplicialCore& core, double gap) {
  require_l2(cloud, "core_hausdorff");
  core.validate();
  const auto cells = maximal_cells(core);
  double to_core = 0.0;
  for (const auto& p : cloud.points()) to_core = std::max(to_core, detail::distance_to_cells(p, cells));
  const auto& pts = cloud.points();
  const double to_cloud = detail::lipschitz_sup(
      cells,
      [&](const Point& y) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : pts) best = std::min(best, (y - p).squaredNorm());
        return std::sqrt(best);
      },
      gap);
  return std::max(to_core, to_cloud);
}

WidthEstimate uberspread_upper(const PointCloud& cloud, const SimplicialCore& core, double gap) {
  if (core.certificate == CoreCertificate::None) throw Error("uberspread_upper needs a certified core");
  if (core.certificate == CoreCertificate::Tree && cloud.norm() != Norm::L2)
    throw Error("tree certificates are accepted only in l2");
  WidthEstimate w;
  w.kind = WidthKind::Uberspread_upper;
  w.k = std::max(core.dim(), 0);
  w.exactness = Exactness::UpperBound;
  w.value = core_hausdorff(cloud, core, gap);
  SimplicialCore certified = core;
  if (core.certificate == CoreCertificate::Tree && core.status != CertificateStatus::Proven) {
    const double threshold = tree_acyclicity_threshold(core);
    w.value = std::max(w.value, threshold);
    certified.status = CertificateStatus::Verified;
  }
  w.witness = std::move(certified);
  return w;
}

}  // namespace lifespan
