#include "lifespan/metric_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace lifespan {

std::string_view to_string(Norm norm) {
  switch (norm) {
    case Norm::L2: return "l2";
    case Norm::Linf: return "linf";
    case Norm::L1: return "l1";
  }
  return "l2";
}

Norm parse_norm(std::string_view text) {
  if (text == "l2" || text == "L2") return Norm::L2;
  if (text == "linf" || text == "Linf" || text == "LINF") return Norm::Linf;
  if (text == "l1" || text == "L1") return Norm::L1;
  throw Error("unknown norm '" + std::string(text) + "' (expected l2, linf or l1)");
}

double norm_of(const Eigen::Ref<const Eigen::VectorXd>& v, Norm norm) {
  switch (norm) {
    case Norm::L2: return v.norm();
    case Norm::Linf: return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
    case Norm::L1: return v.cwiseAbs().sum();
  }
  return v.norm();
}

double distance(const Point& a, const Point& b, Norm norm) {
  return norm_of(a - b, norm);
}

PointCloud::PointCloud(std::vector<Point> points, Norm norm) : points_(std::move(points)), norm_(norm) {
  if (points_.empty()) throw Error("point cloud must be nonempty");
  const auto dim = points_.front().size();
  if (dim < 1) throw Error("point dimension must be at least 1");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() != dim) {
      std::ostringstream os;
      os << "point " << i << " has dimension " << points_[i].size() << ", expected " << dim;
      throw Error(os.str());
    }
    if (!points_[i].allFinite()) {
      std::ostringstream os;
      os << "point " << i << " has a non-finite coordinate";
      throw Error(os.str());
    }
  }
}

PointCloud PointCloud::subset(std::span<const std::size_t> indices) const {
  std::vector<Point> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(points_.at(i));
  return PointCloud(std::move(out), norm_);
}

FiniteMetricSpace::FiniteMetricSpace(Eigen::MatrixXd dist) : dist_(std::move(dist)) {
  const auto n = dist_.rows();
  if (n == 0 || dist_.cols() != n) throw Error("distance matrix must be square and nonempty");
  if (!dist_.allFinite()) throw Error("distance matrix has non-finite entries");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (dist_(i, i) != 0.0) throw Error("distance matrix diagonal must be zero");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(dist_(i, j) - dist_(j, i)) > kTolerance) {
        std::ostringstream os;
        os << "distance matrix is not symmetric at (" << i << "," << j << ")";
        throw Error(os.str());
      }
      if (!(dist_(i, j) > 0.0)) {
        std::ostringstream os;
        os << "points " << i << " and " << j << " coincide (distance " << dist_(i, j) << ")";
        throw Error(os.str());
      }
      dist_(j, i) = dist_(i, j);
    }
  }
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j)
        if (dist_(i, j) > dist_(i, k) + dist_(k, j) + kTolerance) {
          std::ostringstream os;
          os << "triangle inequality fails for (" << i << "," << j << ") via " << k;
          throw Error(os.str());
        }
}

FiniteMetricSpace FiniteMetricSpace::subspace(std::span<const std::size_t> indices) const {
  const auto m = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd sub(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b)
      sub(a, b) = (*this)(indices[static_cast<std::size_t>(a)], indices[static_cast<std::size_t>(b)]);
  return FiniteMetricSpace(std::move(sub));
}

void check_distinct(const PointCloud& cloud) {
  std::vector<std::size_t> order(cloud.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto lex_less = [&](std::size_t a, std::size_t b) {
    const auto& p = cloud[a];
    const auto& q = cloud[b];
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      if (p[k] < q[k]) return true;
      if (p[k] > q[k]) return false;
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), lex_less);
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (cloud[order[i - 1]] == cloud[order[i]]) {
      std::ostringstream os;
      os << "duplicate points at indices " << std::min(order[i - 1], order[i]) << " and "
         << std::max(order[i - 1], order[i]);
      throw Error(os.str());
    }
  }
}

FiniteMetricSpace pairwise_distances(const PointCloud& cloud) {
  check_distinct(cloud);
  const auto n = static_cast<Eigen::Index>(cloud.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = distance(cloud[static_cast<std::size_t>(i)], cloud[static_cast<std::size_t>(j)], cloud.norm());
      d(i, j) = v;
      d(j, i) = v;
    }
  return FiniteMetricSpace(std::move(d));
}

double diameter(const FiniteMetricSpace& ms) { return ms.matrix().maxCoeff(); }

std::size_t radius_center(const FiniteMetricSpace& ms) {
  Eigen::Index best = 0;
  ms.matrix().rowwise().maxCoeff().minCoeff(&best);
  return static_cast<std::size_t>(best);
}

double radius(const FiniteMetricSpace& ms) { return ms.matrix().rowwise().maxCoeff().minCoeff(); }

namespace {

struct SupportBall {
  Point center;
  double radius_sq = -1.0;
  std::vector<std::size_t> support;
};

// Smallest ball with every support point on its boundary. The center lies in
// the affine hull: c = s0 + sum_j lambda_j (s_j - s0), 2 G lambda = diag(G).
SupportBall ball_from_support(std::span<const Point> pts, const std::vector<std::size_t>& support) {
  SupportBall ball;
  ball.support = support;
  if (support.empty()) return ball;
  const Point& s0 = pts[support[0]];
  if (support.size() == 1) {
    ball.center = s0;
    ball.radius_sq = 0.0;
    return ball;
  }
  const auto m = static_cast<Eigen::Index>(support.size() - 1);
  Eigen::MatrixXd a(s0.size(), m);
  for (Eigen::Index j = 0; j < m; ++j) a.col(j) = pts[support[static_cast<std::size_t>(j + 1)]] - s0;
  const Eigen::MatrixXd gram = a.transpose() * a;
  const Eigen::VectorXd rhs = 0.5 * gram.diagonal();
  const Eigen::VectorXd lambda = gram.completeOrthogonalDecomposition().solve(rhs);
  ball.center = s0 + a * lambda;
  double r2 = 0.0;
  for (auto idx : support) r2 = std::max(r2, (pts[idx] - ball.center).squaredNorm());
  ball.radius_sq = r2;
  return ball;
}

bool ball_contains(const SupportBall& ball, const Point& p) {
  if (ball.radius_sq < 0.0) return false;
  const double r = std::sqrt(ball.radius_sq);
  return (p - ball.center).norm() <= r + 1e-12 * (1.0 + r);
}

// Move-to-front Welzl: order is permuted in place, only [0, end) is scanned.
SupportBall mtf_ball(std::span<const Point> pts, std::vector<std::size_t>& order, std::size_t end,
                     std::vector<std::size_t>& support, std::size_t dim) {
  SupportBall ball = ball_from_support(pts, support);
  if (support.size() == dim + 1) return ball;
  for (std::size_t i = 0; i < end; ++i) {
    const std::size_t p = order[i];
    if (ball_contains(ball, pts[p])) continue;
    support.push_back(p);
    ball = mtf_ball(pts, order, i, support, dim);
    support.pop_back();
    std::rotate(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(i),
                order.begin() + static_cast<std::ptrdiff_t>(i + 1));
  }
  return ball;
}

}  // namespace

Ball min_enclosing_ball(std::span<const Point> points, Norm norm) {
  if (points.empty()) throw Error("enclosing ball of an empty set");
  const auto dim = static_cast<std::size_t>(points.front().size());
  Ball out;
  out.norm = norm;
  if (norm == Norm::L1) throw Error("unsupported norm: minimum enclosing ball is implemented for l2 and linf only");
  if (norm == Norm::Linf) {
    Point lo = points.front();
    Point hi = points.front();
    std::vector<std::size_t> arg_lo(dim, 0), arg_hi(dim, 0);
    for (std::size_t i = 1; i < points.size(); ++i)
      for (std::size_t k = 0; k < dim; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        if (points[i][kk] < lo[kk]) { lo[kk] = points[i][kk]; arg_lo[k] = i; }
        if (points[i][kk] > hi[kk]) { hi[kk] = points[i][kk]; arg_hi[k] = i; }
      }
    out.center = (hi + lo) * 0.5;
    Eigen::Index widest = 0;
    const Eigen::VectorXd extent = hi - lo;
    out.radius = extent.maxCoeff(&widest) * 0.5;
    out.support = {arg_lo[static_cast<std::size_t>(widest)], arg_hi[static_cast<std::size_t>(widest)]};
    if (out.support[0] == out.support[1]) out.support.pop_back();
    return out;
  }
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(0x5eed5eedULL + points.size());
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> support;
  const SupportBall ball = mtf_ball(points, order, order.size(), support, dim);
  out.center = ball.center;
  out.support = ball.support;
  std::sort(out.support.begin(), out.support.end());
  double r = 0.0;
  for (const auto& p : points) r = std::max(r, (p - out.center).norm());
  out.radius = r;
  return out;
}

Ball min_enclosing_ball(const PointCloud& cloud) { return min_enclosing_ball(cloud.points(), cloud.norm()); }

double circumradius(const PointCloud& cloud) { return min_enclosing_ball(cloud).radius; }

double directed_hausdorff(std::span<const Point> a, std::span<const Point> b, Norm norm) {
  double worst = 0.0;
  for (const auto& p : a) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& q : b) {
      nearest = std::min(nearest, distance(p, q, norm));
      if (nearest <= worst) break;
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
  if (a.dim() != b.dim()) throw Error("hausdorff_distance: dimension mismatch");
  if (a.norm() != b.norm()) throw Error("hausdorff_distance: norm mismatch");
  return std::max(directed_hausdorff(a.points(), b.points(), a.norm()),
                  directed_hausdorff(b.points(), a.points(), a.norm()));
}

PointCloud kuratowski_embed(const FiniteMetricSpace& ms) {
  std::vector<Point> pts;
  pts.reserve(ms.size());
  for (Eigen::Index i = 0; i < ms.matrix().rows(); ++i) pts.emplace_back(ms.matrix().row(i).transpose());
  return PointCloud(std::move(pts), Norm::Linf);
}

}  // namespace lifespan
