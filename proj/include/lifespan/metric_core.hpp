#pragma once

// Metric and normed-space primitives: point clouds, finite metric spaces,
// radii, Hausdorff distance, minimum enclosing balls and the Kuratowski
// embedding into l-infinity.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lifespan {

/// Absolute tolerance used for every distance comparison in the library.
inline constexpr double kTolerance = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Norm { L2, Linf, L1 };

std::string_view to_string(Norm norm);
Norm parse_norm(std::string_view text);

using Point = Eigen::VectorXd;

double norm_of(const Eigen::Ref<const Eigen::VectorXd>& v, Norm norm);
double distance(const Point& a, const Point& b, Norm norm);

/// A finite, nonempty set of points in R^N carrying one ambient norm.
/// Coordinates are validated to be finite and of a common dimension.
class PointCloud {
 public:
  PointCloud(std::vector<Point> points, Norm norm);

  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(points_.front().size()); }
  Norm norm() const { return norm_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const { return points_; }

  PointCloud subset(std::span<const std::size_t> indices) const;
  PointCloud with_norm(Norm norm) const { return PointCloud(points_, norm); }

 private:
  std::vector<Point> points_;
  Norm norm_;
};

/// Symmetric distance matrix with zero diagonal, strictly positive
/// off-diagonal entries and the triangle inequality (within kTolerance).
class FiniteMetricSpace {
 public:
  explicit FiniteMetricSpace(Eigen::MatrixXd dist);

  std::size_t size() const { return static_cast<std::size_t>(dist_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return dist_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& matrix() const { return dist_; }

  FiniteMetricSpace subspace(std::span<const std::size_t> indices) const;

 private:
  Eigen::MatrixXd dist_;
};

struct Ball {
  Point center;
  double radius = 0.0;
  Norm norm = Norm::L2;
  /// Indices (into the input) of points on the boundary that determine the ball.
  std::vector<std::size_t> support;
};

/// Throws Error naming both indices when two points coincide.
void check_distinct(const PointCloud& cloud);

FiniteMetricSpace pairwise_distances(const PointCloud& cloud);
double diameter(const FiniteMetricSpace& ms);
/// min over rows of the row maximum (the center is restricted to the space).
double radius(const FiniteMetricSpace& ms);
/// Index realizing radius(ms).
std::size_t radius_center(const FiniteMetricSpace& ms);

/// Exact minimum enclosing ball: randomized move-to-front Welzl for L2,
/// coordinate-wise midrange for Linf. L1 is rejected.
Ball min_enclosing_ball(const PointCloud& cloud);
Ball min_enclosing_ball(std::span<const Point> points, Norm norm);
double circumradius(const PointCloud& cloud);

double hausdorff_distance(const PointCloud& a, const PointCloud& b);
/// sup over a of the distance to b.
double directed_hausdorff(std::span<const Point> a, std::span<const Point> b, Norm norm);

/// Point i is row i of the distance matrix, with the Linf norm.
PointCloud kuratowski_embed(const FiniteMetricSpace& ms);

}  // namespace lifespan
