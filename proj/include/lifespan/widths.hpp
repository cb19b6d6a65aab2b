#pragma once

// Width invariants of point clouds: Kolmogorov widths (sup-norm distance to
// the best affine k-plane), core displacements bounding Alexandrov widths and
// treewidths, Katz spread and certified-core upper bounds on uberspread.

#include "lifespan/metric_core.hpp"

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace lifespan {

enum class Exactness { Exact, UpperBound, Heuristic };
std::string_view to_string(Exactness e);

/// base + span(directions); directions are orthonormal columns (N x k).
struct AffineFlat {
  Point base;
  Eigen::MatrixXd directions;

  int k() const { return static_cast<int>(directions.cols()); }
  Point project(const Point& p) const;
  double distance(const Point& p) const { return (p - project(p)).norm(); }
};

enum class CoreCertificate { Point, Tree, ConvexSet, AffineFlat, None };
std::string_view to_string(CoreCertificate c);
CoreCertificate parse_certificate(std::string_view text);

/// How the certificate is backed: by construction (Proven), by a computed
/// acyclicity check of its neighborhoods (Verified), or taken on trust.
enum class CertificateStatus { Proven, Verified, Assumed };
std::string_view to_string(CertificateStatus s);

/// Geometric complex in R^N. `cells` lists every simplex (vertices included)
/// as sorted vertex-index lists; only cells of dimension <= 2 are supported.
struct SimplicialCore {
  std::vector<Point> vertices;
  std::vector<std::vector<std::size_t>> cells;
  CoreCertificate certificate = CoreCertificate::None;
  CertificateStatus status = CertificateStatus::Assumed;

  int dim() const;
  /// Face closure, index range, dimension <= 2, and the tree property when
  /// certificate == Tree.
  void validate() const;
  /// Adds every missing face so the cell list is closed.
  void close_under_faces();
};

enum class WidthKind { KW, AW_upper, TW_upper, Spread, Uberspread_upper };
std::string_view to_string(WidthKind k);

struct WidthEstimate {
  WidthKind kind = WidthKind::KW;
  int k = 0;
  double value = 0.0;
  Exactness exactness = Exactness::Heuristic;
  std::variant<std::monostate, AffineFlat, SimplicialCore, std::vector<std::size_t>> witness;
};

/// l2 PCA flat through the centroid, spanned by the top-k principal axes.
AffineFlat pca_flat(const PointCloud& cloud, int k);
/// max over points of the distance to the flat.
double flat_residual(const PointCloud& cloud, const AffineFlat& flat);

/// KW_k of an l2 cloud. Exact for k = 0 and for lines in the plane;
/// otherwise a multistart search over flat orientations (an upper bound).
WidthEstimate kolmogorov_width(const PointCloud& cloud, int k, int restarts = 16);
/// The search used off the exact cases, available everywhere for testing.
/// `warm_start` (a flat of any dimension <= k) is extended and tried first.
WidthEstimate kolmogorov_width_search(const PointCloud& cloud, int k, int restarts,
                                      const AffineFlat* warm_start = nullptr, std::uint64_t seed = 1);

/// sup over the cloud of the distance to the core's underlying set (l2).
WidthEstimate core_displacement(const PointCloud& cloud, const SimplicialCore& core);

/// Euclidean minimum spanning tree (Prim), certificate Tree / Assumed.
SimplicialCore mst_core(const PointCloud& cloud);
/// The part of `flat` covering the projections of the cloud: a point, a
/// segment or a triangulated convex polygon. Certificate AffineFlat.
SimplicialCore flat_core(const PointCloud& cloud, const AffineFlat& flat);
/// Closed ball of the cloud's norm replaced by a circumscribed regular
/// polygon (2D only), certificate ConvexSet.
SimplicialCore disk_core(const Point& center, double radius, int sides = 64);

/// Katz spread. Exact for n <= exact_limit, greedy upper bound otherwise.
WidthEstimate spread(const FiniteMetricSpace& ms, int exact_limit = 20);

/// Acyclicity threshold of a tree core: the largest death in the persistence
/// of the nerve of its edge neighborhoods (0 if every neighborhood of the core
/// is acyclic, +inf if the check is not available). The nerve has
/// O(edges^(N+1)) simplices in R^N.
double tree_acyclicity_threshold(const SimplicialCore& core);

/// Upper bound on uberspread from one certified core: the Hausdorff distance
/// between cloud and core, raised to the core's acyclicity threshold for tree
/// cores. Rejects certificate None and tree cores outside l2.
WidthEstimate uberspread_upper(const PointCloud& cloud, const SimplicialCore& core, double gap = 1e-6);

/// Two-sided Hausdorff distance between cloud and core, with the core-to-cloud
/// side bounded from above by branch and bound to within `gap`.
double core_hausdorff(const PointCloud& cloud, const SimplicialCore& core, double gap = 1e-6);

}  // namespace lifespan
