#pragma once

// Euclidean helpers shared by the width and core modules.

#include "lifespan/metric_core.hpp"

#include <functional>
#include <span>
#include <vector>

namespace lifespan::detail {

/// Closest point of the simplex spanned by 1, 2 or 3 points (any ambient dimension).
Point closest_point_on_simplex(const Point& p, std::span<const Point> simplex);
double distance_to_simplex(const Point& p, std::span<const Point> simplex);

/// A cell as explicit vertex coordinates (1 to 3 points).
using Cell = std::vector<Point>;

double distance_to_cells(const Point& p, const std::vector<Cell>& cells);

/// Upper bound on sup over the union of cells of a 1-Lipschitz function,
/// by bisection of cells; stops when the bound is within `gap` of the best
/// value seen. `lower`, if given, receives that best value.
double lipschitz_sup(const std::vector<Cell>& cells, const std::function<double(const Point&)>& f, double gap,
                     double* lower = nullptr);

/// min over y of max over segments of the distance from y to the segment,
/// by the central-cut ellipsoid method. Returns an upper estimate within
/// `tol` of the optimum.
double minmax_segment_distance(const std::vector<Cell>& segments, double tol = 1e-10);

}  // namespace lifespan::detail
