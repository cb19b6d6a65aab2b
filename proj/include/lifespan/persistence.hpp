#pragma once

// Z/2 persistent homology of filtered complexes in reduced homology, the
// bottleneck distance between diagrams, and a dense rank-based oracle.

#include "lifespan/complexes.hpp"

#include <limits>
#include <string>
#include <vector>

namespace lifespan {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Interval {
  int degree = 0;
  double birth = 0.0;
  double death = 0.0;  // +inf for classes still alive at the cap

  double lifespan() const { return death - birth; }
  bool essential() const { return death == kInfinity; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Relative length below which an interval is rounding noise from tied
/// filtration values computed along different simplices.
inline constexpr double kZeroLength = 1e-12;

/// Multiset of intervals sorted by (degree, birth, death). Zero-length
/// intervals (up to kZeroLength) are never stored.
class PersistenceDiagram {
 public:
  PersistenceDiagram() = default;
  explicit PersistenceDiagram(std::vector<Interval> intervals, std::vector<std::string> warnings = {});

  const std::vector<Interval>& intervals() const { return intervals_; }
  std::vector<Interval> in_degree(int degree) const;
  int max_degree() const;
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Every endpoint multiplied by `factor`.
  PersistenceDiagram scaled(double factor) const;

  friend bool operator==(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    return a.intervals_ == b.intervals_;
  }

 private:
  std::vector<Interval> intervals_;
  std::vector<std::string> warnings_;
};

/// Degree 0 by union-find with the elder rule (oldest component dropped),
/// degrees >= 1 by cohomology reduction with clearing. Unpaired classes get
/// death = +inf and a warning. Requires max_degree < fc.max_dim().
PersistenceDiagram compute_persistence(const FilteredComplex& fc, int max_degree);

/// Ranks of H_k(K_a) -> H_k(K_b) over every pair of critical values by dense
/// Z/2 elimination, then interval multiplicities by inclusion-exclusion.
/// Capped at `kBruteForceLimit` simplices.
inline constexpr std::size_t kBruteForceLimit = 2000;
PersistenceDiagram brute_force_persistence(const FilteredComplex& fc, int max_degree);

/// Exact bottleneck distance in one degree. Essential intervals are matched
/// among themselves by birth; differing essential counts give +inf.
double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, int degree);

/// Largest finite death over all degrees, 0 for an empty diagram.
double extinction_time(const PersistenceDiagram& pd);

struct Lifespan {
  double birth;
  double death;
  double lifespan;
};

std::vector<Lifespan> lifespans(const PersistenceDiagram& pd, int degree);

}  // namespace lifespan
