#include "lifespan/complexes.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace lifespan {

std::string_view to_string(ComplexFlavor flavor) {
  switch (flavor) {
    case ComplexFlavor::VietorisRips: return "vietoris-rips";
    case ComplexFlavor::Cech: return "cech";
    case ComplexFlavor::Custom: return "custom";
  }
  return "custom";
}

namespace {

bool filtration_less(const Simplex& a, const Simplex& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
  return a.vertices < b.vertices;
}

std::vector<std::vector<std::uint64_t>> binomial_table(std::size_t n, int max_dim) {
  const auto kmax = static_cast<std::size_t>(std::max(max_dim, 0)) + 1;
  std::vector<std::vector<std::uint64_t>> b(kmax + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) {
    b[0][i] = 1;
    for (std::size_t k = 1; k <= kmax && k <= i; ++k) {
      const std::uint64_t lhs = b[k - 1][i - 1];
      const std::uint64_t rhs = b[k][i - 1];
      if (lhs > std::numeric_limits<std::uint64_t>::max() - rhs)
        throw Error("complex too large: simplex keys overflow 64 bits");
      b[k][i] = lhs + rhs;
    }
  }
  return b;
}

}  // namespace

FilteredComplex::FilteredComplex(std::vector<Simplex> simplices, std::size_t vertex_count, int max_dim,
                                 double max_value, ComplexFlavor flavor)
    : simplices_(std::move(simplices)),
      vertex_count_(vertex_count),
      max_dim_(max_dim),
      max_value_(max_value),
      flavor_(flavor),
      binomial_(binomial_table(vertex_count, max_dim)),
      index_(static_cast<std::size_t>(std::max(max_dim, 0)) + 1) {
  if (max_dim < 0) throw Error("max_dim must be nonnegative");
  std::sort(simplices_.begin(), simplices_.end(), filtration_less);
  for (std::size_t i = 0; i < simplices_.size(); ++i) {
    const auto& s = simplices_[i];
    if (s.vertices.empty() || s.dim() > max_dim) throw Error("simplex dimension outside [0, max_dim]");
    for (std::size_t k = 1; k < s.vertices.size(); ++k)
      if (s.vertices[k - 1] >= s.vertices[k]) throw Error("simplex vertices must be strictly increasing");
    if (s.vertices.back() >= vertex_count_) throw Error("simplex vertex out of range");
    if (!(s.value >= 0.0)) throw Error("simplex value must be nonnegative");
    index_[static_cast<std::size_t>(s.dim())].emplace(key(s.vertices), static_cast<std::uint32_t>(i));
  }
}

std::uint64_t FilteredComplex::key(std::span<const Vertex> vertices) const {
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < vertices.size(); ++i) k += binomial_[i + 1][vertices[i]];
  return k;
}

std::optional<std::size_t> FilteredComplex::find(std::span<const Vertex> vertices) const {
  if (vertices.empty() || vertices.size() > index_.size()) return std::nullopt;
  if (vertices.back() >= vertex_count_) return std::nullopt;
  const auto& map = index_[vertices.size() - 1];
  const auto it = map.find(key(vertices));
  if (it == map.end()) return std::nullopt;
  return it->second;
}

void FilteredComplex::validate() const {
  std::vector<Vertex> face;
  for (std::size_t i = 0; i < simplices_.size(); ++i) {
    const auto& s = simplices_[i];
    if (i > 0 && filtration_less(s, simplices_[i - 1])) throw Error("complex is not in filtration order");
    if (s.vertices.size() < 2) continue;
    for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
      face.clear();
      for (std::size_t k = 0; k < s.vertices.size(); ++k)
        if (k != drop) face.push_back(s.vertices[k]);
      const auto f = find(face);
      if (!f) throw Error("complex is not closed under faces");
      if (*f >= i) throw Error("face appears after its coface");
      if (simplices_[*f].value > s.value) throw Error("filtration values are not monotone");
    }
  }
}

std::string FilteredComplex::dump() const {
  std::ostringstream os;
  os << std::setprecision(17);
  for (const auto& s : simplices_) {
    os << s.value << ';';
    for (std::size_t k = 0; k < s.vertices.size(); ++k) os << (k ? "," : "") << s.vertices[k];
    os << '\n';
  }
  return os.str();
}

namespace {

// Depth-first clique enumeration over a neighbor graph. `extend` returns the
// state of the simplex obtained by appending v, or nullopt if it exceeds the cap.
template <class State, class Extend>
void enumerate_cliques(std::size_t n, int max_dim, const std::vector<std::vector<Vertex>>& upper_neighbors,
                       const std::vector<State>& roots, Extend&& extend, std::vector<Simplex>& out) {
  std::vector<Vertex> current;
  auto recurse = [&](auto&& self, const State& state, const std::vector<Vertex>& candidates) -> void {
    if (static_cast<int>(current.size()) > max_dim) return;
    std::vector<Vertex> next;
    for (Vertex v : candidates) {
      auto child = extend(state, current, v);
      if (!child) continue;
      current.push_back(v);
      out.push_back(Simplex{current, child->value});
      if (static_cast<int>(current.size()) <= max_dim) {
        const auto& nb = upper_neighbors[v];
        next.clear();
        std::set_intersection(candidates.begin(), candidates.end(), nb.begin(), nb.end(), std::back_inserter(next));
        if (!next.empty()) self(self, *child, std::vector<Vertex>(next));
      }
      current.pop_back();
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    current = {static_cast<Vertex>(v)};
    out.push_back(Simplex{current, roots[v].value});
    if (max_dim >= 1 && !upper_neighbors[v].empty()) recurse(recurse, roots[v], upper_neighbors[v]);
  }
}

// Raise every value to the max over its facets so monotonicity holds exactly
// even when a value is recomputed from scratch with rounding.
void enforce_monotone(std::vector<Simplex>& simplices, std::size_t n, int max_dim) {
  std::sort(simplices.begin(), simplices.end(), [](const Simplex& a, const Simplex& b) {
    if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
    return a.vertices < b.vertices;
  });
  const auto binom = binomial_table(n, max_dim);
  auto key = [&](const std::vector<Vertex>& v) {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < v.size(); ++i) k += binom[i + 1][v[i]];
    return k;
  };
  std::unordered_map<std::uint64_t, double> prev, cur;
  std::size_t size = 1;
  std::vector<Vertex> face;
  for (auto& s : simplices) {
    if (s.vertices.size() != size) {
      prev.swap(cur);
      cur.clear();
      size = s.vertices.size();
    }
    if (size >= 2) {
      for (std::size_t drop = 0; drop < size; ++drop) {
        face.clear();
        for (std::size_t k = 0; k < size; ++k)
          if (k != drop) face.push_back(s.vertices[k]);
        const auto it = prev.find(key(face));
        if (it != prev.end()) s.value = std::max(s.value, it->second);
      }
    }
    cur.emplace(key(s.vertices), s.value);
  }
}

struct ValueState {
  double value = 0.0;
};

}  // namespace

FilteredComplex vietoris_rips(const FiniteMetricSpace& ms, int max_dim, double max_value) {
  if (max_dim < 0) throw Error("max_dim must be nonnegative");
  if (max_value < 0.0) throw Error("max_value must be nonnegative");
  const std::size_t n = ms.size();
  std::vector<std::vector<Vertex>> upper(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (ms(i, j) <= max_value) upper[i].push_back(static_cast<Vertex>(j));
  std::vector<ValueState> roots(n);
  std::vector<Simplex> out;
  enumerate_cliques(
      n, max_dim, upper, roots,
      [&](const ValueState& s, const std::vector<Vertex>& cur, Vertex v) -> std::optional<ValueState> {
        double value = s.value;
        for (Vertex u : cur) value = std::max(value, ms(u, v));
        if (value > max_value) return std::nullopt;
        return ValueState{value};
      },
      out);
  return FilteredComplex(std::move(out), n, max_dim, max_value, ComplexFlavor::VietorisRips);
}

FilteredComplex vietoris_rips(const FiniteMetricSpace& ms, int max_dim) {
  return vietoris_rips(ms, max_dim, radius(ms) + kTolerance);
}

namespace {

struct L2BallState {
  double value = 0.0;
  Point center;
};

struct LinfBallState {
  double value = 0.0;
  Point lo;
  Point hi;
};

}  // namespace

FilteredComplex cech(const PointCloud& cloud, int max_dim, double max_value) {
  if (max_dim < 0) throw Error("max_dim must be nonnegative");
  if (max_value < 0.0) throw Error("max_value must be nonnegative");
  if (cloud.norm() == Norm::L1) throw Error("unsupported norm: Cech complexes need l2 or linf");
  check_distinct(cloud);
  const std::size_t n = cloud.size();
  std::vector<std::vector<Vertex>> upper(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (0.5 * distance(cloud[i], cloud[j], cloud.norm()) <= max_value) upper[i].push_back(static_cast<Vertex>(j));
  std::vector<Simplex> out;
  if (cloud.norm() == Norm::Linf) {
    std::vector<LinfBallState> roots;
    roots.reserve(n);
    for (std::size_t i = 0; i < n; ++i) roots.push_back(LinfBallState{0.0, cloud[i], cloud[i]});
    enumerate_cliques(
        n, max_dim, upper, roots,
        [&](const LinfBallState& s, const std::vector<Vertex>&, Vertex v) -> std::optional<LinfBallState> {
          LinfBallState next{0.0, s.lo.cwiseMin(cloud[v]), s.hi.cwiseMax(cloud[v])};
          next.value = (next.hi - next.lo).maxCoeff() * 0.5;
          if (next.value > max_value) return std::nullopt;
          return next;
        },
        out);
  } else {
    std::vector<L2BallState> roots;
    roots.reserve(n);
    for (std::size_t i = 0; i < n; ++i) roots.push_back(L2BallState{0.0, cloud[i]});
    std::vector<Point> scratch;
    enumerate_cliques(
        n, max_dim, upper, roots,
        [&](const L2BallState& s, const std::vector<Vertex>& cur, Vertex v) -> std::optional<L2BallState> {
          const double reach = (cloud[v] - s.center).norm();
          if (reach <= s.value + 1e-12 * (1.0 + s.value)) return s;  // facet ball already encloses v
          scratch.clear();
          for (Vertex u : cur) scratch.push_back(cloud[u]);
          scratch.push_back(cloud[v]);
          Ball b = min_enclosing_ball(scratch, Norm::L2);
          L2BallState next{std::max(b.radius, s.value), std::move(b.center)};
          if (next.value > max_value) return std::nullopt;
          return next;
        },
        out);
    enforce_monotone(out, n, max_dim);
  }
  return FilteredComplex(std::move(out), n, max_dim, max_value, ComplexFlavor::Cech);
}

FilteredComplex cech(const PointCloud& cloud, int max_dim) {
  return cech(cloud, max_dim, circumradius(cloud) + kTolerance);
}

FilteredComplex build_filtration(std::size_t vertex_count, int max_dim, double max_value,
                                 const std::function<double(std::span<const Vertex>)>& value,
                                 ComplexFlavor flavor) {
  if (max_dim < 0) throw Error("max_dim must be nonnegative");
  std::vector<std::vector<Vertex>> upper(vertex_count);
  std::vector<ValueState> roots(vertex_count);
  for (std::size_t i = 0; i < vertex_count; ++i) {
    const Vertex single[1] = {static_cast<Vertex>(i)};
    roots[i].value = value(single);
    for (std::size_t j = i + 1; j < vertex_count; ++j) {
      const Vertex pair[2] = {static_cast<Vertex>(i), static_cast<Vertex>(j)};
      if (value(pair) <= max_value) upper[i].push_back(static_cast<Vertex>(j));
    }
  }
  std::vector<Simplex> out;
  std::vector<Vertex> buffer;
  enumerate_cliques(
      vertex_count, max_dim, upper, roots,
      [&](const ValueState& s, const std::vector<Vertex>& cur, Vertex v) -> std::optional<ValueState> {
        buffer = cur;
        buffer.push_back(v);
        const double x = std::max(s.value, value(buffer));
        if (x > max_value) return std::nullopt;
        return ValueState{x};
      },
      out);
  enforce_monotone(out, vertex_count, max_dim);
  return FilteredComplex(std::move(out), vertex_count, max_dim, max_value, flavor);
}

bool validate_interleaving(const FilteredComplex& vr, const FilteredComplex& cech_complex,
                           std::span<const double> sample_values) {
  if (vr.vertex_count() != cech_complex.vertex_count())
    throw Error("validate_interleaving: complexes are built on different point counts");
  for (double r : sample_values) {
    for (const auto& s : cech_complex.simplices()) {
      if (s.value > r) break;
      const auto idx = vr.find(s.vertices);
      if (idx) {
        if (vr[*idx].value > 2.0 * r) return false;
      } else if (s.dim() <= vr.max_dim() && vr.max_value() >= 2.0 * r) {
        return false;
      }
    }
    for (const auto& s : vr.simplices()) {
      if (s.value > 2.0 * r) break;
      const auto idx = cech_complex.find(s.vertices);
      if (idx) {
        if (cech_complex[*idx].value > 2.0 * r) return false;
      } else if (s.dim() <= cech_complex.max_dim() && cech_complex.max_value() >= 2.0 * r) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace lifespan
