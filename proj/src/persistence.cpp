#include "lifespan/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace lifespan {

namespace {

bool interval_less(const Interval& a, const Interval& b) {
  if (a.degree != b.degree) return a.degree < b.degree;
  if (a.birth != b.birth) return a.birth < b.birth;
  return a.death < b.death;
}

}  // namespace

PersistenceDiagram::PersistenceDiagram(std::vector<Interval> intervals, std::vector<std::string> warnings)
    : warnings_(std::move(warnings)) {
  intervals_.reserve(intervals.size());
  for (const auto& iv : intervals) {
    if (iv.degree < 0) throw Error("interval degree must be nonnegative");
    if (!(iv.birth <= iv.death)) throw Error("interval birth exceeds death");
    if (!iv.essential() && iv.death - iv.birth <= kZeroLength * std::max(1.0, std::abs(iv.death))) continue;
    intervals_.push_back(iv);
  }
  std::sort(intervals_.begin(), intervals_.end(), interval_less);
}

std::vector<Interval> PersistenceDiagram::in_degree(int degree) const {
  std::vector<Interval> out;
  for (const auto& iv : intervals_)
    if (iv.degree == degree) out.push_back(iv);
  return out;
}

int PersistenceDiagram::max_degree() const { return intervals_.empty() ? -1 : intervals_.back().degree; }

PersistenceDiagram PersistenceDiagram::scaled(double factor) const {
  std::vector<Interval> out = intervals_;
  for (auto& iv : out) {
    iv.birth *= factor;
    iv.death *= factor;
  }
  return PersistenceDiagram(std::move(out), warnings_);
}

namespace {

void check_degree(const FilteredComplex& fc, int max_degree) {
  if (max_degree < 0) throw Error("max_degree must be nonnegative");
  if (max_degree >= fc.max_dim()) {
    std::ostringstream os;
    os << "need simplices of dimension max_degree+1 = " << max_degree + 1 << " but the complex stops at "
       << fc.max_dim();
    throw Error(os.str());
  }
}

// Symmetric difference of two sorted index lists.
void add_column(std::vector<std::uint32_t>& target, const std::vector<std::uint32_t>& source,
                std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

}  // namespace

PersistenceDiagram compute_persistence(const FilteredComplex& fc, int max_degree) {
  check_degree(fc, max_degree);
  const std::size_t size = fc.size();
  std::vector<Interval> out;
  std::vector<std::string> warnings;
  std::vector<char> cleared(size, 0);

  // Degree 0: union-find over vertices, keyed by filtration index.
  {
    std::vector<std::uint32_t> parent(size);
    std::iota(parent.begin(), parent.end(), 0u);
    auto root = [&](std::uint32_t x) {
      while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
      }
      return x;
    };
    std::vector<std::uint32_t> vertex_index(fc.vertex_count(), 0);
    for (std::size_t i = 0; i < size; ++i)
      if (fc[i].dim() == 0) vertex_index[fc[i].vertices[0]] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < size; ++i) {
      const auto& s = fc[i];
      if (s.dim() != 1) continue;
      const auto a = root(vertex_index[s.vertices[0]]);
      const auto b = root(vertex_index[s.vertices[1]]);
      if (a == b) continue;
      const auto younger = std::max(a, b);
      const auto elder = std::min(a, b);
      out.push_back(Interval{0, fc[younger].value, s.value});
      parent[younger] = elder;
      cleared[i] = 1;
    }
    std::size_t survivors = 0;
    bool first = true;
    for (std::size_t i = 0; i < size; ++i) {
      if (fc[i].dim() != 0 || root(static_cast<std::uint32_t>(i)) != i) continue;
      if (first) {
        first = false;  // reduced homology: the oldest component carries no interval
        continue;
      }
      out.push_back(Interval{0, fc[i].value, kInfinity});
      ++survivors;
    }
    if (survivors > 0) {
      std::ostringstream os;
      os << survivors << " degree-0 classes survive the cap " << fc.max_value()
         << "; raise --max-filtration to resolve them";
      warnings.push_back(os.str());
    }
  }

  // Degrees >= 1: coboundary columns in reverse filtration order; the pivot
  // of a column is its earliest coface.
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<std::vector<std::uint32_t>> cofaces(size);
    std::vector<Vertex> face;
    for (std::size_t t = 0; t < size; ++t) {
      const auto& tau = fc[t];
      if (tau.dim() != d + 1) continue;
      for (std::size_t drop = 0; drop < tau.vertices.size(); ++drop) {
        face.clear();
        for (std::size_t k = 0; k < tau.vertices.size(); ++k)
          if (k != drop) face.push_back(tau.vertices[k]);
        const auto f = fc.find(face);
        if (!f) throw Error("complex is not closed under faces");
        cofaces[*f].push_back(static_cast<std::uint32_t>(t));
      }
    }
    std::unordered_map<std::uint32_t, std::uint32_t> pivot_owner;
    std::vector<std::vector<std::uint32_t>> reduced(size);
    std::vector<std::uint32_t> scratch;
    std::size_t survivors = 0;
    for (std::size_t i = size; i-- > 0;) {
      if (fc[i].dim() != d || cleared[i]) continue;
      std::vector<std::uint32_t> column = std::move(cofaces[i]);
      while (!column.empty()) {
        const auto it = pivot_owner.find(column.front());
        if (it == pivot_owner.end()) break;
        add_column(column, reduced[it->second], scratch);
      }
      if (column.empty()) {
        out.push_back(Interval{d, fc[i].value, kInfinity});
        ++survivors;
        continue;
      }
      const auto tau = column.front();
      out.push_back(Interval{d, fc[i].value, fc[tau].value});
      pivot_owner.emplace(tau, static_cast<std::uint32_t>(i));
      cleared[tau] = 1;
      reduced[i] = std::move(column);
    }
    if (survivors > 0) {
      std::ostringstream os;
      os << survivors << " degree-" << d << " classes survive the cap " << fc.max_value()
         << "; raise --max-filtration or --max-dim to resolve them";
      warnings.push_back(os.str());
    }
  }
  return PersistenceDiagram(std::move(out), std::move(warnings));
}

namespace {

using BitRow = std::vector<std::uint64_t>;

std::size_t gf2_rank(std::vector<BitRow> rows) {
  std::size_t rank = 0;
  if (rows.empty()) return 0;
  const std::size_t words = rows.front().size();
  for (std::size_t w = 0; w < words; ++w) {
    for (int bit = 0; bit < 64; ++bit) {
      const std::uint64_t mask = std::uint64_t{1} << bit;
      std::size_t pivot = rank;
      while (pivot < rows.size() && !(rows[pivot][w] & mask)) ++pivot;
      if (pivot == rows.size()) continue;
      std::swap(rows[rank], rows[pivot]);
      for (std::size_t r = 0; r < rows.size(); ++r)
        if (r != rank && (rows[r][w] & mask))
          for (std::size_t k = w; k < words; ++k) rows[r][k] ^= rows[rank][k];
      ++rank;
      if (rank == rows.size()) return rank;
    }
  }
  return rank;
}

}  // namespace

PersistenceDiagram brute_force_persistence(const FilteredComplex& fc, int max_degree) {
  check_degree(fc, max_degree);
  if (fc.size() > kBruteForceLimit) {
    std::ostringstream os;
    os << "brute-force persistence is capped at " << kBruteForceLimit << " simplices, got " << fc.size();
    throw Error(os.str());
  }
  std::vector<double> values;
  for (const auto& s : fc.simplices()) values.push_back(s.value);
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const std::size_t m = values.size();

  // Per-dimension position of each simplex and its critical-value level.
  std::vector<std::vector<std::size_t>> by_dim(static_cast<std::size_t>(fc.max_dim()) + 1);
  std::vector<std::size_t> position(fc.size()), level(fc.size());
  for (std::size_t i = 0; i < fc.size(); ++i) {
    auto& list = by_dim[static_cast<std::size_t>(fc[i].dim())];
    position[i] = list.size();
    list.push_back(i);
    level[i] = static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), fc[i].value) - values.begin());
  }
  auto boundary_row = [&](std::size_t simplex, std::size_t min_level) {
    const auto& s = fc[simplex];
    const auto& faces = by_dim[static_cast<std::size_t>(s.dim() - 1)];
    BitRow row((faces.size() + 63) / 64, 0);
    std::vector<Vertex> face;
    for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
      face.clear();
      for (std::size_t k = 0; k < s.vertices.size(); ++k)
        if (k != drop) face.push_back(s.vertices[k]);
      const auto f = *fc.find(face);
      if (level[f] < min_level) continue;
      row[position[f] / 64] ^= std::uint64_t{1} << (position[f] % 64);
    }
    return row;
  };

  std::vector<Interval> out;
  for (int k = 0; k <= max_degree; ++k) {
    const auto& cells = by_dim[static_cast<std::size_t>(k)];
    const auto& cofaces = by_dim[static_cast<std::size_t>(k + 1)];
    // rank of the reduced boundary out of C_k(K_a)
    std::vector<std::size_t> cycles(m);
    for (std::size_t a = 0; a < m; ++a) {
      std::size_t count = 0;
      std::vector<BitRow> rows;
      for (auto c : cells)
        if (level[c] <= a) {
          ++count;
          if (k > 0) rows.push_back(boundary_row(c, 0));
        }
      const std::size_t rank = k == 0 ? (count > 0 ? 1 : 0) : gf2_rank(std::move(rows));
      cycles[a] = count - rank;
    }
    // beta[a][b] = dim Z(K_a) - dim(B(K_b) within C(K_a))
    std::vector<std::vector<long>> beta(m, std::vector<long>(m, 0));
    for (std::size_t b = 0; b < m; ++b) {
      std::vector<BitRow> full;
      for (auto c : cofaces)
        if (level[c] <= b) full.push_back(boundary_row(c, 0));
      const std::size_t boundaries = gf2_rank(full);
      for (std::size_t a = 0; a <= b; ++a) {
        std::vector<BitRow> outside;
        for (auto c : cofaces)
          if (level[c] <= b) outside.push_back(boundary_row(c, a + 1));
        const std::size_t inside = boundaries - gf2_rank(std::move(outside));
        beta[a][b] = static_cast<long>(cycles[a]) - static_cast<long>(inside);
      }
    }
    auto B = [&](long a, long b) -> long {
      if (a < 0) return 0;
      return beta[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    };
    for (long i = 0; i < static_cast<long>(m); ++i) {
      for (long j = i + 1; j < static_cast<long>(m); ++j) {
        const long mult = B(i, j - 1) - B(i - 1, j - 1) - B(i, j) + B(i - 1, j);
        if (mult < 0) throw Error("brute-force persistence: negative multiplicity");
        for (long r = 0; r < mult; ++r)
          out.push_back(Interval{k, values[static_cast<std::size_t>(i)], values[static_cast<std::size_t>(j)]});
      }
      const long last = static_cast<long>(m) - 1;
      const long mult = B(i, last) - B(i - 1, last);
      if (mult < 0) throw Error("brute-force persistence: negative multiplicity");
      for (long r = 0; r < mult; ++r) out.push_back(Interval{k, values[static_cast<std::size_t>(i)], kInfinity});
    }
  }
  return PersistenceDiagram(std::move(out));
}

namespace {

// Kuhn augmenting paths on a dense boolean adjacency.
bool has_perfect_matching(const std::vector<std::vector<char>>& adj) {
  const std::size_t n = adj.size();
  std::vector<int> match_right(n, -1);
  std::vector<char> seen(n);
  auto augment = [&](auto&& self, std::size_t u) -> bool {
    for (std::size_t v = 0; v < n; ++v) {
      if (!adj[u][v] || seen[v]) continue;
      seen[v] = 1;
      if (match_right[v] < 0 || self(self, static_cast<std::size_t>(match_right[v]))) {
        match_right[v] = static_cast<int>(u);
        return true;
      }
    }
    return false;
  };
  for (std::size_t u = 0; u < n; ++u) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!augment(augment, u)) return false;
  }
  return true;
}

}  // namespace

double bottleneck_distance(const PersistenceDiagram& pd1, const PersistenceDiagram& pd2, int degree) {
  std::vector<Interval> a, b;
  std::vector<double> ea, eb;
  for (const auto& iv : pd1.in_degree(degree)) (iv.essential() ? ea.push_back(iv.birth) : a.push_back(iv));
  for (const auto& iv : pd2.in_degree(degree)) (iv.essential() ? eb.push_back(iv.birth) : b.push_back(iv));
  if (ea.size() != eb.size()) return kInfinity;
  std::sort(ea.begin(), ea.end());
  std::sort(eb.begin(), eb.end());
  double essential = 0.0;
  for (std::size_t i = 0; i < ea.size(); ++i) essential = std::max(essential, std::abs(ea[i] - eb[i]));

  const std::size_t n = a.size(), m = b.size();
  if (n + m == 0) return essential;
  // Left: a_0..a_{n-1}, diag(b_0)..diag(b_{m-1}); right: b_0..b_{m-1}, diag(a_0)..diag(a_{n-1}).
  const std::size_t total = n + m;
  std::vector<std::vector<double>> cost(total, std::vector<double>(total, kInfinity));
  auto half = [](const Interval& iv) { return 0.5 * (iv.death - iv.birth); };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j)
      cost[i][j] = std::max(std::abs(a[i].birth - b[j].birth), std::abs(a[i].death - b[j].death));
    cost[i][m + i] = half(a[i]);
  }
  for (std::size_t j = 0; j < m; ++j) {
    cost[n + j][j] = half(b[j]);
    for (std::size_t i = 0; i < n; ++i) cost[n + j][m + i] = 0.0;
  }
  std::vector<double> candidates;
  for (const auto& row : cost)
    for (double c : row)
      if (c != kInfinity) candidates.push_back(c);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::size_t lo = 0, hi = candidates.size() - 1;
  std::vector<std::vector<char>> adj(total, std::vector<char>(total));
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    for (std::size_t u = 0; u < total; ++u)
      for (std::size_t v = 0; v < total; ++v) adj[u][v] = cost[u][v] <= candidates[mid];
    if (has_perfect_matching(adj))
      hi = mid;
    else
      lo = mid + 1;
  }
  return std::max(essential, candidates[lo]);
}

double extinction_time(const PersistenceDiagram& pd) {
  double out = 0.0;
  for (const auto& iv : pd.intervals())
    if (!iv.essential()) out = std::max(out, iv.death);
  return out;
}

std::vector<Lifespan> lifespans(const PersistenceDiagram& pd, int degree) {
  std::vector<Lifespan> out;
  for (const auto& iv : pd.in_degree(degree)) out.push_back(Lifespan{iv.birth, iv.death, iv.lifespan()});
  return out;
}

}  // namespace lifespan
