#include "lifespan/detail/lp.hpp"

#include "lifespan/metric_core.hpp"

#include <cmath>
#include <limits>

namespace lifespan::detail {

void LinearProgram::add_row(std::vector<double> coefficients, RowSense sense, double bound) {
  if (coefficients.size() != variables) throw Error("linear program row has the wrong width");
  rows.push_back(std::move(coefficients));
  senses.push_back(sense);
  rhs.push_back(bound);
}

namespace {

// Tableau with rows 0..m-1 for constraints and the objective row last; the
// last column holds the right-hand side.
class Tableau {
 public:
  Tableau(std::size_t m, std::size_t cols) : m_(m), cols_(cols), data_((m + 1) * (cols + 1), 0.0), basis_(m, 0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  std::size_t& basis(std::size_t r) { return basis_[r]; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    nonzero_.clear();
    for (std::size_t k = 0; k <= cols_; ++k)
      if (at(r, k) != 0.0) {
        at(r, k) /= p;
        nonzero_.push_back(k);
      }
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t k : nonzero_) at(i, k) -= f * at(r, k);
    }
    basis_[r] = c;
  }

  // Minimizes the objective row (reduced costs stored as-is) over columns
  // with allowed[c]. Returns false if unbounded. Dantzig pricing, switching
  // to Bland's rule after a run of degenerate pivots.
  bool optimize(const std::vector<char>& allowed, double eps) {
    std::size_t degenerate = 0;
    for (;;) {
      const bool bland = degenerate > 50;
      std::size_t enter = cols_;
      double most = -eps;
      for (std::size_t c = 0; c < cols_; ++c)
        if (allowed[c] && at(m_, c) < most) {
          enter = c;
          if (bland) break;
          most = at(m_, c);
        }
      if (enter == cols_) return true;
      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m_; ++r) {
        const double a = at(r, enter);
        if (a <= eps) continue;
        const double ratio = rhs(r) / a;
        if (ratio < best - eps || (std::abs(ratio - best) <= eps && leave < m_ && basis_[r] < basis_[leave])) {
          best = ratio;
          leave = r;
        }
      }
      if (leave == m_) return false;
      degenerate = best <= eps ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
  }

 private:
  std::size_t m_, cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nonzero_;
};

}  // namespace

LpResult solve(const LinearProgram& lp, double eps) {
  const std::size_t n = lp.variables;
  const std::size_t m = lp.rows.size();
  std::size_t slacks = 0, artificials = 0;
  for (std::size_t r = 0; r < m; ++r) {
    const bool flip = lp.rhs[r] < 0.0;
    RowSense s = lp.senses[r];
    if (flip && s != RowSense::Equal) s = s == RowSense::LessEqual ? RowSense::GreaterEqual : RowSense::LessEqual;
    if (s != RowSense::Equal) ++slacks;
    if (s != RowSense::LessEqual) ++artificials;
  }
  const std::size_t cols = n + slacks + artificials;
  Tableau t(m, cols);
  std::size_t next_slack = n, next_art = n + slacks;
  std::vector<char> is_art(cols, 0);
  for (std::size_t r = 0; r < m; ++r) {
    const double sign = lp.rhs[r] < 0.0 ? -1.0 : 1.0;
    RowSense s = lp.senses[r];
    if (sign < 0 && s != RowSense::Equal) s = s == RowSense::LessEqual ? RowSense::GreaterEqual : RowSense::LessEqual;
    for (std::size_t c = 0; c < n; ++c) t.at(r, c) = sign * lp.rows[r][c];
    t.rhs(r) = sign * lp.rhs[r];
    if (s == RowSense::LessEqual) {
      t.at(r, next_slack) = 1.0;
      t.basis(r) = next_slack++;
    } else {
      if (s == RowSense::GreaterEqual) t.at(r, next_slack++) = -1.0;
      t.at(r, next_art) = 1.0;
      is_art[next_art] = 1;
      t.basis(r) = next_art++;
    }
  }

  std::vector<char> allowed(cols, 1);
  if (artificials > 0) {
    // Phase 1: minimize the sum of artificials, expressed in nonbasic terms.
    for (std::size_t r = 0; r < m; ++r)
      if (is_art[t.basis(r)])
        for (std::size_t c = 0; c <= cols; ++c)
          if (!is_art[c] || c == cols) t.at(m, c) -= t.at(r, c);
    t.optimize(allowed, eps);
    if (-t.rhs(m) > 1e-7) return LpResult{LpStatus::Infeasible, 0.0, {}};
    // Drive remaining artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
      if (!is_art[t.basis(r)]) continue;
      for (std::size_t c = 0; c < cols; ++c)
        if (!is_art[c] && std::abs(t.at(r, c)) > 1e-9) {
          t.pivot(r, c);
          break;
        }
    }
    for (std::size_t c = 0; c < cols; ++c)
      if (is_art[c]) allowed[c] = 0;
  }

  // Phase 2 minimizes -c.x.
  for (std::size_t c = 0; c <= cols; ++c) t.at(m, c) = 0.0;
  for (std::size_t c = 0; c < n && c < lp.objective.size(); ++c) t.at(m, c) = -lp.objective[c];
  for (std::size_t r = 0; r < m; ++r) {
    const double f = t.at(m, t.basis(r));
    if (f == 0.0) continue;
    for (std::size_t c = 0; c <= cols; ++c) t.at(m, c) -= f * t.at(r, c);
  }
  if (!t.optimize(allowed, eps)) return LpResult{LpStatus::Unbounded, 0.0, {}};

  LpResult out;
  out.status = LpStatus::Optimal;
  out.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    if (t.basis(r) < n) out.x[t.basis(r)] = t.rhs(r);
  out.value = 0.0;
  for (std::size_t c = 0; c < n && c < lp.objective.size(); ++c) out.value += lp.objective[c] * out.x[c];
  return out;
}

}  // namespace lifespan::detail
