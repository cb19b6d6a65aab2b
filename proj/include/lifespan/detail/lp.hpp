#pragma once

// Small dense linear programs: maximize c.x subject to row constraints and
// x >= 0. Two-phase tableau simplex with Bland's rule.

#include <vector>

namespace lifespan::detail {

enum class RowSense { LessEqual, GreaterEqual, Equal };

struct LinearProgram {
  std::size_t variables = 0;
  std::vector<double> objective;  // maximized; empty means pure feasibility
  std::vector<std::vector<double>> rows;
  std::vector<RowSense> senses;
  std::vector<double> rhs;

  void add_row(std::vector<double> coefficients, RowSense sense, double bound);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  std::vector<double> x;
};

LpResult solve(const LinearProgram& lp, double eps = 1e-10);

}  // namespace lifespan::detail
