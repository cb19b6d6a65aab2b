#pragma once

// Inequality verification: evaluates each lifespan/extinction bound against
// computed diagrams, one row per (theorem, interval), plus the PCA vs.
// lifespan comparison table.

#include "lifespan/generators.hpp"
#include "lifespan/io.hpp"
#include "lifespan/persistence.hpp"
#include "lifespan/widths.hpp"

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lifespan {

/// Theorem ids T1..T11 are checked inequalities. The remaining ids are
/// report-only measurements (status Measured) except HcdefRad, which asserts
/// hcdef <= rad.
enum class Theorem { T1, T2, T3, T4, T5, T6, T7, T8, T9, T10, T11, HcdefRad, CutLocus, UrysohnSandwich };
std::string_view to_string(Theorem t);
Theorem parse_theorem(std::string_view text);
/// Comma-separated ids, e.g. "T1,T4,T9".
std::set<Theorem> parse_theorem_list(std::string_view text);

enum class CheckStatus { Satisfied, Violated, Inconclusive, Measured };
std::string_view to_string(CheckStatus s);

inline constexpr double kExactTolerance = 1e-6;

struct BoundCheck {
  Theorem theorem = Theorem::T1;
  int degree = -1;  // -1 for rows not tied to one interval
  double birth = 0.0;
  double death = 0.0;
  double measured = 0.0;
  double bound = 0.0;
  Exactness exactness = Exactness::Exact;
  double slack = 0.0;  // bound - measured
  double tolerance = kExactTolerance;
  /// Extra band below -tolerance reported as inconclusive (Heuristic lower estimates).
  double band = 0.0;
  CheckStatus status = CheckStatus::Satisfied;
  std::string note;

  bool satisfied() const { return status == CheckStatus::Satisfied; }
};

/// Fills slack and status from measured, bound, tolerance and band.
BoundCheck make_check(Theorem t, int degree, const Interval* iv, double measured, double bound, Exactness e,
                      double band = 0.0, std::string note = {});

struct TheoremSummary {
  Theorem theorem;
  std::size_t rows = 0;
  std::size_t satisfied = 0;
  std::size_t violated = 0;
  std::size_t inconclusive = 0;
  std::size_t measured = 0;
  double worst_slack = kInfinity;
};

struct ExperimentReport {
  std::string dataset;
  std::size_t points = 0;
  std::size_t dim = 0;  // 0 for abstract metric spaces
  std::string norm;
  std::optional<PersistenceDiagram> cech;
  std::optional<PersistenceDiagram> vr;
  std::vector<std::pair<std::string, WidthEstimate>> widths;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<BoundCheck> checks;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, double>> timing_ms;

  std::vector<TheoremSummary> summary() const;
  /// A violated row whose bound is Exact or an upper estimate.
  bool has_certified_violation() const;
  /// Everything except the "run" object (timing) is deterministic.
  Json to_json() const;
  std::string to_csv() const;
};

struct VerifyConfig {
  /// Empty selects every applicable check; listed checks must be applicable.
  std::set<Theorem> checks;
  int max_dim = 2;
  std::optional<double> max_filtration;
  int exact_limit = 8;
  int spread_limit = 20;
  int kw_restarts = 16;
  double perturb_eps = 0.05;
  std::uint64_t seed = 1;
  /// The spanning-tree core for T5 is used when its acyclicity nerve has at
  /// most this many top-dimensional simplices.
  double nerve_limit = 3.0e5;
  /// Additional cores for T5 (any certificate but None).
  std::vector<SimplicialCore> extra_cores;
  /// Multiply every finite death by 1.1 before checking (checker self-test).
  bool inject_corruption = false;
};

ExperimentReport verify_bounds(const Dataset& data, const VerifyConfig& config);

/// Acceptance datasets covering T1..T11.
std::vector<Dataset> paper_suite(std::uint64_t seed);
std::vector<ExperimentReport> run_suite(const std::vector<Dataset>& suite, const VerifyConfig& config);
Json suite_to_json(const std::vector<ExperimentReport>& reports);

struct PcaRow {
  std::string cloud;
  int k = 0;
  double pca_residual = 0.0;
  double kw = 0.0;
  Exactness kw_exactness = Exactness::Exact;
  double max_lifespan = 0.0;
};

struct PcaTable {
  std::vector<PcaRow> rows;
  double corr_pca_lifespan = 0.0;  // Pearson; NaN when undefined
  double corr_kw_lifespan = 0.0;
  std::string to_csv() const;
};

PcaTable pca_comparison(const std::vector<Dataset>& clouds, int k_max, int kw_restarts = 16);

/// Runs fn(0..n-1) on up to PB_THREADS (default: hardware) threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);
std::size_t thread_budget();

}  // namespace lifespan
