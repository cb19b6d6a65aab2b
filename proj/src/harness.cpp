#include "lifespan/harness.hpp"

#include "lifespan/complexes.hpp"
#include "lifespan/detail/core_geometry.hpp"
#include "lifespan/geometry_cores.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace lifespan {

namespace {

constexpr std::pair<Theorem, std::string_view> kTheoremNames[] = {
    {Theorem::T1, "T1"},
    {Theorem::T2, "T2"},
    {Theorem::T3, "T3"},
    {Theorem::T4, "T4"},
    {Theorem::T5, "T5"},
    {Theorem::T6, "T6"},
    {Theorem::T7, "T7"},
    {Theorem::T8, "T8"},
    {Theorem::T9, "T9"},
    {Theorem::T10, "T10"},
    {Theorem::T11, "T11"},
    {Theorem::HcdefRad, "hcdef_rad"},
    {Theorem::CutLocus, "cut_locus"},
    {Theorem::UrysohnSandwich, "urysohn_sandwich"},
};

thread_local bool t_in_worker = false;

Json number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return nullptr;
  return x;
}

std::string trim_copy(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

PersistenceDiagram inflate_deaths(const PersistenceDiagram& pd, double factor) {
  std::vector<Interval> out;
  for (auto iv : pd.intervals()) {
    if (!iv.essential()) iv.death *= factor;
    out.push_back(iv);
  }
  auto warnings = pd.warnings();
  warnings.push_back("deaths inflated by factor " + format_number(factor) + " (corruption self-test)");
  return PersistenceDiagram(std::move(out), std::move(warnings));
}

bool has_essential(const PersistenceDiagram& pd) {
  return std::any_of(pd.intervals().begin(), pd.intervals().end(), [](const Interval& iv) { return iv.essential(); });
}

std::vector<detail::Cell> core_cells(const SimplicialCore& core) {
  std::vector<detail::Cell> out;
  for (const auto& c : core.cells) {
    if (c.size() < 2) continue;
    detail::Cell cell;
    for (auto i : c) cell.push_back(core.vertices[i]);
    out.push_back(std::move(cell));
  }
  if (out.empty())
    for (const auto& v : core.vertices) out.push_back({v});
  return out;
}

/// Triangle fan of the planar hull (or its degenerate segment / point).
std::vector<detail::Cell> hull_cells(const PointCloud& cloud) {
  const Polygon2D hull = convex_hull_2d(cloud.points());
  auto lift = [](const Eigen::Vector2d& v) {
    Point p(2);
    p << v.x(), v.y();
    return p;
  };
  std::vector<detail::Cell> out;
  const auto& v = hull.vertices;
  if (hull.kind != PolygonKind::Polygon) {
    detail::Cell cell;
    for (const auto& q : v) cell.push_back(lift(q));
    out.push_back(std::move(cell));
    return out;
  }
  for (std::size_t i = 1; i + 1 < v.size(); ++i) out.push_back({lift(v[0]), lift(v[i]), lift(v[i + 1])});
  return out;
}

PointCloud perturb(const PointCloud& cloud, double eps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto dim = static_cast<Eigen::Index>(cloud.dim());
  std::vector<Point> out;
  for (const auto& p : cloud.points()) {
    Point delta(dim);
    if (cloud.norm() == Norm::Linf) {
      for (Eigen::Index k = 0; k < dim; ++k) delta[k] = eps * (2.0 * unit(rng) - 1.0);
    } else {
      for (Eigen::Index k = 0; k < dim; ++k) delta[k] = gauss(rng);
      const double r = eps * std::pow(unit(rng), 1.0 / static_cast<double>(dim));
      delta *= r / std::max(delta.norm(), 1e-300);
    }
    out.push_back(p + delta);
  }
  return PointCloud(std::move(out), cloud.norm());
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) return std::nan("");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0 || syy <= 0) return std::nan("");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

std::string_view to_string(Theorem t) {
  for (const auto& [id, name] : kTheoremNames)
    if (id == t) return name;
  return "?";
}

Theorem parse_theorem(std::string_view text) {
  for (const auto& [id, name] : kTheoremNames)
    if (name == text) return id;
  throw Error("unknown check '" + std::string(text) + "'");
}

std::set<Theorem> parse_theorem_list(std::string_view text) {
  std::set<Theorem> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto piece = trim_copy(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos));
    if (!piece.empty()) out.insert(parse_theorem(piece));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Satisfied: return "satisfied";
    case CheckStatus::Violated: return "violated";
    case CheckStatus::Inconclusive: return "inconclusive";
    case CheckStatus::Measured: return "measured";
  }
  return "measured";
}

BoundCheck make_check(Theorem t, int degree, const Interval* iv, double measured, double bound, Exactness e,
                      double band, std::string note) {
  BoundCheck c;
  c.theorem = t;
  c.degree = degree;
  if (iv) {
    c.birth = iv->birth;
    c.death = iv->death;
  }
  c.measured = measured;
  c.bound = bound;
  c.exactness = e;
  c.slack = bound - measured;
  c.band = band;
  c.note = std::move(note);
  if (c.slack >= -c.tolerance)
    c.status = CheckStatus::Satisfied;
  else if (e == Exactness::Heuristic && c.slack >= -c.tolerance - band)
    c.status = CheckStatus::Inconclusive;
  else
    c.status = CheckStatus::Violated;
  return c;
}

std::size_t thread_budget() {
  if (const char* env = std::getenv("PB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(thread_budget(), n);
  if (workers <= 1 || t_in_worker) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    t_in_worker = true;
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
    t_in_worker = false;
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<TheoremSummary> ExperimentReport::summary() const {
  std::map<Theorem, TheoremSummary> by;
  for (const auto& c : checks) {
    auto& s = by.try_emplace(c.theorem, TheoremSummary{c.theorem}).first->second;
    ++s.rows;
    switch (c.status) {
      case CheckStatus::Satisfied: ++s.satisfied; break;
      case CheckStatus::Violated: ++s.violated; break;
      case CheckStatus::Inconclusive: ++s.inconclusive; break;
      case CheckStatus::Measured: ++s.measured; break;
    }
    if (c.status != CheckStatus::Measured) s.worst_slack = std::min(s.worst_slack, c.slack);
  }
  std::vector<TheoremSummary> out;
  for (auto& [t, s] : by) out.push_back(s);
  return out;
}

bool ExperimentReport::has_certified_violation() const {
  return std::any_of(checks.begin(), checks.end(), [](const BoundCheck& c) {
    return c.status == CheckStatus::Violated && c.exactness != Exactness::Heuristic;
  });
}

Json ExperimentReport::to_json() const {
  Json out;
  out["dataset"] = {{"name", dataset}, {"points", points}, {"dim", dim}, {"norm", norm}};
  Json diagrams = Json::object();
  if (cech) diagrams["cech"] = diagram_to_json(*cech);
  if (vr) diagrams["vr"] = diagram_to_json(*vr);
  out["diagrams"] = diagrams;
  Json w = Json::array();
  for (const auto& [name, est] : widths) {
    Json entry = {{"name", name}};
    entry.update(lifespan::to_json(est));
    entry["value"] = number(est.value);
    w.push_back(entry);
  }
  out["widths"] = w;
  Json sc = Json::object();
  for (const auto& [name, v] : scalars) sc[name] = number(v);
  out["scalars"] = sc;
  Json rows = Json::array();
  for (const auto& c : checks) {
    Json row = {{"theorem", to_string(c.theorem)},
                {"degree", c.degree},
                {"birth", number(c.birth)},
                {"death", number(c.death)},
                {"measured", number(c.measured)},
                {"bound", number(c.bound)},
                {"bound_exactness", to_string(c.exactness)},
                {"slack", number(c.slack)},
                {"tolerance", c.tolerance},
                {"band", c.band},
                {"status", to_string(c.status)},
                {"satisfied", c.satisfied()}};
    if (!c.note.empty()) row["note"] = c.note;
    rows.push_back(row);
  }
  out["checks"] = rows;
  Json sum = Json::array();
  for (const auto& s : summary())
    sum.push_back({{"theorem", to_string(s.theorem)},
                   {"rows", s.rows},
                   {"satisfied", s.satisfied},
                   {"violated", s.violated},
                   {"inconclusive", s.inconclusive},
                   {"measured", s.measured},
                   {"worst_slack", number(s.worst_slack)}});
  out["summary"] = sum;
  out["warnings"] = warnings;
  out["passed"] = !has_certified_violation();
  Json timing = Json::object();
  for (const auto& [name, ms] : timing_ms) timing[name] = ms;
  out["run"] = {{"timestamp", utc_timestamp()}, {"timing_ms", timing}};
  return out;
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream os;
  os << "dataset,theorem,degree,birth,death,measured,bound,bound_exactness,slack,tolerance,status,note\n";
  for (const auto& c : checks) {
    std::string note = c.note;
    std::replace(note.begin(), note.end(), ',', ';');
    os << dataset << ',' << to_string(c.theorem) << ',' << c.degree << ',' << format_number(c.birth) << ','
       << format_number(c.death) << ',' << format_number(c.measured) << ',' << format_number(c.bound) << ','
       << to_string(c.exactness) << ',' << format_number(c.slack) << ',' << format_number(c.tolerance) << ','
       << to_string(c.status) << ',' << note << '\n';
  }
  return os.str();
}

ExperimentReport verify_bounds(const Dataset& data, const VerifyConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.max_dim < 1) throw Error("max_dim must be at least 1");
  ExperimentReport report;
  report.dataset = data.name;
  const PointCloud* cloud = data.cloud ? &*data.cloud : nullptr;
  const FiniteMetricSpace ms = data.metric_space();
  const std::size_t n = ms.size();
  report.points = n;
  report.dim = cloud ? cloud->dim() : 0;
  report.norm = cloud ? std::string(to_string(cloud->norm())) : "metric";
  const int max_degree = config.max_dim - 1;

  const bool l2 = cloud && cloud->norm() == Norm::L2;
  const bool cech_ok = cloud && cloud->norm() != Norm::L1;
  const bool plane = l2 && cloud->dim() == 2;
  auto applicable = [&](Theorem t) -> std::string {
    switch (t) {
      case Theorem::T1:
      case Theorem::T2:
      case Theorem::T3:
      case Theorem::T4:
      case Theorem::T5:
      case Theorem::T10:
      case Theorem::UrysohnSandwich:
        return l2 ? "" : "needs an l2 point cloud";
      case Theorem::T6:
      case Theorem::CutLocus:
        return plane ? "" : "needs a planar l2 point cloud (convex certificate)";
      case Theorem::T11:
        return cloud ? "" : "needs point coordinates to perturb";
      case Theorem::T7:
      case Theorem::T8:
      case Theorem::T9:
      case Theorem::HcdefRad:
        return "";
    }
    return "unknown";
  };
  for (auto t : config.checks)
    if (const auto why = applicable(t); !why.empty())
      throw Error("check " + std::string(to_string(t)) + " " + why);
  auto enabled = [&](Theorem t) {
    return config.checks.empty() ? applicable(t).empty() : config.checks.count(t) > 0;
  };
  auto any = [&](std::initializer_list<Theorem> ts) {
    return std::any_of(ts.begin(), ts.end(), enabled);
  };
  using T = Theorem;
  const bool need_cech =
      cech_ok && any({T::T1, T::T2, T::T3, T::T4, T::T5, T::T6, T::T9, T::T10, T::T11, T::CutLocus});
  const bool need_vr = any({T::T7, T::T8, T::T9, T::T11});
  const int ambient = cloud ? static_cast<int>(cloud->dim()) : 0;
  const int kw_top = l2 ? std::min(max_degree, ambient - 1) : -1;
  const bool need_kw = any({T::T1, T::T2, T::T3, T::T10, T::UrysohnSandwich});

  // Independent computations, each writing only its own slot.
  std::optional<PersistenceDiagram> cech_pd, vr_pd, cech_pert, vr_pert;
  double perturb_dh = 0.0;
  std::vector<std::optional<WidthEstimate>> kw(static_cast<std::size_t>(std::max(kw_top + 1, 0)));
  std::optional<DeficiencyResult> cdef;
  std::vector<std::pair<std::string, WidthEstimate>> uber;
  std::optional<WidthEstimate> mst_conv;
  std::optional<std::pair<double, std::string>> convex_bound;
  std::optional<WidthEstimate> spr;
  std::optional<TightSpanResult> hcdef;
  struct SubsampleRun {
    std::vector<std::size_t> indices;
    TightSpanResult hcdef;
    PersistenceDiagram vr;
  };
  std::optional<SubsampleRun> sub;
  std::optional<double> cut_locus;
  std::vector<std::string> task_warnings;
  std::mutex warn_mutex;
  auto warn = [&](std::string w) {
    std::lock_guard lock(warn_mutex);
    task_warnings.push_back(std::move(w));
  };

  auto cech_of = [&](const PointCloud& c) {
    const FilteredComplex fc =
        config.max_filtration ? cech(c, config.max_dim, *config.max_filtration) : cech(c, config.max_dim);
    return compute_persistence(fc, max_degree);
  };
  auto vr_of = [&](const FiniteMetricSpace& m) {
    const FilteredComplex fc = config.max_filtration ? vietoris_rips(m, config.max_dim, *config.max_filtration)
                                                     : vietoris_rips(m, config.max_dim);
    return compute_persistence(fc, max_degree);
  };

  std::vector<std::pair<std::string, std::function<void()>>> tasks;
  if (need_cech) tasks.emplace_back("cech", [&] { cech_pd = cech_of(*cloud); });
  if (need_vr) tasks.emplace_back("vr", [&] { vr_pd = vr_of(ms); });
  if (need_kw)
    for (int k = 0; k <= kw_top; ++k)
      tasks.emplace_back("kw_" + std::to_string(k), [&, k] {
        kw[static_cast<std::size_t>(k)] = kolmogorov_width(*cloud, k, config.kw_restarts);
      });
  if (enabled(T::T4)) {
    tasks.emplace_back("cdef", [&] {
      CdefOptions opt;
      opt.seed = config.seed;
      cdef = convexity_deficiency(*cloud, opt);
    });
  }
  if (enabled(T::T5)) {
    // Slot 0: the minimum enclosing ball center; slot 1: the spanning tree when
    // its acyclicity nerve is affordable; then the supplied cores.
    const std::size_t slots = 2 + config.extra_cores.size();
    uber.resize(slots);
    double nerve_top = 1.0;
    for (std::size_t j = 0; j <= cloud->dim() && n >= 2; ++j)
      nerve_top = nerve_top * static_cast<double>(n - 1 - std::min(j, n - 1)) / static_cast<double>(j + 1);
    const bool use_mst = n >= 2 && nerve_top <= config.nerve_limit;
    if (!use_mst) report.warnings.push_back("spanning-tree core skipped: acyclicity nerve too large");
    for (std::size_t i = 0; i < slots; ++i)
      tasks.emplace_back("uberspread_" + std::to_string(i), [&, i, use_mst] {
        if (i == 0) {
          const Ball ball = min_enclosing_ball(*cloud);
          SimplicialCore point;
          point.vertices = {ball.center};
          point.cells = {{0}};
          point.certificate = CoreCertificate::Point;
          point.status = CertificateStatus::Proven;
          uber[0] = {"point", uberspread_upper(*cloud, point)};
        } else if (i == 1) {
          if (use_mst) uber[1] = {"mst", uberspread_upper(*cloud, mst_core(*cloud))};
        } else {
          const auto& core = config.extra_cores[i - 2];
          uber[i] = {"core_" + std::to_string(i - 1) + "_" + std::string(to_string(core.certificate)),
                     uberspread_upper(*cloud, core)};
        }
      });
  }
  if (enabled(T::T3) && plane && n >= 2)
    tasks.emplace_back("mst_conv", [&] {
      const SimplicialCore core = mst_core(*cloud);
      const auto cells = core_cells(core);
      WidthEstimate w;
      w.kind = WidthKind::TW_upper;
      w.k = 1;
      w.exactness = Exactness::UpperBound;
      w.value = detail::lipschitz_sup(
          hull_cells(*cloud), [&](const Point& y) { return detail::distance_to_cells(y, cells); }, 1e-6);
      w.witness = core;
      mst_conv = std::move(w);
    });
  if (enabled(T::T6))
    tasks.emplace_back("convex_cores", [&] {
      const Ball ball = min_enclosing_ball(*cloud);
      double best = convex_core_lifespan_bound(*cloud, disk_core(ball.center, ball.radius));
      std::string which = "disk";
      const Polygon2D hull = convex_hull_2d(cloud->points());
      if (hull.kind == PolygonKind::Polygon) {
        const double h = convex_core_lifespan_bound(*cloud, polygon_core(hull));
        if (h < best) best = h, which = "hull";
      }
      convex_bound = {best, which};
    });
  if (enabled(T::T7)) tasks.emplace_back("spread", [&] { spr = spread(ms, config.spread_limit); });
  if (enabled(T::T8) || enabled(T::HcdefRad))
    tasks.emplace_back("hcdef", [&] { hcdef = hyperconvexity_deficiency(ms, config.exact_limit, config.seed); });
  if (enabled(T::T8) && n > static_cast<std::size_t>(config.exact_limit) && config.exact_limit >= 2)
    tasks.emplace_back("hcdef_subsample", [&] {
      SubsampleRun run;
      const auto m = static_cast<std::size_t>(config.exact_limit);
      for (std::size_t i = 0; i < m; ++i) run.indices.push_back(i * n / m);
      const FiniteMetricSpace subspace = ms.subspace(run.indices);
      run.hcdef = hyperconvexity_deficiency(subspace, config.exact_limit, config.seed);
      run.vr = vr_of(subspace);
      sub = std::move(run);
    });
  if (enabled(T::T11)) {
    tasks.emplace_back("perturbation", [&] {
      const PointCloud moved = perturb(*cloud, config.perturb_eps, config.seed ^ 0x9e3779b97f4a7c15ULL);
      perturb_dh = hausdorff_distance(*cloud, moved);
      if (cech_ok) cech_pert = cech_of(moved);
      vr_pert = vr_of(pairwise_distances(moved));
    });
  }
  if (enabled(T::CutLocus))
    tasks.emplace_back("cut_locus", [&] {
      const Polygon2D hull = convex_hull_2d(cloud->points());
      if (hull.kind != PolygonKind::Polygon) {
        warn("cut locus skipped: degenerate hull");
        return;
      }
      cut_locus = core_hausdorff(*cloud, medial_axis_core(hull));
    });

  std::vector<double> task_ms(tasks.size(), 0.0);
  parallel_for(tasks.size(), [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    tasks[i].second();
    task_ms[i] = elapsed_ms(t0);
  });
  for (std::size_t i = 0; i < tasks.size(); ++i) report.timing_ms.emplace_back(tasks[i].first, task_ms[i]);
  report.warnings.insert(report.warnings.end(), task_warnings.begin(), task_warnings.end());

  if (config.inject_corruption) {
    if (cech_pd) cech_pd = inflate_deaths(*cech_pd, 1.1);
    if (vr_pd) vr_pd = inflate_deaths(*vr_pd, 1.1);
  }
  for (const auto* pd : {&cech_pd, &vr_pd})
    if (*pd)
      for (const auto& w : (*pd)->warnings()) report.warnings.push_back(w);
  report.cech = cech_pd;
  report.vr = vr_pd;

  // Scalars.
  const double rad = radius(ms);
  report.scalars.emplace_back("diameter", diameter(ms));
  report.scalars.emplace_back("rad", rad);
  double circ = 0.0;
  if (cech_ok) {
    circ = circumradius(*cloud);
    report.scalars.emplace_back("circumradius", circ);
  }

  auto& rows = report.checks;
  auto finite = [](const PersistenceDiagram& pd) {
    std::vector<Interval> out;
    for (const auto& iv : pd.intervals())
      if (!iv.essential()) out.push_back(iv);
    return out;
  };
  const bool cech_trunc = cech_pd && has_essential(*cech_pd);
  const bool vr_trunc = vr_pd && has_essential(*vr_pd);
  if (cech_trunc || vr_trunc)
    report.warnings.push_back("essential classes excluded from checks; extinction rows skipped for truncated diagrams");

  std::map<int, double> kw_value;
  std::map<int, Exactness> kw_exact;
  for (std::size_t k = 0; k < kw.size(); ++k)
    if (kw[k]) {
      kw_value[static_cast<int>(k)] = kw[k]->value;
      // The search value is an upper bound on KW, so a failure against it is genuine.
      kw_exact[static_cast<int>(k)] = kw[k]->exactness == Exactness::Exact ? Exactness::Exact : Exactness::UpperBound;
      report.widths.emplace_back("KW_" + std::to_string(k), *kw[k]);
    }

  // T1: d - b <= KW_k for degree k < N.
  if (enabled(T::T1) && cech_pd)
    for (const auto& iv : finite(*cech_pd))
      if (kw_value.count(iv.degree))
        rows.push_back(make_check(T::T1, iv.degree, &iv, iv.lifespan(), kw_value[iv.degree], kw_exact[iv.degree]));

  // T2: d - b <= AW_{k-1}(conv X) <= KW_{k-1} (projection onto the flat).
  if (enabled(T::T2) && cech_pd) {
    for (const auto& iv : finite(*cech_pd))
      if (iv.degree >= 1 && kw_value.count(iv.degree - 1))
        rows.push_back(make_check(T::T2, iv.degree, &iv, iv.lifespan(), kw_value[iv.degree - 1], Exactness::UpperBound,
                                  0.0, "flat core of dimension " + std::to_string(iv.degree - 1)));
  }
  if (enabled(T::UrysohnSandwich))
    for (const auto& [k, v] : kw_value)
      rows.push_back(make_check(T::UrysohnSandwich, k, nullptr, v, 2.0 * v, Exactness::UpperBound, 0.0,
                                "AW_" + std::to_string(k) + " <= " + format_number(v) + " gives UW_" +
                                    std::to_string(k) + " <= " + format_number(2.0 * v)));

  // T3: d - b <= TW_k(conv X) <= min(circumradius, KW_k, tree displacement over the hull).
  if (enabled(T::T3) && cech_pd) {
    if (mst_conv) report.widths.emplace_back("TW_upper[mst,conv]", *mst_conv);
    for (const auto& iv : finite(*cech_pd)) {
      double bound = circ;
      std::string how = "point core";
      if (kw_value.count(iv.degree) && kw_value[iv.degree] < bound) bound = kw_value[iv.degree], how = "flat core";
      if (iv.degree >= 1 && mst_conv && mst_conv->value < bound) bound = mst_conv->value, how = "mst core over hull";
      rows.push_back(make_check(T::T3, iv.degree, &iv, iv.lifespan(), bound, Exactness::UpperBound, 0.0, how));
    }
  }

  // T4: Cech extinction <= cdef.
  double cech_xi = 0.0;
  if (cech_pd) {
    cech_xi = extinction_time(*cech_pd);
    report.scalars.emplace_back("cech_extinction", cech_xi);
  }
  if (enabled(T::T4) && cdef && cech_pd) {
    report.scalars.emplace_back("cdef", cdef->value);
    if (cech_trunc)
      report.warnings.push_back("T4 skipped: Cech diagram truncated");
    else
      rows.push_back(make_check(T::T4, -1, nullptr, cech_xi, cdef->value, cdef->exactness, cdef->band,
                                cdef->exactness == Exactness::Exact ? "" : "cdef is a lower estimate"));
  }

  // T5: d - b <= 2 uberspread, bounded by certified cores.
  if (enabled(T::T5) && cech_pd && !uber.empty()) {
    double best = kInfinity;
    std::string which;
    for (const auto& [name, w] : uber) {
      if (name.empty()) continue;
      report.widths.emplace_back("uberspread_upper[" + name + "]", w);
      if (w.value < best) best = w.value, which = name;
    }
    report.scalars.emplace_back("uberspread_upper", best);
    for (const auto& iv : finite(*cech_pd))
      rows.push_back(
          make_check(T::T5, iv.degree, &iv, iv.lifespan(), 2.0 * best, Exactness::UpperBound, 0.0, which + " core"));
  }

  // T6: d - b <= d_H(X, T) for convex T.
  if (enabled(T::T6) && cech_pd && convex_bound)
    for (const auto& iv : finite(*cech_pd))
      rows.push_back(make_check(T::T6, iv.degree, &iv, iv.lifespan(), convex_bound->first, Exactness::UpperBound, 0.0,
                                convex_bound->second + " core"));

  // T7: VR d - b <= spread.
  if (enabled(T::T7) && vr_pd && spr) {
    report.widths.emplace_back("spread", *spr);
    report.scalars.emplace_back("spread", spr->value);
    const auto e = spr->exactness == Exactness::Exact ? Exactness::Exact : Exactness::UpperBound;
    for (const auto& iv : finite(*vr_pd))
      rows.push_back(make_check(T::T7, iv.degree, &iv, iv.lifespan(), spr->value, e));
  }

  // T8: VR extinction <= 2 hcdef.
  double vr_xi = 0.0;
  if (vr_pd) {
    vr_xi = extinction_time(*vr_pd);
    report.scalars.emplace_back("vr_extinction", vr_xi);
  }
  if (hcdef) {
    report.scalars.emplace_back("hcdef", hcdef->value);
    report.scalars.emplace_back("hcdef_over_rad", rad > 0 ? hcdef->value / rad : 0.0);
  }
  if (enabled(T::T8) && vr_pd && hcdef) {
    const double band = 0.02 * diameter(ms);
    if (vr_trunc)
      report.warnings.push_back("T8 skipped: VR diagram truncated");
    else
      rows.push_back(make_check(T::T8, -1, nullptr, vr_xi, 2.0 * hcdef->value, hcdef->exactness,
                                hcdef->exactness == Exactness::Exact ? 0.0 : band,
                                hcdef->exactness == Exactness::Exact ? "" : "hcdef is a lower estimate"));
    if (sub) {
      const double xi = extinction_time(sub->vr);
      if (!has_essential(sub->vr))
        rows.push_back(make_check(T::T8, -1, nullptr, xi, 2.0 * sub->hcdef.value, sub->hcdef.exactness, 0.0,
                                  "subsample of " + std::to_string(sub->indices.size()) + " points"));
      report.scalars.emplace_back("subsample_hcdef", sub->hcdef.value);
      report.scalars.emplace_back("subsample_vr_extinction", xi);
    }
  }
  if (enabled(T::HcdefRad) && hcdef)
    rows.push_back(make_check(T::HcdefRad, -1, nullptr, hcdef->value, rad, Exactness::Exact, 0.0,
                              "ratio hcdef/rad = " + format_number(rad > 0 ? hcdef->value / rad : 0.0)));

  // T9: xi <= rad, Cech xi <= circumradius.
  if (enabled(T::T9)) {
    if (vr_pd && !vr_trunc) rows.push_back(make_check(T::T9, -1, nullptr, vr_xi, rad, Exactness::Exact, 0.0, "vr"));
    if (cech_pd && !cech_trunc)
      rows.push_back(make_check(T::T9, -1, nullptr, cech_xi, circ, Exactness::Exact, 0.0, "cech"));
  }

  // T10: d / b <= 1 + KW_k for b >= 1.
  if (enabled(T::T10) && cech_pd)
    for (const auto& iv : finite(*cech_pd))
      if (iv.birth >= 1.0 && kw_value.count(iv.degree))
        rows.push_back(make_check(T::T10, iv.degree, &iv, iv.death / iv.birth, 1.0 + kw_value[iv.degree],
                                  kw_exact[iv.degree]));

  // T11: bottleneck <= d_H (Cech), <= 2 d_H (VR).
  if (enabled(T::T11)) {
    report.scalars.emplace_back("perturbation_hausdorff", perturb_dh);
    for (int k = 0; k <= max_degree; ++k) {
      if (cech_pd && cech_pert)
        rows.push_back(make_check(T::T11, k, nullptr, bottleneck_distance(*cech_pd, *cech_pert, k), perturb_dh,
                                  Exactness::Exact, 0.0, "cech"));
      if (vr_pd && vr_pert)
        rows.push_back(make_check(T::T11, k, nullptr, bottleneck_distance(*vr_pd, *vr_pert, k), 2.0 * perturb_dh,
                                  Exactness::Exact, 0.0, "vr"));
    }
  }

  if (enabled(T::CutLocus) && cut_locus && cech_pd) {
    report.scalars.emplace_back("cut_locus_distance", *cut_locus);
    auto row = make_check(T::CutLocus, -1, nullptr, cech_xi, *cut_locus, Exactness::UpperBound, 0.0,
                          "report only: Cech extinction vs distance to the medial axis of the hull");
    row.status = CheckStatus::Measured;
    rows.push_back(row);
  }
  for (auto& r : rows)
    if (r.theorem == T::UrysohnSandwich) r.status = CheckStatus::Measured;

  report.timing_ms.emplace_back("total", elapsed_ms(start));
  return report;
}

std::vector<Dataset> paper_suite(std::uint64_t seed) {
  std::vector<Dataset> out;
  auto add = [&](Shape shape, ShapeParams p, std::size_t n, std::string name) {
    Dataset d = generate(shape, p, n, seed);
    d.name = std::move(name);
    out.push_back(std::move(d));
  };
  ShapeParams p;
  add(Shape::Circle, p, 120, "circle(r=1,n=120)");
  p = {};
  p.a = 2.0, p.b = 1.0;
  add(Shape::Ellipse, p, 150, "ellipse(a=2,b=1,n=150)");
  {
    Dataset d = generate(Shape::LinfSphere, {}, 80, seed);
    d.name = "linf_sphere(n=80)";
    d.metric = d.metric_space();
    d.cloud.reset();
    out.push_back(std::move(d));
  }
  p = {};
  p.radius = 10.0;
  add(Shape::Circle, p, 12, "sparse_circle(r=10,n=12)");
  p = {};
  p.a = 1.0, p.b = 0.15;
  add(Shape::TripodLoops, p, 90, "tripod_loops(a=1,b=0.15,n=90)");
  p = {};
  p.a = 3.0, p.b = 2.0, p.c = 1.0;
  add(Shape::Ellipsoid, p, 100, "ellipsoid(3,2,1,n=100)");
  p = {};
  p.a = 2.0, p.b = 0.6;
  add(Shape::Torus, p, 100, "torus(2,0.6,n=100)");
  p = {};
  p.a = 2.0, p.b = 1.5, p.c = 1.0, p.handles = 1, p.tube = 0.4;
  add(Shape::EllipsoidWithHandles, p, 100, "ellipsoid_with_handles(n=100)");
  p = {};
  p.dim = 2, p.lo = 0.0, p.hi = 10.0;
  add(Shape::Uniform, p, 30, "uniform2d(n=30)");
  add(Shape::TreeMetric, {}, 20, "tree_metric(n=20)");
  add(Shape::RandomMetric, {}, 8, "random_metric(n=8)");
  return out;
}

std::vector<ExperimentReport> run_suite(const std::vector<Dataset>& suite, const VerifyConfig& config) {
  std::vector<ExperimentReport> out(suite.size());
  parallel_for(suite.size(), [&](std::size_t i) { out[i] = verify_bounds(suite[i], config); });
  return out;
}

Json suite_to_json(const std::vector<ExperimentReport>& reports) {
  Json list = Json::array();
  bool passed = true;
  std::map<Theorem, std::size_t> rows;
  for (const auto& r : reports) {
    list.push_back(r.to_json());
    passed = passed && !r.has_certified_violation();
    for (const auto& c : r.checks) ++rows[c.theorem];
  }
  Json coverage = Json::object();
  for (const auto& [t, count] : rows) coverage[std::string(to_string(t))] = count;
  return {{"reports", list}, {"coverage", coverage}, {"passed", passed}};
}

std::string PcaTable::to_csv() const {
  std::ostringstream os;
  os << "cloud,k,pca_residual,kw,kw_exactness,max_lifespan\n";
  for (const auto& r : rows)
    os << r.cloud << ',' << r.k << ',' << format_number(r.pca_residual) << ',' << format_number(r.kw) << ','
       << to_string(r.kw_exactness) << ',' << format_number(r.max_lifespan) << '\n';
  os << "# corr(pca_residual,max_lifespan)=" << format_number(corr_pca_lifespan) << '\n';
  os << "# corr(kw,max_lifespan)=" << format_number(corr_kw_lifespan) << '\n';
  return os.str();
}

PcaTable pca_comparison(const std::vector<Dataset>& clouds, int k_max, int kw_restarts) {
  std::vector<std::vector<PcaRow>> per(clouds.size());
  parallel_for(clouds.size(), [&](std::size_t i) {
    const auto& d = clouds[i];
    if (!d.cloud || d.cloud->norm() != Norm::L2) throw Error("pca_comparison needs l2 point clouds");
    const auto& c = *d.cloud;
    const int top = std::min(k_max, static_cast<int>(c.dim()) - 1);
    const PersistenceDiagram pd = compute_persistence(cech(c, top + 1), top);
    for (int k = 0; k <= top; ++k) {
      PcaRow row;
      row.cloud = d.name;
      row.k = k;
      row.pca_residual = flat_residual(c, pca_flat(c, k));
      const auto w = kolmogorov_width(c, k, kw_restarts);
      row.kw = w.value;
      row.kw_exactness = w.exactness;
      for (const auto& ls : lifespans(pd, k))
        if (std::isfinite(ls.lifespan)) row.max_lifespan = std::max(row.max_lifespan, ls.lifespan);
      per[i].push_back(row);
    }
  });
  PcaTable table;
  std::vector<double> pca, kwv, life;
  for (auto& rows : per)
    for (auto& r : rows) {
      pca.push_back(r.pca_residual);
      kwv.push_back(r.kw);
      life.push_back(r.max_lifespan);
      table.rows.push_back(std::move(r));
    }
  table.corr_pca_lifespan = pearson(pca, life);
  table.corr_kw_lifespan = pearson(kwv, life);
  return table;
}

}  // namespace lifespan
