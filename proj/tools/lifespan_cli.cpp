// Command-line front end: dataset generation, persistence diagrams, width and
// deficiency estimates, and bound verification.

#include "lifespan/complexes.hpp"
#include "lifespan/generators.hpp"
#include "lifespan/geometry_cores.hpp"
#include "lifespan/harness.hpp"
#include "lifespan/io.hpp"
#include "lifespan/persistence.hpp"
#include "lifespan/widths.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace lifespan;

namespace {

struct Globals {
  std::string norm;
  int max_dim = 2;
  std::optional<double> max_filtration;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-")
    std::cout << text;
  else
    write_text_file(g.out, text);
}

void emit_json(const Globals& g, const Json& j) { emit(g, j.dump(2) + "\n"); }

Dataset load(const std::string& path, const Globals& g) {
  Dataset d;
  d.name = path;
  auto data = read_data_file(path);
  if (auto* cloud = std::get_if<PointCloud>(&data)) {
    d.cloud = g.norm.empty() ? *cloud : cloud->with_norm(parse_norm(g.norm));
  } else {
    if (!g.norm.empty()) throw Error("--norm applies to point clouds only");
    d.metric = std::get<FiniteMetricSpace>(std::move(data));
  }
  return d;
}

const PointCloud& need_cloud(const Dataset& d, const char* what) {
  if (!d.cloud) throw Error(std::string(what) + " needs a point-cloud input");
  return *d.cloud;
}

Json point_json(const Point& p) { return to_json(p); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistence lifespans and metric-geometry bounds"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--norm", g.norm, "Override the cloud norm (l2, linf, l1)");
  app.add_option("--max-dim", g.max_dim, "Largest simplex dimension (diagrams up to degree max-dim - 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-filtration", g.max_filtration, "Filtration cap (default: circumradius / radius)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out, "Output path (default stdout)");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  std::string shape;
  std::size_t gen_n = 100;
  ShapeParams params;
  gen->add_option("--shape", shape, "circle, ellipse, ellipsoid, linf_sphere, square_boundary, torus, uniform, "
                                    "tripod_loops, ellipsoid_with_handles, tree_metric, random_metric")
      ->required();
  gen->add_option("--n", gen_n, "Number of points")->check(CLI::PositiveNumber);
  gen->add_option("--radius", params.radius);
  gen->add_option("--a", params.a);
  gen->add_option("--b", params.b);
  gen->add_option("--c", params.c);
  gen->add_option("--dim", params.dim);
  gen->add_option("--lo", params.lo);
  gen->add_option("--hi", params.hi);
  gen->add_option("--handles", params.handles);
  gen->add_option("--tube", params.tube);

  // pd
  auto* pd = app.add_subcommand("pd", "Persistence diagram of a cloud or distance matrix");
  std::string input;
  std::string complex_kind = "auto";
  bool dump_complex = false;
  pd->add_option("--input", input, "Cloud CSV or distance-matrix CSV")->required();
  pd->add_option("--complex", complex_kind, "auto, cech or vr")->check(CLI::IsMember({"auto", "cech", "vr"}));
  pd->add_flag("--dump-complex", dump_complex, "Print the filtered complex instead of the diagram");

  // widths
  auto* widths_cmd = app.add_subcommand("widths", "Kolmogorov widths and core-based width bounds");
  int kw_max = -1;
  int restarts = 16;
  std::string core_spec = "mst";
  widths_cmd->add_option("--input", input)->required();
  widths_cmd->add_option("--k", kw_max, "Largest flat dimension (default N - 1)");
  widths_cmd->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
  widths_cmd->add_option("--core", core_spec, "mst, flat or file:<path>");

  // cdef
  auto* cdef_cmd = app.add_subcommand("cdef", "Convexity deficiency of a cloud");
  cdef_cmd->add_option("--input", input)->required();

  // tightspan
  auto* ts_cmd = app.add_subcommand("tightspan", "Hyperconvexity deficiency of a metric space");
  int exact_limit = 8;
  ts_cmd->add_option("--input", input)->required();
  ts_cmd->add_option("--exact-limit", exact_limit, "Largest n solved exactly");

  // spread
  auto* spread_cmd = app.add_subcommand("spread", "Katz spread of a metric space");
  int spread_limit = 20;
  spread_cmd->add_option("--input", input)->required();
  spread_cmd->add_option("--exact-limit", spread_limit);

  // verify
  auto* verify = app.add_subcommand("verify", "Check the lifespan and extinction bounds");
  std::string suite, checks;
  bool inject = false;
  double perturb_eps = 0.05;
  std::string verify_core;
  auto* verify_input = verify->add_option("--input", input);
  verify->add_option("--suite", suite, "Built-in dataset suite")->check(CLI::IsMember({"paper"}))->excludes(verify_input);
  verify->add_option("--checks", checks, "Comma-separated ids (T1..T11, hcdef_rad, cut_locus, urysohn_sandwich)");
  verify->add_option("--core", verify_core, "Extra core for T5: flat or file:<path>");
  verify->add_option("--exact-limit", exact_limit);
  verify->add_option("--perturb-eps", perturb_eps);
  verify->add_option("--restarts", restarts);
  verify->add_flag("--inject-corruption", inject, "Inflate every death by 10% (checker self-test)");

  // pca-compare
  auto* pca = app.add_subcommand("pca-compare", "PCA residual vs Kolmogorov width vs lifespan");
  std::vector<std::string> inputs;
  int k_max = 1;
  auto* pca_inputs = pca->add_option("--input", inputs, "Cloud CSV files");
  pca->add_option("--suite", suite)->check(CLI::IsMember({"paper"}))->excludes(pca_inputs);
  pca->add_option("--k-max", k_max)->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      const Dataset d = generate(parse_shape(shape), params, gen_n, g.seed);
      std::ostringstream os;
      if (d.cloud)
        write_cloud(os, *d.cloud);
      else
        write_distance_matrix(os, *d.metric);
      emit(g, os.str());
      return 0;
    }
    if (pd->parsed()) {
      const Dataset d = load(input, g);
      const bool use_cech =
          complex_kind == "cech" || (complex_kind == "auto" && d.cloud && d.cloud->norm() != Norm::L1);
      FilteredComplex fc = [&] {
        if (use_cech) {
          const auto& c = need_cloud(d, "--complex cech");
          return g.max_filtration ? cech(c, g.max_dim, *g.max_filtration) : cech(c, g.max_dim);
        }
        const auto ms = d.metric_space();
        return g.max_filtration ? vietoris_rips(ms, g.max_dim, *g.max_filtration) : vietoris_rips(ms, g.max_dim);
      }();
      if (dump_complex) {
        emit(g, fc.dump());
        return 0;
      }
      const PersistenceDiagram diagram = compute_persistence(fc, g.max_dim - 1);
      for (const auto& w : diagram.warnings()) std::cerr << "warning: " << w << '\n';
      if (g.format == "csv")
        emit(g, diagram_to_csv(diagram));
      else
        emit_json(g, diagram_to_json(diagram));
      return 0;
    }
    if (widths_cmd->parsed()) {
      const Dataset d = load(input, g);
      const auto& c = need_cloud(d, "widths");
      const int top = kw_max >= 0 ? kw_max : static_cast<int>(c.dim()) - 1;
      Json list = Json::array();
      for (int k = 0; k <= top; ++k) list.push_back(to_json(kolmogorov_width(c, k, restarts)));
      SimplicialCore core;
      if (core_spec == "mst") {
        core = mst_core(c);
      } else if (core_spec == "flat") {
        const auto w = kolmogorov_width(c, std::min<int>(1, static_cast<int>(c.dim()) - 1), restarts);
        core = flat_core(c, std::get<AffineFlat>(w.witness));
      } else if (core_spec.rfind("file:", 0) == 0) {
        std::ifstream in(core_spec.substr(5));
        if (!in) throw Error("cannot open core file '" + core_spec.substr(5) + "'");
        core = read_core(in);
      } else {
        throw Error("unknown --core '" + core_spec + "'");
      }
      list.push_back(to_json(core_displacement(c, core)));
      if (core.certificate != CoreCertificate::None) list.push_back(to_json(uberspread_upper(c, core)));
      list.push_back(to_json(spread(d.metric_space())));
      emit_json(g, {{"widths", list}});
      return 0;
    }
    if (cdef_cmd->parsed()) {
      const Dataset d = load(input, g);
      CdefOptions opt;
      opt.seed = g.seed;
      const auto r = convexity_deficiency(need_cloud(d, "cdef"), opt);
      emit_json(g, {{"cdef", r.value},
                    {"exactness", to_string(r.exactness)},
                    {"argmax_point", point_json(r.argmax)},
                    {"band", r.band}});
      return 0;
    }
    if (ts_cmd->parsed()) {
      const Dataset d = load(input, g);
      const auto r = hyperconvexity_deficiency(d.metric_space(), exact_limit, g.seed);
      Json f = Json::array();
      for (Eigen::Index i = 0; i < r.witness.size(); ++i) f.push_back(r.witness[i]);
      emit_json(g, {{"hcdef", r.value},
                    {"witness_f", f},
                    {"exact", r.exactness == Exactness::Exact},
                    {"exactness", to_string(r.exactness)}});
      return 0;
    }
    if (spread_cmd->parsed()) {
      const Dataset d = load(input, g);
      emit_json(g, to_json(spread(d.metric_space(), spread_limit)));
      return 0;
    }
    if (verify->parsed()) {
      VerifyConfig cfg;
      if (!checks.empty()) cfg.checks = parse_theorem_list(checks);
      cfg.max_dim = g.max_dim;
      cfg.max_filtration = g.max_filtration;
      cfg.exact_limit = exact_limit;
      cfg.kw_restarts = restarts;
      cfg.perturb_eps = perturb_eps;
      cfg.seed = g.seed;
      cfg.inject_corruption = inject;
      std::vector<Dataset> datasets;
      if (!suite.empty())
        datasets = paper_suite(g.seed);
      else if (!input.empty())
        datasets.push_back(load(input, g));
      else
        throw Error("verify needs --input or --suite");
      if (!verify_core.empty()) {
        if (suite.size()) throw Error("--core applies to a single --input");
        const auto& c = need_cloud(datasets.front(), "--core");
        if (verify_core == "flat") {
          const auto w = kolmogorov_width(c, 1, restarts);
          cfg.extra_cores.push_back(flat_core(c, std::get<AffineFlat>(w.witness)));
        } else if (verify_core.rfind("file:", 0) == 0) {
          std::ifstream in(verify_core.substr(5));
          if (!in) throw Error("cannot open core file '" + verify_core.substr(5) + "'");
          cfg.extra_cores.push_back(read_core(in));
        } else if (verify_core != "mst") {
          throw Error("unknown --core '" + verify_core + "'");
        }
      }
      const auto reports = run_suite(datasets, cfg);
      bool violated = false;
      for (const auto& r : reports) violated = violated || r.has_certified_violation();
      if (g.format == "csv") {
        std::string text;
        for (std::size_t i = 0; i < reports.size(); ++i) {
          auto csv = reports[i].to_csv();
          if (i > 0) csv = csv.substr(csv.find('\n') + 1);
          text += csv;
        }
        emit(g, text);
      } else if (!suite.empty()) {
        emit_json(g, suite_to_json(reports));
      } else {
        emit_json(g, reports.front().to_json());
      }
      return violated ? 2 : 0;
    }
    if (pca->parsed()) {
      std::vector<Dataset> clouds;
      if (!suite.empty()) {
        for (auto& d : paper_suite(g.seed))
          if (d.cloud && d.cloud->norm() == Norm::L2) clouds.push_back(std::move(d));
      } else {
        for (const auto& path : inputs) clouds.push_back(load(path, g));
      }
      if (clouds.empty()) throw Error("pca-compare needs --input or --suite");
      emit(g, pca_comparison(clouds, k_max, restarts).to_csv());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
