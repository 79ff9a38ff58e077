// amli: command-line front end for mesh generation, matching analysis,
// hierarchy construction and AMLI-preconditioned solves.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "amli/experiment.hpp"
#include "amli/graph_io.hpp"
#include "amli/hierarchy.hpp"
#include "amli/matching.hpp"
#include "amli/precond.hpp"
#include "amli/stability.hpp"

using nlohmann::json;
using namespace amli;

namespace {

// Flags shared by every subcommand; a flag that was given wins over the
// config file.
struct CommonFlags {
  std::string config;
  std::string family;
  Index n = 0;
  std::string variant;
  std::string sigma_mode;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  std::string format = "json";

  CLI::Option* family_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* variant_opt = nullptr;
  CLI::Option* sigma_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* tol_opt = nullptr;

  void attach(CLI::App* app, std::string default_format) {
    format = std::move(default_format);
    app->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    family_opt = app->add_option("--family", family, "square|lshape|cube|fichera|unstructured2d|path");
    n_opt = app->add_option("--n", n, "size parameter");
    variant_opt = app->add_option("--variant", variant, "ordinary|modified");
    sigma_opt = app->add_option("--sigma-mode", sigma_mode, "theory-grid|theory-general|modified-grid|ratio");
    seed_opt = app->add_option("--seed", seed, "random seed");
    tol_opt = app->add_option("--tol", tol, "relative A-norm error reduction");
    app->add_option("--format", format, "output format")->capture_default_str();
  }

  void override(ExperimentConfig& cfg) const {
    if (*family_opt) cfg.family = parse_family(family);
    if (*n_opt) cfg.n = n;
    if (*variant_opt) cfg.variant = parse_variant(variant);
    if (*sigma_opt) cfg.sigma_mode = parse_sigma_mode(sigma_mode);
    if (*seed_opt) cfg.seed = seed;
    if (*tol_opt) cfg.tol = tol;
  }

  std::vector<ExperimentConfig> configs() const {
    std::vector<ExperimentConfig> out;
    if (config.empty()) {
      out.emplace_back();
    } else {
      std::ifstream in(config);
      std::stringstream ss;
      ss << in.rdbuf();
      out = parse_sweep(ss.str());
    }
    for (auto& c : out) {
      override(c);
      c.validate();
    }
    return out;
  }

  ExperimentConfig single() const {
    auto all = configs();
    if (all.size() != 1) throw std::invalid_argument("config holds " + std::to_string(all.size()) + " runs; use sweep");
    return all.front();
  }
};

json level_json(const Hierarchy& h, int k) {
  const auto& lvl = h.level(k);
  json j = {{"level", k},
            {"n", lvl.num_vertices()},
            {"edges", lvl.graph.num_edges()},
            {"theta", h.theta(k)}};
  if (k >= 2) {
    j["pairs"] = lvl.num_pairs();
    j["singletons"] = lvl.partition.singletons().size();
    j["sigma"] = lvl.sigma;
    j["c_g"] = lvl.c_g;
    Index mult = 0;
    for (Index m : lvl.multiplicity) mult = std::max(mult, m);
    j["max_multiplicity"] = mult;
    if (lvl.matched_dim >= 0) j["matched_dim"] = lvl.matched_dim;
  }
  return j;
}

json partition_json(const Graph& g, const Partition& p) {
  json pairs = json::array();
  for (const auto& pr : p.matched_pairs()) pairs.push_back({pr.first, pr.second});
  const auto q = quotient(g, p);
  const PiOperator pi_m = build_pi_matching(g, p);
  const PiOperator pi_g = build_pi_general(g, p);
  const auto bounds = pi_norm_bounds(pi_m);
  Index mult = 0;
  for (Index m : q.multiplicity) mult = std::max(mult, m);
  return {{"vertices", g.num_vertices()},
          {"edges", g.num_edges()},
          {"pairs", pairs},
          {"singletons", p.singletons()},
          {"coarse_vertices", q.graph.num_vertices()},
          {"coarse_edges", q.graph.num_edges()},
          {"max_multiplicity", mult},
          {"sigma_ratio", static_cast<double>(std::max<Index>(mult, 1))},
          {"pi_inf_norm", bounds.inf_norm},
          {"pi_one_norm", bounds.one_norm},
          {"pi_gershgorin", bounds.gershgorin_bound},
          {"commutation_residual_closed_form", check_commutation(g, p, pi_m, 10)},
          {"commutation_residual_local_solve", check_commutation(g, p, pi_g, 10)}};
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_mesh(const CommonFlags& f, const std::string& out_path) {
  const auto cfg = f.single();
  const Mesh mesh = make_mesh(cfg.family, cfg.n, cfg.seed);
  save_graph(mesh.graph, out_path);
  json side = {{"family", to_string(cfg.family)},
               {"n", cfg.n},
               {"seed", cfg.seed},
               {"vertices", mesh.graph.num_vertices()},
               {"edges", mesh.graph.num_edges()}};
  if (mesh.lattice) {
    side["extents"] = mesh.lattice->extents;
    side["coords"] = mesh.lattice->coords;
  } else {
    json pts = json::array();
    for (const auto& p : mesh.points) pts.push_back({p.x, p.y});
    side["points"] = pts;
  }
  std::ofstream(out_path + ".json") << side.dump(1) << '\n';
  print({{"graph", out_path}, {"sidecar", out_path + ".json"}, {"vertices", mesh.graph.num_vertices()},
         {"edges", mesh.graph.num_edges()}});
  return 0;
}

int cmd_match(const CommonFlags& f, const std::string& graph_path, const std::string& strategy, int dim) {
  const auto cfg = f.single();
  Graph g;
  std::optional<LatticeCoords> lattice;
  if (!graph_path.empty()) {
    g = load_graph(graph_path);
  } else {
    Mesh mesh = make_mesh(cfg.family, cfg.n, cfg.seed);
    g = std::move(mesh.graph);
    lattice = std::move(mesh.lattice);
  }
  Partition p;
  if (strategy == "aligned") {
    if (!lattice) throw std::invalid_argument("aligned matching needs a lattice family");
    p = aligned_matching(g, *lattice, dim);
  } else if (strategy == "random") {
    p = random_maximal_matching(g, cfg.seed);
  } else {
    throw std::invalid_argument("unknown matching strategy '" + strategy + "'");
  }
  print(partition_json(g, p));
  return 0;
}

int cmd_analyze(const CommonFlags& f) {
  const auto cfg = f.single();
  const Mesh mesh = make_mesh(cfg.family, cfg.n, cfg.seed);
  const Hierarchy h = build_hierarchy(mesh.graph, hierarchy_options(cfg, mesh));
  json levels = json::array();
  for (int k = h.num_levels(); k >= 2; --k) {
    const auto& lvl = h.level(k);
    json j = partition_json(lvl.graph, lvl.partition);
    j.erase("pairs");
    j.erase("singletons");
    j["level"] = k;
    if (lvl.num_vertices() <= 2000) j["q_energy_norm"] = q_energy_norm(lvl.graph, lvl.partition);
    levels.push_back(j);
  }
  print({{"family", to_string(cfg.family)}, {"n", cfg.n}, {"levels", levels}});
  return 0;
}

int cmd_build(const CommonFlags& f) {
  const auto cfg = f.single();
  const Mesh mesh = make_mesh(cfg.family, cfg.n, cfg.seed);
  const Hierarchy h = build_hierarchy(mesh.graph, hierarchy_options(cfg, mesh));
  json levels = json::array();
  for (int k = h.num_levels(); k >= 1; --k) levels.push_back(level_json(h, k));
  const AmliPreconditioner pre(h);
  print({{"family", to_string(cfg.family)},
         {"n", cfg.n},
         {"variant", to_string(h.variant())},
         {"sigma_mode", to_string(h.sigma_mode())},
         {"schedule_c", h.schedule_constant()},
         {"zeta", h.zeta()},
         {"flops_per_apply", pre.operation_count()},
         {"warnings", h.warnings()},
         {"levels", levels}});
  return 0;
}

json result_json(const ExperimentConfig& cfg, const ExperimentResult& r) {
  return {{"family", to_string(cfg.family)},
          {"n", r.row.n},
          {"variant", to_string(cfg.variant)},
          {"levels", r.row.levels},
          {"k", r.row.k},
          {"r_k", r.row.r_k},
          {"r_e", r.row.r_e},
          {"r_a", r.row.r_a},
          {"iters", r.row.iters},
          {"seed", r.row.seed},
          {"lambda_min", r.lambda_min},
          {"lambda_max", r.lambda_max},
          {"r_a_per_rhs", r.r_a_per_rhs},
          {"iters_per_rhs", r.iters_per_rhs},
          {"converged", r.all_converged},
          {"warnings", r.warnings},
          {"expectation_failures", r.expectation_failures}};
}

int cmd_solve(const CommonFlags& f) {
  const auto cfg = f.single();
  const auto r = run_experiment(cfg);
  if (f.format == "json") {
    print(result_json(cfg, r));
  } else {
    emit_table({r.row}, parse_table_format(f.format), std::cout);
  }
  return r.all_converged ? 0 : 1;
}

int cmd_sweep(const CommonFlags& f, const std::string& out_path) {
  const auto cfgs = f.configs();
  std::vector<TableRow> rows;
  bool ok = true;
  for (const auto& cfg : cfgs) {
    const auto r = run_experiment(cfg);
    rows.push_back(r.row);
    ok = ok && r.all_converged;
    for (const auto& w : r.warnings) std::cerr << to_string(cfg.family) << " n=" << cfg.n << ": " << w << '\n';
    for (const auto& e : r.expectation_failures)
      std::cerr << to_string(cfg.family) << " n=" << cfg.n << ": expectation failed: " << e << '\n';
  }
  const auto fmt = parse_table_format(f.format);
  if (out_path.empty()) {
    emit_table(rows, fmt, std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    emit_table(rows, fmt, out);
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AMLI W-cycle preconditioner for graph Laplacians"};
  app.require_subcommand(1);

  CommonFlags mesh_f, match_f, analyze_f, build_f, solve_f, sweep_f;
  std::string mesh_out = "mesh.mtx", match_graph, match_strategy = "random", sweep_out;
  int match_dim = 0;

  auto* mesh = app.add_subcommand("mesh", "generate a graph as Matrix Market plus a JSON coordinate sidecar");
  mesh_f.attach(mesh, "json");
  mesh->add_option("-o,--out", mesh_out, "output .mtx path")->capture_default_str();

  auto* match = app.add_subcommand("match", "match a graph and report the quotient and commutation operator");
  match_f.attach(match, "json");
  match->add_option("--graph", match_graph, "Matrix Market input instead of a generated family");
  match->add_option("--strategy", match_strategy, "aligned|random")->capture_default_str();
  match->add_option("--dim", match_dim, "lattice dimension for aligned matching")->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "per-level stability bounds of the hierarchy");
  analyze_f.attach(analyze, "json");
  auto* build = app.add_subcommand("build", "hierarchy summary");
  build_f.attach(build, "json");
  auto* solve = app.add_subcommand("solve", "worst-of-rhs PCG solve, one table row");
  solve_f.attach(solve, "json");
  auto* sweep = app.add_subcommand("sweep", "run every config of a sweep file and emit a table");
  sweep_f.attach(sweep, "csv");
  sweep->add_option("-o,--out", sweep_out, "table path (default stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*mesh) return cmd_mesh(mesh_f, mesh_out);
    if (*match) return cmd_match(match_f, match_graph, match_strategy, match_dim);
    if (*analyze) return cmd_analyze(analyze_f);
    if (*build) return cmd_build(build_f);
    if (*solve) return cmd_solve(solve_f);
    if (*sweep) return cmd_sweep(sweep_f, sweep_out);
  } catch (const std::exception& e) {
    // ExperimentError messages already start with their stage.
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
