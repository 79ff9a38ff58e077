#include "amli/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "amli/krylov.hpp"
#include "amli/precond.hpp"
#include "amli/rng.hpp"

namespace amli {

using nlohmann::json;

std::string_view to_string(Family f) {
  switch (f) {
    case Family::square: return "square";
    case Family::lshape: return "lshape";
    case Family::cube: return "cube";
    case Family::fichera: return "fichera";
    case Family::unstructured2d: return "unstructured2d";
    case Family::path: return "path";
  }
  return "?";
}

Family parse_family(std::string_view s) {
  for (auto f : {Family::square, Family::lshape, Family::cube, Family::fichera, Family::unstructured2d, Family::path})
    if (s == to_string(f)) return f;
  throw std::invalid_argument("unknown family '" + std::string(s) + "'");
}

namespace {

const std::vector<std::string_view> kColumns = {"n", "levels", "k", "r_k", "r_e", "r_a", "iters", "seed"};

double column_value(const TableRow& r, std::string_view c) {
  if (c == "n") return r.n;
  if (c == "levels") return r.levels;
  if (c == "k") return r.k;
  if (c == "r_k") return r.r_k;
  if (c == "r_e") return r.r_e;
  if (c == "r_a") return r.r_a;
  if (c == "iters") return r.iters;
  if (c == "seed") return static_cast<double>(r.seed);
  throw std::invalid_argument("unknown column '" + std::string(c) + "'");
}

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void apply_json(const json& j, ExperimentConfig& cfg) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  for (const auto& [key, val] : j.items()) {
    if (key == "family") {
      cfg.family = parse_family(val.get<std::string>());
    } else if (key == "n") {
      cfg.n = val.get<Index>();
    } else if (key == "variant") {
      cfg.variant = parse_variant(val.get<std::string>());
    } else if (key == "sigma_mode") {
      if (val.is_null()) {
        cfg.sigma_mode.reset();
      } else {
        cfg.sigma_mode = parse_sigma_mode(val.get<std::string>());
      }
    } else if (key == "seed") {
      cfg.seed = val.get<std::uint64_t>();
    } else if (key == "tol") {
      cfg.tol = val.get<double>();
    } else if (key == "rhs_count") {
      cfg.rhs_count = val.get<int>();
    } else if (key == "max_iter") {
      cfg.max_iter = val.get<int>();
    } else if (key == "expectations") {
      cfg.expectations.clear();
      for (const auto& [col, range] : val.items()) {
        column_value(TableRow{}, col);
        if (!range.is_array() || range.size() != 2) {
          throw std::invalid_argument("config: expectation '" + col + "' must be [lo, hi]");
        }
        cfg.expectations.push_back({col, range[0].get<double>(), range[1].get<double>()});
      }
    } else if (key != "base" && key != "runs" && key != "name") {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("config: tol must lie in (0, 1)");
  if (rhs_count < 1) throw std::invalid_argument("config: rhs_count must be >= 1");
  if (max_iter < 1) throw std::invalid_argument("config: max_iter must be >= 1");
  if (n < 2) throw std::invalid_argument("config: n must be >= 2");
}

ExperimentConfig parse_config(std::string_view json_text, const ExperimentConfig& base) {
  ExperimentConfig cfg = base;
  try {
    apply_json(parse_json(json_text), cfg);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return cfg;
}

std::vector<ExperimentConfig> parse_sweep(std::string_view json_text, const ExperimentConfig& base) {
  const json j = parse_json(json_text);
  std::vector<ExperimentConfig> out;
  try {
    ExperimentConfig b = base;
    if (j.contains("base")) apply_json(j.at("base"), b);
    if (!j.contains("runs")) {
      apply_json(j, b);
      out.push_back(b);
      return out;
    }
    for (const auto& run : j.at("runs")) {
      ExperimentConfig c = b;
      apply_json(run, c);
      out.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return out;
}

Mesh make_mesh(Family family, Index n, std::uint64_t seed) {
  Mesh m;
  auto take = [&](GridGraph g) {
    m.graph = std::move(g.graph);
    m.lattice = std::move(g.lattice);
  };
  switch (family) {
    case Family::square: take(grid_graph({{n, n}, {}})); break;
    case Family::lshape: take(lshape_graph(n)); break;
    case Family::cube: take(grid_graph({{n, n, n}, {}})); break;
    case Family::fichera: take(fichera_graph(n)); break;
    case Family::path: take(grid_graph({{n}, {}})); break;
    case Family::unstructured2d: {
      auto pg = unstructured_2d(n, seed);
      m.graph = std::move(pg.graph);
      m.points = std::move(pg.points);
      break;
    }
  }
  return m;
}

HierarchyOptions hierarchy_options(const ExperimentConfig& cfg, const Mesh& mesh) {
  HierarchyOptions o;
  o.strategy = mesh.lattice ? Strategy::structured : Strategy::random;
  o.variant = cfg.variant;
  o.sigma_mode = cfg.sigma_mode;
  o.seed = cfg.seed;
  o.lattice = mesh.lattice;
  return o;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  Mesh mesh;
  try {
    mesh = make_mesh(cfg.family, cfg.n, cfg.seed);
  } catch (const std::exception& e) {
    throw ExperimentError("mesh", e.what());
  }
  Hierarchy h;
  try {
    h = build_hierarchy(mesh.graph, hierarchy_options(cfg, mesh));
  } catch (const std::exception& e) {
    throw ExperimentError("hierarchy", e.what());
  }
  res.warnings = h.warnings();
  std::optional<AmliPreconditioner> pre;
  try {
    pre.emplace(h);
  } catch (const std::exception& e) {
    throw ExperimentError("preconditioner", e.what());
  }

  const Graph& g = mesh.graph;
  const Index nv = g.num_vertices();
  LinearOperator apply_a = [&](std::span<const double> x, std::span<double> y) { laplacian_apply(g, x, y); };
  LinearOperator apply_b = [&](std::span<const double> x, std::span<double> y) { pre->apply(x, y); };

  res.all_converged = true;
  double worst_ra = 0.0;
  int max_iters = 0;
  SplitMix64 rng(cfg.seed);
  try {
    for (int i = 0; i < cfg.rhs_count; ++i) {
      Vec x_true(nv);
      for (double& v : x_true) v = rng.uniform(-1.0, 1.0);
      project_out_constants(x_true);
      const Vec f = laplacian_apply(g, x_true);
      const SolveReport rep = pcg_solve(apply_a, apply_b, f, cfg.tol, std::span<const double>(x_true), cfg.max_iter);
      if (!rep.converged()) {
        res.all_converged = false;
        res.warnings.push_back("rhs " + std::to_string(i) + ": " + std::string(to_string(rep.status)) + " " +
                               rep.diagnostic);
      }
      const Rates r = rates(rep, SpectrumEstimate{1.0, 1.0, 0}, h.zeta());
      const double ra = r.r_a.value_or(0.0);
      res.r_a_per_rhs.push_back(ra);
      res.iters_per_rhs.push_back(rep.iterations);
      worst_ra = std::max(worst_ra, ra);
      max_iters = std::max(max_iters, rep.iterations);
    }
  } catch (const std::exception& e) {
    throw ExperimentError("solve", e.what());
  }

  SpectrumEstimate spec{1.0, 1.0, 0};
  const int lanczos_steps = std::min(60, max_iters);
  if (lanczos_steps >= 2) {
    try {
      spec = lanczos_extremes(apply_a, apply_b, nv, lanczos_steps, cfg.seed);
    } catch (const std::exception& e) {
      throw ExperimentError("lanczos", e.what());
    }
  }
  res.lambda_min = spec.lambda_min;
  res.lambda_max = spec.lambda_max;

  res.row.n = cfg.n;
  res.row.levels = h.num_levels();
  res.row.k = h.zeta();
  res.row.r_k = rate_from_kappa(h.zeta());
  res.row.r_e = rate_from_kappa(std::max(1.0, spec.lambda_max / spec.lambda_min));
  res.row.r_a = worst_ra;
  res.row.iters = max_iters;
  res.row.seed = cfg.seed;

  for (const auto& ex : cfg.expectations) {
    const double v = column_value(res.row, ex.column);
    if (!(v >= ex.lo && v <= ex.hi)) {
      res.expectation_failures.push_back(ex.column + "=" + shortest(v) + " not in [" + shortest(ex.lo) + ", " +
                                         shortest(ex.hi) + "]");
    }
  }
  return res;
}

TableFormat parse_table_format(std::string_view s) {
  if (s == "csv") return TableFormat::csv;
  if (s == "markdown" || s == "md") return TableFormat::markdown;
  throw std::invalid_argument("unknown table format '" + std::string(s) + "'");
}

void emit_table(const std::vector<TableRow>& rows, TableFormat format, std::ostream& out) {
  if (format == TableFormat::csv) {
    out << "n,levels,k,r_k,r_e,r_a,iters,seed\n";
    for (const auto& r : rows) {
      out << r.n << ',' << r.levels << ',' << shortest(r.k) << ',' << shortest(r.r_k) << ',' << shortest(r.r_e) << ','
          << shortest(r.r_a) << ',' << r.iters << ',' << r.seed << '\n';
    }
  } else {
    out << "| n | levels | k | r_k | r_e | r_a | iters |\n";
    out << "|---:|---:|---:|---:|---:|---:|---:|\n";
    char buf[160];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "| %d | %d | %.1f | %.2f | %.2f | %.2f | %d |\n", r.n, r.levels, r.k, r.r_k,
                    r.r_e, r.r_a, r.iters);
      out << buf;
    }
  }
  if (!out) throw std::runtime_error("emit_table: write failed");
}

std::vector<TableRow> parse_csv_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "n,levels,k,r_k,r_e,r_a,iters,seed") {
    throw std::invalid_argument("parse_csv_table: missing or unexpected header");
  }
  std::vector<TableRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    for (;;) {
      const auto pos = rest.find(',');
      cells.push_back(rest.substr(0, pos));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    if (cells.size() != kColumns.size()) throw std::invalid_argument("parse_csv_table: bad field count: " + line);
    auto num = [&](std::string_view s, auto& dst) {
      auto r = std::from_chars(s.data(), s.data() + s.size(), dst);
      if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw std::invalid_argument("parse_csv_table: bad number '" + std::string(s) + "'");
      }
    };
    TableRow r;
    num(cells[0], r.n);
    num(cells[1], r.levels);
    num(cells[2], r.k);
    num(cells[3], r.r_k);
    num(cells[4], r.r_e);
    num(cells[5], r.r_a);
    num(cells[6], r.iters);
    num(cells[7], r.seed);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace amli
