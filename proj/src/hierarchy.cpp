#include "amli/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "amli/rng.hpp"
#include "amli/stability.hpp"

namespace amli {

std::string_view to_string(Strategy s) { return s == Strategy::structured ? "structured" : "random"; }

std::string_view to_string(Variant v) { return v == Variant::ordinary ? "ordinary" : "modified"; }

std::string_view to_string(SigmaMode m) {
  switch (m) {
    case SigmaMode::theory_grid: return "theory-grid";
    case SigmaMode::theory_general: return "theory-general";
    case SigmaMode::modified_grid: return "modified-grid";
    case SigmaMode::ratio: return "ratio";
  }
  return "?";
}

Strategy parse_strategy(std::string_view s) {
  if (s == "structured") return Strategy::structured;
  if (s == "random") return Strategy::random;
  throw std::invalid_argument("unknown strategy '" + std::string(s) + "'");
}

Variant parse_variant(std::string_view s) {
  if (s == "ordinary") return Variant::ordinary;
  if (s == "modified") return Variant::modified;
  throw std::invalid_argument("unknown variant '" + std::string(s) + "'");
}

SigmaMode parse_sigma_mode(std::string_view s) {
  for (auto m : {SigmaMode::theory_grid, SigmaMode::theory_general, SigmaMode::modified_grid, SigmaMode::ratio})
    if (s == to_string(m)) return m;
  throw std::invalid_argument("unknown sigma mode '" + std::string(s) + "'");
}

double sigma_estimate(SigmaMode mode, std::span<const Index> multiplicity, Index finest_vertices) {
  switch (mode) {
    case SigmaMode::theory_grid: return 2.0;
    case SigmaMode::theory_general: return 4.0;
    case SigmaMode::modified_grid:
      if (finest_vertices < 2) throw std::invalid_argument("sigma_estimate: modified-grid needs N >= 2");
      return 2.0 - 1.0 / (2.0 * std::log2(static_cast<double>(finest_vertices)));
    case SigmaMode::ratio: {
      Index m = 1;
      for (Index x : multiplicity) m = std::max(m, x);
      return static_cast<double>(m);
    }
  }
  throw std::invalid_argument("sigma_estimate: unknown mode");
}

std::vector<double> theta_schedule(double c, int levels) {
  if (!(c >= 1.0 && c <= 4.0)) {
    throw std::invalid_argument("theta_schedule: c = " + std::to_string(c) + " outside [1, 4]");
  }
  if (levels < 1) throw std::invalid_argument("theta_schedule: need at least one level");
  std::vector<double> theta(levels);
  theta[0] = 1.0;
  for (int k = 1; k < levels; ++k) {
    const double t = theta[k - 1];
    theta[k] = 4.0 * t / ((t + 1.0) * (t + 1.0) * c);
  }
  return theta;
}

std::vector<double> theta_schedule_modified(int levels) {
  if (levels < 1) throw std::invalid_argument("theta_schedule_modified: need at least one level");
  std::vector<double> theta(levels);
  for (int k = 1; k <= levels; ++k) theta[k - 1] = 1.0 / (2.0 * k - 1.0);
  return theta;
}

AmliPoly amli_poly(double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("amli_poly: theta = " + std::to_string(theta) + " outside (0, 1]");
  }
  const double s = theta + 1.0;
  return {4.0 / s, -4.0 / (s * s)};
}

DenseMatrix laplacian_pinv(const Graph& g) {
  const std::size_t n = g.num_vertices();
  const double j = 1.0 / static_cast<double>(n);
  DenseMatrix a = dense_laplacian(g);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) += j;
  const DenseMatrix l = cholesky(a);
  DenseMatrix out(n, n);
  std::vector<double> e(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    e[c] = 1.0;
    const auto col = cholesky_solve(l, e);
    e[c] = 0.0;
    for (std::size_t r = 0; r < n; ++r) out(r, c) = col[r] - j;
  }
  // Symmetrize away rounding so that A^dagger applies as an exact adjoint.
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r + 1; c < n; ++c) out(r, c) = out(c, r) = 0.5 * (out(r, c) + out(c, r));
  return out;
}

namespace {

// Dimension to match next, or -1 when the structured coarsening is done.
int next_dimension(const LatticeCoords& lat, bool one_dimensional) {
  std::vector<int> nontrivial;
  for (int j = 0; j < lat.dim(); ++j)
    if (lat.extents[j] > 1) nontrivial.push_back(j);
  if (nontrivial.size() > 1) return nontrivial.front();
  if (one_dimensional && nontrivial.size() == 1 && lat.extents[nontrivial[0]] > 2) return nontrivial[0];
  return -1;
}

}  // namespace

Hierarchy build_hierarchy(const Graph& g, const HierarchyOptions& opts) {
  if (g.num_vertices() < 2) throw std::invalid_argument("build_hierarchy: graph needs at least two vertices");
  if (!is_connected(g)) throw std::invalid_argument("build_hierarchy: graph is disconnected");

  Hierarchy h;
  h.variant_ = opts.variant;
  h.sigma_mode_ = opts.sigma_mode.value_or(
      opts.strategy == Strategy::random
          ? SigmaMode::ratio
          : (opts.variant == Variant::modified ? SigmaMode::modified_grid : SigmaMode::theory_grid));
  const Index finest_n = g.num_vertices();

  // Built finest-first, reversed at the end.
  std::vector<HierarchyLevel> stack;
  HierarchyLevel cur;
  cur.graph = g;

  auto push_level = [&](HierarchyLevel& lvl, Partition p, int dim) {
    if (p.matched_pairs().empty()) {
      throw std::runtime_error("build_hierarchy: coarsening stalled at level with " +
                               std::to_string(lvl.num_vertices()) + " vertices (no matched pair)");
    }
    if (p.num_aggregates() < 2) {
      throw std::runtime_error("build_hierarchy: coarsening would leave a single vertex");
    }
    auto q = quotient(lvl.graph, p);
    lvl.partition = std::move(p);
    lvl.multiplicity = std::move(q.multiplicity);
    lvl.matched_dim = dim;
    lvl.sigma = sigma_estimate(h.sigma_mode_, lvl.multiplicity, finest_n);
    HierarchyLevel next;
    next.graph = std::move(q.graph);
    return next;
  };

  if (opts.strategy == Strategy::structured) {
    if (!opts.lattice) throw std::invalid_argument("build_hierarchy: structured strategy needs lattice coordinates");
    const auto& lat0 = *opts.lattice;
    if (lat0.coords.size() != static_cast<std::size_t>(g.num_vertices()) * lat0.dim()) {
      throw std::invalid_argument("build_hierarchy: lattice does not match graph");
    }
    const bool one_dimensional =
        std::count_if(lat0.extents.begin(), lat0.extents.end(), [](Index e) { return e > 1; }) <= 1;
    cur.lattice = lat0;
    for (;;) {
      const int dim = next_dimension(*cur.lattice, one_dimensional);
      if (dim < 0) break;
      if (cur.lattice->extents[dim] % 2 != 0) {
        throw std::runtime_error("build_hierarchy: coarsening stalled, extent " +
                                 std::to_string(cur.lattice->extents[dim]) + " along dimension " +
                                 std::to_string(dim) + " is odd");
      }
      Partition p = aligned_matching(cur.graph, *cur.lattice, dim);
      LatticeCoords coarse_lat = coarse_lattice(*cur.lattice, p, dim);
      HierarchyLevel next = push_level(cur, std::move(p), dim);
      // |Q|_A^2 <= 2 for aligned matchings.
      cur.c_g = 2.0 * cur.sigma;
      next.lattice = std::move(coarse_lat);
      stack.push_back(std::move(cur));
      cur = std::move(next);
    }
  } else {
    const int matchings = static_cast<int>(std::floor(std::log2(static_cast<double>(finest_n)) / 2.0));
    SplitMix64 seeds(opts.seed);
    for (int t = 0; t < matchings; ++t) {
      Partition p = random_maximal_matching(cur.graph, seeds.next());
      const PiOperator pi = build_pi_matching(cur.graph, p);
      const double d = pi_norm_bounds(pi).gershgorin_bound;
      HierarchyLevel next = push_level(cur, std::move(p), -1);
      cur.c_g = cur.sigma * std::max(1.0, d);
      stack.push_back(std::move(cur));
      cur = std::move(next);
    }
  }
  stack.push_back(std::move(cur));
  std::reverse(stack.begin(), stack.end());
  h.levels_ = std::move(stack);

  double c = 1.0;
  for (int k = 2; k <= h.num_levels(); ++k) c = std::max(c, h.level(k).c_g);
  if (c > 4.0) {
    std::ostringstream msg;
    msg << "c_g = " << c << " exceeds 4; theta schedule uses c = 4";
    h.warnings_.push_back(msg.str());
    c = 4.0;
  }
  h.schedule_c_ = c;
  h.theta_ = opts.variant == Variant::modified ? theta_schedule_modified(h.num_levels())
                                               : theta_schedule(c, h.num_levels());
  h.coarsest_pinv_ = laplacian_pinv(h.levels_.front().graph);
  return h;
}

}  // namespace amli
