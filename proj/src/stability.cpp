#include "amli/stability.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "amli/rng.hpp"

namespace amli {

void PiOperator::append_row(Index k, std::vector<Entry> entries) {
  if (k != rows_done_ || k >= num_edges_) throw std::logic_error("PiOperator: rows must be appended in order");
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
  entries_.insert(entries_.end(), entries.begin(), entries.end());
  offsets_[k + 1] = static_cast<Index>(entries_.size());
  ++rows_done_;
}

void PiOperator::apply(std::span<const double> w, std::span<double> out) const {
  if (w.size() != static_cast<std::size_t>(num_edges_) || out.size() != w.size()) {
    throw std::invalid_argument("PiOperator::apply: dimension mismatch");
  }
  for (Index k = 0; k < num_edges_; ++k) {
    double s = 0.0;
    for (const auto& e : row(k)) s += e.value * w[e.col];
    out[k] = s;
  }
}

Vec PiOperator::apply(std::span<const double> w) const {
  Vec out(w.size());
  apply(w, out);
  return out;
}

DenseMatrix PiOperator::to_dense() const {
  DenseMatrix m(num_edges_, num_edges_);
  for (Index k = 0; k < num_edges_; ++k)
    for (const auto& e : row(k)) m(k, e.col) += e.value;
  return m;
}

Vec project_Q(const Partition& p, std::span<const double> v) {
  if (v.size() != static_cast<std::size_t>(p.num_vertices())) throw std::invalid_argument("project_Q: dimension mismatch");
  Vec out(v.size());
  for (Index a = 0; a < p.num_aggregates(); ++a) {
    auto mem = p.members(a);
    double s = 0.0;
    for (Index i : mem) s += v[i];
    s /= static_cast<double>(mem.size());
    for (Index i : mem) out[i] = s;
  }
  return out;
}

PiOperator build_pi_matching(const Graph& g, const Partition& p) {
  if (!p.is_matching()) throw std::invalid_argument("build_pi_matching: partition has aggregates larger than pairs");
  p.validate(g);
  std::vector<Index> pair_edge(p.matched_pairs().size());
  for (std::size_t q = 0; q < pair_edge.size(); ++q) {
    const auto& pr = p.matched_pairs()[q];
    pair_edge[q] = g.find_edge(pr.first, pr.second);
  }
  PiOperator pi(g.num_edges());
  for (Index k = 0; k < g.num_edges(); ++k) {
    const auto& e = g.edge(k);
    const Index ai = p.aggregate_of(e.u), aj = p.aggregate_of(e.v);
    if (ai == aj) {
      pi.append_row(k, {});
      continue;
    }
    std::vector<PiOperator::Entry> row{{k, 1.0}};
    for (Index x : {e.u, e.v}) {
      const Index q = p.pair_of_aggregate(p.aggregate_of(x));
      if (q < 0) continue;
      const double sk = (x == e.u) ? 1.0 : -1.0;
      const double sl = (x == p.matched_pairs()[q].first) ? 1.0 : -1.0;
      row.push_back({pair_edge[q], -0.5 * sk * sl});
    }
    pi.append_row(k, std::move(row));
  }
  return pi;
}

PiOperator build_pi_general(const Graph& g, const Partition& p, Index max_aggregate) {
  p.validate(g);
  const Index na = p.num_aggregates();

  // Per aggregate: internal edges (global ids) and, lazily, the vector
  // C^(l) = B_m (A_m + e_l e_l^T)^{-1} 1 / |V_m| for each local vertex l.
  struct Local {
    std::vector<Index> edges;
    std::map<Index, std::vector<double>> c_by_vertex;
  };
  std::vector<Local> local(na);
  for (Index a = 0; a < na; ++a) {
    auto mem = p.members(a);
    if (static_cast<Index>(mem.size()) > max_aggregate) {
      throw std::invalid_argument("build_pi_general: aggregate " + std::to_string(a) + " has " +
                                  std::to_string(mem.size()) + " vertices, cap is " + std::to_string(max_aggregate));
    }
    for (Index u : mem) {
      auto nb = g.neighbors(u);
      auto ids = g.incident_edges(u);
      for (std::size_t t = 0; t < nb.size(); ++t)
        if (nb[t] > u && p.aggregate_of(nb[t]) == a) local[a].edges.push_back(ids[t]);
    }
    std::sort(local[a].edges.begin(), local[a].edges.end());
  }

  auto c_vector = [&](Index a, Index vertex) -> const std::vector<double>& {
    auto& loc = local[a];
    auto it = loc.c_by_vertex.find(vertex);
    if (it != loc.c_by_vertex.end()) return it->second;
    auto mem = p.members(a);
    const std::size_t nv = mem.size();
    auto pos = [&](Index v) { return static_cast<std::size_t>(std::lower_bound(mem.begin(), mem.end(), v) - mem.begin()); };
    DenseMatrix am(nv, nv);
    for (Index k : loc.edges) {
      const auto& e = g.edge(k);
      const std::size_t i = pos(e.u), j = pos(e.v);
      am(i, i) += 1.0;
      am(j, j) += 1.0;
      am(i, j) -= 1.0;
      am(j, i) -= 1.0;
    }
    am(pos(vertex), pos(vertex)) += 1.0;
    const auto x = cholesky_solve(cholesky(am), std::vector<double>(nv, 1.0));
    std::vector<double> c(loc.edges.size());
    for (std::size_t t = 0; t < loc.edges.size(); ++t) {
      const auto& e = g.edge(loc.edges[t]);
      c[t] = (x[pos(e.u)] - x[pos(e.v)]) / static_cast<double>(nv);
    }
    return loc.c_by_vertex.emplace(vertex, std::move(c)).first->second;
  };

  PiOperator pi(g.num_edges());
  for (Index k = 0; k < g.num_edges(); ++k) {
    const auto& e = g.edge(k);
    const Index ai = p.aggregate_of(e.u), aj = p.aggregate_of(e.v);
    if (ai == aj) {
      pi.append_row(k, {});
      continue;
    }
    std::map<Index, double> acc;
    acc[k] += 1.0;
    const auto& ci = c_vector(ai, e.u);
    for (std::size_t t = 0; t < ci.size(); ++t) acc[local[ai].edges[t]] += ci[t];
    const auto& cj = c_vector(aj, e.v);
    for (std::size_t t = 0; t < cj.size(); ++t) acc[local[aj].edges[t]] -= cj[t];
    std::vector<PiOperator::Entry> row;
    for (const auto& [col, val] : acc)
      if (val != 0.0) row.push_back({col, val});
    pi.append_row(k, std::move(row));
  }
  return pi;
}

PiNormBounds pi_norm_bounds(const PiOperator& pi) {
  const Index m = pi.num_edges();
  PiNormBounds b;
  std::vector<double> col_sum(m, 0.0);
  std::vector<std::vector<PiOperator::Entry>> columns(m);
  for (Index k = 0; k < m; ++k) {
    double s = 0.0;
    for (const auto& e : pi.row(k)) {
      s += std::abs(e.value);
      col_sum[e.col] += std::abs(e.value);
      columns[e.col].push_back({k, e.value});
    }
    b.inf_norm = std::max(b.inf_norm, s);
  }
  for (double c : col_sum) b.one_norm = std::max(b.one_norm, c);
  b.product_bound = b.inf_norm * b.one_norm;

  std::vector<double> acc(m, 0.0);
  std::vector<char> mark(m, 0);
  std::vector<Index> touched;
  for (Index k = 0; k < m; ++k) {
    touched.clear();
    for (const auto& e : pi.row(k)) {
      for (const auto& other : columns[e.col]) {
        if (!mark[other.col]) {
          mark[other.col] = 1;
          touched.push_back(other.col);
        }
        acc[other.col] += e.value * other.value;
      }
    }
    double s = 0.0;
    for (Index t : touched) {
      s += std::abs(acc[t]);
      acc[t] = 0.0;
      mark[t] = 0;
    }
    b.gershgorin_bound = std::max(b.gershgorin_bound, s);
  }
  return b;
}

double pi_spectral_norm_sq(const PiOperator& pi) {
  const DenseMatrix d = pi.to_dense();
  const auto eig = eig_sym(d * d.transpose());
  return eig.values.empty() ? 0.0 : std::max(0.0, eig.values.back());
}

DenseMatrix dense_P(const Partition& p) {
  DenseMatrix m(p.num_vertices(), p.num_aggregates());
  for (Index a = 0; a < p.num_aggregates(); ++a)
    for (Index v : p.members(a)) m(v, a) = 1.0;
  return m;
}

DenseMatrix dense_Y(const Partition& p) {
  DenseMatrix m(p.num_vertices(), p.matched_pairs().size());
  for (std::size_t q = 0; q < p.matched_pairs().size(); ++q) {
    m(p.matched_pairs()[q].first, q) = 1.0;
    m(p.matched_pairs()[q].second, q) = -1.0;
  }
  return m;
}

double q_energy_norm(const Graph& g, const Partition& p, Index cap) {
  if (g.num_vertices() > cap) {
    throw std::length_error("q_energy_norm: " + std::to_string(g.num_vertices()) + " vertices exceeds dense cap " +
                            std::to_string(cap) + "; use the Pi-based bounds instead");
  }
  if (p.num_vertices() != g.num_vertices()) throw std::invalid_argument("q_energy_norm: partition size mismatch");
  const std::size_t n = g.num_vertices();
  if (n == 1) return 0.0;
  const DenseMatrix a = dense_laplacian(g);
  DenseMatrix q(n, n);
  for (Index agg = 0; agg < p.num_aggregates(); ++agg) {
    auto mem = p.members(agg);
    for (Index i : mem)
      for (Index j : mem) q(i, j) = 1.0 / static_cast<double>(mem.size());
  }
  const DenseMatrix qaq = q * a * q;
  const std::vector<double> ones(n, 1.0);
  return std::max(0.0, rayleigh_sup(qaq, a, ones));
}

double check_commutation(const Graph& g, const Partition& p, const PiOperator& pi, int trials, std::uint64_t seed) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  Vec v(g.num_vertices());
  for (int t = 0; t < trials; ++t) {
    double nrm = 0.0;
    for (double& x : v) {
      x = rng.uniform(-1.0, 1.0);
      nrm += x * x;
    }
    nrm = std::sqrt(nrm);
    for (double& x : v) x /= nrm;
    const Vec lhs = incidence_apply(g, project_Q(p, v));
    const Vec rhs = pi.apply(incidence_apply(g, v));
    for (std::size_t k = 0; k < lhs.size(); ++k) worst = std::max(worst, std::abs(lhs[k] - rhs[k]));
  }
  return worst;
}

}  // namespace amli
