#include "amli/precond.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "amli/rng.hpp"

namespace amli {

SmootherConfig SmootherConfig::cg(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("SmootherConfig::cg: tolerance must be positive");
  return {SmootherKind::cg, tol, 1};
}

SmootherConfig SmootherConfig::richardson(int sweeps) {
  if (sweeps < 1) throw std::invalid_argument("SmootherConfig::richardson: sweeps must be >= 1");
  return {SmootherKind::richardson, 1e-6, sweeps};
}

void CsrMatrix::apply(std::span<const double> x, std::span<double> out) const {
  for (Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Index t = offsets[i]; t < offsets[i + 1]; ++t) s += vals[t] * x[cols[t]];
    out[i] = s;
  }
}

double CsrMatrix::abs_row_sum_max() const {
  double m = 0.0;
  for (Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Index t = offsets[i]; t < offsets[i + 1]; ++t) s += std::abs(vals[t]);
    m = std::max(m, s);
  }
  return m;
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix d(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index t = offsets[i]; t < offsets[i + 1]; ++t) d(i, cols[t]) += vals[t];
  return d;
}

namespace {

Index pair_index(const Partition& p, Index v) { return p.pair_of_aggregate(p.aggregate_of(v)); }

double pair_sign(const Partition& p, Index q, Index v) { return p.matched_pairs()[q].first == v ? 1.0 : -1.0; }

std::uint64_t laplacian_flops(const Graph& g) {
  return 2ull * (static_cast<std::uint64_t>(g.num_vertices()) + 2ull * g.num_edges());
}

}  // namespace

CsrMatrix assemble_ytay(const Graph& g, const Partition& p) {
  if (p.num_vertices() != g.num_vertices()) throw std::invalid_argument("assemble_ytay: partition size mismatch");
  const auto& pairs = p.matched_pairs();
  CsrMatrix m;
  m.n = static_cast<Index>(pairs.size());
  std::vector<std::pair<Index, double>> row;
  for (Index q = 0; q < m.n; ++q) {
    const auto [i, j] = pairs[q];
    row.clear();
    // (A(e_i - e_j), e_i - e_j) = deg i + deg j + 2 since {i, j} is an edge.
    row.push_back({q, static_cast<double>(g.degree(i) + g.degree(j) + 2)});
    for (Index x : {i, j}) {
      const double sx = pair_sign(p, q, x);
      for (Index z : g.neighbors(x)) {
        const Index r = pair_index(p, z);
        if (r < 0 || r == q) continue;
        row.push_back({r, -sx * pair_sign(p, r, z)});
      }
    }
    std::sort(row.begin(), row.end());
    for (std::size_t t = 0; t < row.size();) {
      const Index col = row[t].first;
      double v = 0.0;
      for (; t < row.size() && row[t].first == col; ++t) v += row[t].second;
      if (v != 0.0) {
        m.cols.push_back(col);
        m.vals.push_back(v);
      }
    }
    m.offsets.push_back(static_cast<Index>(m.cols.size()));
  }
  return m;
}

void apply_Yt(const Partition& p, std::span<const double> v, std::span<double> out) {
  const auto& pairs = p.matched_pairs();
  for (std::size_t q = 0; q < pairs.size(); ++q) out[q] = v[pairs[q].first] - v[pairs[q].second];
}

void add_Y(const Partition& p, std::span<const double> w, std::span<double> out) {
  const auto& pairs = p.matched_pairs();
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    out[pairs[q].first] += w[q];
    out[pairs[q].second] -= w[q];
  }
}

void apply_Pt(const Partition& p, std::span<const double> v, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const auto& agg = p.vertex_to_aggregate();
  for (std::size_t i = 0; i < agg.size(); ++i) out[agg[i]] += v[i];
}

void add_P(const Partition& p, std::span<const double> c, std::span<double> out) {
  const auto& agg = p.vertex_to_aggregate();
  for (std::size_t i = 0; i < agg.size(); ++i) out[i] += c[agg[i]];
}

void project_out_constants(std::span<double> v) {
  if (v.empty()) return;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (double& x : v) x -= mean;
}

struct PairBlock::Factor {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
};

PairBlock::PairBlock(const Graph& g, const Partition& p, const SmootherConfig& cfg)
    : ytay_(assemble_ytay(g, p)), cfg_(cfg) {
  const double l1 = ytay_.abs_row_sum_max();
  omega_ = l1 > 0.0 ? 1.0 / l1 : 0.0;
  if (cfg_.kind == SmootherKind::exact && ytay_.n > 0) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(ytay_.vals.size());
    for (Index i = 0; i < ytay_.n; ++i)
      for (Index t = ytay_.offsets[i]; t < ytay_.offsets[i + 1]; ++t) trips.emplace_back(i, ytay_.cols[t], ytay_.vals[t]);
    Eigen::SparseMatrix<double> s(ytay_.n, ytay_.n);
    s.setFromTriplets(trips.begin(), trips.end());
    factor_ = std::make_unique<Factor>();
    factor_->llt.compute(s);
    if (factor_->llt.info() != Eigen::Success) throw std::runtime_error("PairBlock: Y^T A Y factorization failed");
  }
}

PairBlock::~PairBlock() = default;
PairBlock::PairBlock(PairBlock&&) noexcept = default;
PairBlock& PairBlock::operator=(PairBlock&&) noexcept = default;

void PairBlock::apply(std::span<const double> x, std::span<double> out) const {
  if (x.size() != static_cast<std::size_t>(ytay_.n) || out.size() != x.size()) {
    throw std::invalid_argument("ytay_apply: expected length " + std::to_string(ytay_.n) + ", got " +
                                std::to_string(x.size()));
  }
  ytay_.apply(x, out);
}

Vec PairBlock::apply(std::span<const double> x) const {
  Vec out(x.size());
  apply(x, out);
  return out;
}

std::uint64_t PairBlock::solve(std::span<const double> b, std::span<double> x) const {
  const Index n = ytay_.n;
  if (b.size() != static_cast<std::size_t>(n) || x.size() != b.size()) {
    throw std::invalid_argument("ytay_solve: expected length " + std::to_string(n) + ", got " +
                                std::to_string(b.size()));
  }
  if (n == 0) return 0;
  const std::uint64_t nnz = ytay_.vals.size();
  switch (cfg_.kind) {
    case SmootherKind::exact: {
      Eigen::Map<const Eigen::VectorXd> bb(b.data(), n);
      Eigen::Map<Eigen::VectorXd> xx(x.data(), n);
      xx = factor_->llt.solve(bb);
      const auto& l = factor_->llt.matrixL();
      return 4ull * static_cast<std::uint64_t>(l.nestedExpression().nonZeros()) + n;
    }
    case SmootherKind::richardson: {
      std::fill(x.begin(), x.end(), 0.0);
      Vec ax(n);
      std::uint64_t flops = 0;
      for (int s = 0; s < cfg_.sweeps; ++s) {
        ytay_.apply(x, ax);
        for (Index i = 0; i < n; ++i) x[i] += omega_ * (b[i] - ax[i]);
        flops += 2 * nnz + 3ull * n;
      }
      return flops;
    }
    case SmootherKind::cg: {
      std::fill(x.begin(), x.end(), 0.0);
      Vec r(b.begin(), b.end()), d(r), ad(n);
      double rr = 0.0;
      for (double v : r) rr += v * v;
      const double stop = cfg_.cg_tol * cfg_.cg_tol * rr;
      std::uint64_t flops = 2ull * n;
      for (Index it = 0; it < 10 * n + 10 && rr > stop; ++it) {
        ytay_.apply(d, ad);
        double dad = 0.0;
        for (Index i = 0; i < n; ++i) dad += d[i] * ad[i];
        const double alpha = rr / dad;
        double rr_new = 0.0;
        for (Index i = 0; i < n; ++i) {
          x[i] += alpha * d[i];
          r[i] -= alpha * ad[i];
          rr_new += r[i] * r[i];
        }
        const double beta = rr_new / rr;
        for (Index i = 0; i < n; ++i) d[i] = r[i] + beta * d[i];
        rr = rr_new;
        flops += 2 * nnz + 10ull * n;
      }
      return flops;
    }
  }
  return 0;
}

Vec PairBlock::solve(std::span<const double> b) const {
  Vec x(b.size());
  solve(b, x);
  return x;
}

namespace {

struct LevelBuffers {
  Vec res, ax, pr, px, c, u1, t, u2;
  void resize(Index n, Index pairs, Index nc) {
    res.resize(n);
    ax.resize(n);
    pr.resize(pairs);
    px.resize(pairs);
    c.resize(nc);
    u1.resize(nc);
    t.resize(nc);
    u2.resize(nc);
  }
};

// z = two-level action on r (r already orthogonal to constants). `coarse`
// writes sigma * (coarse correction) into its output; flops accumulate.
template <class Coarse>
void two_level_into(const Graph& g, const Partition& p, const PairBlock& block, double sigma, Coarse&& coarse,
                    std::span<const double> r, std::span<double> z, LevelBuffers& w, std::uint64_t& flops) {
  const std::size_t n = r.size();
  std::fill(z.begin(), z.end(), 0.0);
  apply_Yt(p, r, w.pr);
  flops += block.solve(w.pr, w.px);
  add_Y(p, w.px, z);

  laplacian_apply(g, z, w.ax);
  for (std::size_t i = 0; i < n; ++i) w.res[i] = r[i] - w.ax[i];
  apply_Pt(p, w.res, w.c);
  coarse(w.c, w.u1);
  for (double& v : w.u1) v /= sigma;
  add_P(p, w.u1, z);

  laplacian_apply(g, z, w.ax);
  for (std::size_t i = 0; i < n; ++i) w.res[i] = r[i] - w.ax[i];
  apply_Yt(p, w.res, w.pr);
  flops += block.solve(w.pr, w.px);
  add_Y(p, w.px, z);
  project_out_constants(z);
  flops += 2 * laplacian_flops(g) + 12ull * n + 2ull * w.c.size();
}

double remove_mean(std::span<double> v) {
  if (v.empty()) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (double& x : v) x -= mean;
  return std::abs(mean);
}

}  // namespace

Vec two_level_apply(const Graph& g, const Partition& p, const PairBlock& block, double sigma,
                    const CoarseAction& coarse, std::span<const double> r) {
  if (r.size() != static_cast<std::size_t>(g.num_vertices())) throw std::invalid_argument("two_level_apply: dimension mismatch");
  Vec rr(r.begin(), r.end());
  project_out_constants(rr);
  LevelBuffers w;
  w.resize(g.num_vertices(), block.size(), p.num_aggregates());
  Vec z(r.size());
  std::uint64_t flops = 0;
  two_level_into(
      g, p, block, sigma, [&](std::span<const double> c, std::span<double> out) { coarse(c, out); }, rr, z, w,
      flops);
  return z;
}

struct AmliPreconditioner::Workspace {
  std::vector<LevelBuffers> levels;  // levels[k-1] for level k >= 2
  std::uint64_t flops = 0;
};

AmliPreconditioner::AmliPreconditioner(const Hierarchy& h, std::optional<SmootherConfig> smoother, Index direct_limit)
    : h_(&h) {
  for (int k = 2; k <= h.num_levels(); ++k) {
    const auto& lvl = h.level(k);
    SmootherConfig cfg;
    if (smoother) {
      cfg = *smoother;
    } else if (h.variant() == Variant::modified) {
      cfg = SmootherConfig::richardson(1);
    } else {
      cfg = lvl.num_pairs() <= direct_limit ? SmootherConfig::direct() : SmootherConfig::cg(1e-6);
    }
    blocks_.emplace_back(lvl.graph, lvl.partition, cfg);
  }
}

AmliPreconditioner::~AmliPreconditioner() = default;
AmliPreconditioner::AmliPreconditioner(AmliPreconditioner&&) noexcept = default;

void AmliPreconditioner::apply_rec(int k, std::span<const double> r, std::span<double> z, Workspace& ws) const {
  if (k == 1) {
    const DenseMatrix& pinv = h_->coarsest_pinv();
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = pinv.row(i);
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += row[j] * r[j];
      z[i] = s;
    }
    ws.flops += 2ull * n * n;
    return;
  }
  const auto& lvl = h_->level(k);
  const auto& coarse_graph = h_->level(k - 1).graph;
  const AmliPoly q = amli_poly(h_->theta(k - 1));
  LevelBuffers& w = ws.levels[k - 1];
  // B_{k-1}^{-1} q(A_{k-1} B_{k-1}^{-1}) c = a B^{-1} c + b B^{-1} A B^{-1} c.
  auto coarse = [&](std::span<const double> c, std::span<double> out) {
    apply_rec(k - 1, c, out, ws);
    laplacian_apply(coarse_graph, out, w.t);
    apply_rec(k - 1, w.t, w.u2, ws);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = q.a * out[i] + q.b * w.u2[i];
    ws.flops += laplacian_flops(coarse_graph) + 3ull * out.size();
  };
  two_level_into(lvl.graph, lvl.partition, block(k), lvl.sigma, coarse, r, z, w, ws.flops);
}

void AmliPreconditioner::apply(std::span<const double> r, std::span<double> z, ApplyStats* stats) const {
  const Index n = h_->finest().num_vertices();
  if (r.size() != static_cast<std::size_t>(n) || z.size() != r.size()) {
    throw std::invalid_argument("amli_apply: expected length " + std::to_string(n));
  }
  const Vec out = apply_level(h_->num_levels(), r, stats);
  std::copy(out.begin(), out.end(), z.begin());
}

Vec AmliPreconditioner::apply(std::span<const double> r, ApplyStats* stats) const {
  Vec z(r.size());
  apply(r, z, stats);
  return z;
}

Vec AmliPreconditioner::apply_level(int k, std::span<const double> r, ApplyStats* stats) const {
  if (k < 1 || k > h_->num_levels()) throw std::out_of_range("apply_level: level out of range");
  const auto& lvl = h_->level(k);
  if (r.size() != static_cast<std::size_t>(lvl.num_vertices())) throw std::invalid_argument("apply_level: dimension mismatch");
  Workspace ws;
  ws.levels.resize(k);
  for (int j = 2; j <= k; ++j) {
    const auto& l = h_->level(j);
    ws.levels[j - 1].resize(l.num_vertices(), l.num_pairs(), l.partition.num_aggregates());
  }
  Vec rr(r.begin(), r.end());
  const double removed = remove_mean(rr);
  Vec z(r.size());
  apply_rec(k, rr, z, ws);
  project_out_constants(z);
  if (stats) {
    stats->flops += ws.flops;
    stats->mean_removed = std::max(stats->mean_removed, removed);
  }
  return z;
}

std::uint64_t AmliPreconditioner::operation_count() const {
  const Index n = h_->finest().num_vertices();
  SplitMix64 rng(12345);
  Vec r(n);
  for (double& v : r) v = rng.uniform(-1.0, 1.0);
  ApplyStats stats;
  apply(r, &stats);
  return stats.flops;
}

}  // namespace amli
