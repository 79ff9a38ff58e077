#include "amli/matching.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "amli/rng.hpp"

namespace amli {

void Partition::finalize(Index n, std::vector<std::vector<Index>> aggregates) {
  vertex_to_aggregate_.assign(n, -1);
  for (auto& agg : aggregates) {
    if (agg.empty()) throw std::invalid_argument("partition: empty aggregate");
    std::sort(agg.begin(), agg.end());
  }
  std::sort(aggregates.begin(), aggregates.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  agg_offsets_.assign(1, 0);
  agg_members_.clear();
  pairs_.clear();
  singletons_.clear();
  agg_to_pair_.clear();
  for (std::size_t a = 0; a < aggregates.size(); ++a) {
    for (Index v : aggregates[a]) {
      if (v < 0 || v >= n) throw std::invalid_argument("partition: vertex out of range");
      if (vertex_to_aggregate_[v] >= 0) {
        throw std::invalid_argument("partition: vertex " + std::to_string(v) + " in two aggregates");
      }
      vertex_to_aggregate_[v] = static_cast<Index>(a);
      agg_members_.push_back(v);
    }
    agg_offsets_.push_back(static_cast<Index>(agg_members_.size()));
    if (aggregates[a].size() == 2) {
      agg_to_pair_.push_back(static_cast<Index>(pairs_.size()));
      pairs_.push_back({aggregates[a][0], aggregates[a][1]});
    } else {
      agg_to_pair_.push_back(-1);
      if (aggregates[a].size() == 1) singletons_.push_back(aggregates[a][0]);
    }
  }
  for (Index v = 0; v < n; ++v) {
    if (vertex_to_aggregate_[v] < 0) {
      throw std::invalid_argument("partition: vertex " + std::to_string(v) + " not covered");
    }
  }
}

Partition Partition::from_pairs(Index n, std::span<const VertexPair> pairs) {
  std::vector<char> used(n, 0);
  std::vector<std::vector<Index>> aggs;
  aggs.reserve(n);
  for (const auto& pr : pairs) {
    const Index a = std::min(pr.first, pr.second), b = std::max(pr.first, pr.second);
    if (a < 0 || b >= n) throw std::invalid_argument("partition: pair out of range");
    if (a == b) throw std::invalid_argument("partition: degenerate pair");
    if (used[a] || used[b]) throw std::invalid_argument("partition: pairs are not disjoint");
    used[a] = used[b] = 1;
    aggs.push_back({a, b});
  }
  for (Index v = 0; v < n; ++v)
    if (!used[v]) aggs.push_back({v});
  Partition p;
  p.finalize(n, std::move(aggs));
  return p;
}

Partition Partition::from_aggregates(Index n, std::vector<std::vector<Index>> aggregates) {
  Partition p;
  p.finalize(n, std::move(aggregates));
  return p;
}

Partition Partition::singletons(Index n) { return from_pairs(n, {}); }

bool Partition::is_matching() const {
  for (Index a = 0; a < num_aggregates(); ++a)
    if (aggregate_size(a) > 2) return false;
  return true;
}

void Partition::validate(const Graph& g) const {
  if (num_vertices() != g.num_vertices()) {
    throw std::invalid_argument("partition covers " + std::to_string(num_vertices()) +
                                " vertices, graph has " + std::to_string(g.num_vertices()));
  }
  for (Index a = 0; a < num_aggregates(); ++a) {
    if (!is_connected_subset(g, members(a))) {
      throw std::invalid_argument("partition: aggregate " + std::to_string(a) + " is not connected");
    }
  }
}

Partition aligned_matching(const Graph& g, const LatticeCoords& lattice, int dim) {
  if (dim < 0 || dim >= lattice.dim()) throw std::invalid_argument("aligned_matching: dimension out of range");
  if (lattice.extents[dim] % 2 != 0) {
    throw std::invalid_argument("aligned_matching: extent " + std::to_string(lattice.extents[dim]) +
                                " along dimension " + std::to_string(dim) + " is odd");
  }
  const Index n = g.num_vertices();
  if (static_cast<std::size_t>(n) * lattice.dim() != lattice.coords.size()) {
    throw std::invalid_argument("aligned_matching: coordinate count does not match graph");
  }
  std::vector<std::size_t> strides(lattice.dim());
  std::size_t stride = 1;
  for (int j = 0; j < lattice.dim(); ++j) {
    strides[j] = stride;
    stride *= lattice.extents[j];
  }
  std::vector<Index> id(lattice.box_size(), -1);
  auto linear = [&](Index v) {
    std::size_t lin = 0;
    auto c = lattice.of(v);
    for (int j = 0; j < lattice.dim(); ++j) lin += static_cast<std::size_t>(c[j]) * strides[j];
    return lin;
  };
  for (Index v = 0; v < n; ++v) id[linear(v)] = v;

  std::vector<VertexPair> pairs;
  for (Index v = 0; v < n; ++v) {
    if (lattice.of(v)[dim] % 2 != 0) continue;
    const Index w = id[linear(v) + strides[dim]];
    if (w < 0) continue;
    if (g.find_edge(v, w) < 0) throw std::invalid_argument("aligned_matching: lattice neighbors not adjacent");
    pairs.push_back({std::min(v, w), std::max(v, w)});
  }
  return Partition::from_pairs(n, pairs);
}

Partition random_maximal_matching(const Graph& g, std::uint64_t seed) {
  std::vector<Index> order(g.num_edges());
  for (Index k = 0; k < g.num_edges(); ++k) order[k] = k;
  SplitMix64 rng(seed);
  rng.shuffle(order);
  std::vector<char> used(g.num_vertices(), 0);
  std::vector<VertexPair> pairs;
  for (Index k : order) {
    const auto& e = g.edge(k);
    if (used[e.u] || used[e.v]) continue;
    used[e.u] = used[e.v] = 1;
    pairs.push_back({e.u, e.v});
  }
  return Partition::from_pairs(g.num_vertices(), pairs);
}

Quotient quotient(const Graph& g, const Partition& p) {
  if (p.num_vertices() != g.num_vertices()) throw std::invalid_argument("quotient: partition size mismatch");
  std::vector<Edge> coarse;
  coarse.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    const Index a = p.aggregate_of(e.u), b = p.aggregate_of(e.v);
    if (a != b) coarse.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(coarse.begin(), coarse.end());
  std::vector<Edge> unique_edges;
  std::vector<Index> mult;
  for (const auto& e : coarse) {
    if (!unique_edges.empty() && unique_edges.back() == e) {
      ++mult.back();
    } else {
      unique_edges.push_back(e);
      mult.push_back(1);
    }
  }
  return {Graph(p.num_aggregates(), std::move(unique_edges)), std::move(mult)};
}

Graph coarse_graph(const Graph& g, const Partition& p) {
  p.validate(g);
  return quotient(g, p).graph;
}

std::vector<Index> edge_multiplicity(const Graph& g, const Partition& p) { return quotient(g, p).multiplicity; }

LatticeCoords coarse_lattice(const LatticeCoords& fine, const Partition& p, int dim) {
  LatticeCoords out;
  out.extents = fine.extents;
  out.extents[dim] = fine.extents[dim] / 2;
  out.coords.resize(static_cast<std::size_t>(p.num_aggregates()) * fine.dim());
  for (Index a = 0; a < p.num_aggregates(); ++a) {
    auto c = fine.of(p.members(a)[0]);
    for (int j = 0; j < fine.dim(); ++j) out.coords[static_cast<std::size_t>(a) * fine.dim() + j] = c[j];
    out.coords[static_cast<std::size_t>(a) * fine.dim() + dim] = c[dim] / 2;
  }
  return out;
}

}  // namespace amli
