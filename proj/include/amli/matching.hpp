#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "amli/graph.hpp"
#include "amli/meshgen.hpp"

namespace amli {

struct VertexPair {
  Index first = 0;  // first < second
  Index second = 0;
  friend bool operator==(const VertexPair&, const VertexPair&) = default;
};

/// Disjoint cover of the vertex set by aggregates.
///
/// Aggregates are numbered by their smallest vertex; that number is the
/// coarse vertex index. matched_pairs() lists the aggregates of size two in
/// the same order and fixes the column order of the complement map Y.
class Partition {
 public:
  Partition() = default;

  /// Pairs are normalized to first < second; uncovered vertices become
  /// singletons. Throws std::invalid_argument if pairs overlap or are out of
  /// range.
  static Partition from_pairs(Index n, std::span<const VertexPair> pairs);

  /// Throws std::invalid_argument unless `aggregates` are nonempty, disjoint
  /// and cover [0, n).
  static Partition from_aggregates(Index n, std::vector<std::vector<Index>> aggregates);

  /// Every vertex its own aggregate.
  static Partition singletons(Index n);

  Index num_vertices() const { return static_cast<Index>(vertex_to_aggregate_.size()); }
  Index num_aggregates() const { return static_cast<Index>(agg_offsets_.size()) - 1; }

  std::span<const Index> members(Index a) const {
    return {agg_members_.data() + agg_offsets_[a], agg_members_.data() + agg_offsets_[a + 1]};
  }
  Index aggregate_size(Index a) const { return agg_offsets_[a + 1] - agg_offsets_[a]; }
  Index aggregate_of(Index v) const { return vertex_to_aggregate_[v]; }
  const std::vector<Index>& vertex_to_aggregate() const { return vertex_to_aggregate_; }

  const std::vector<VertexPair>& matched_pairs() const { return pairs_; }
  /// Pair index of the aggregate, or -1 if it is not a pair.
  Index pair_of_aggregate(Index a) const { return agg_to_pair_[a]; }
  const std::vector<Index>& singletons() const { return singletons_; }

  /// True when no aggregate has more than two vertices.
  bool is_matching() const;

  /// Checks the partition against a graph: sizes agree, every aggregate
  /// induces a connected subgraph (so pairs are edges). Throws
  /// std::invalid_argument otherwise.
  void validate(const Graph& g) const;

 private:
  void finalize(Index n, std::vector<std::vector<Index>> aggregates);

  std::vector<Index> agg_offsets_{0};
  std::vector<Index> agg_members_;
  std::vector<Index> vertex_to_aggregate_;
  std::vector<VertexPair> pairs_;
  std::vector<Index> agg_to_pair_;
  std::vector<Index> singletons_;
};

/// Pairs (v, v + e_dim) for every v with even 0-based coordinate along `dim`
/// (odd in 1-based terms). Vertices whose partner is absent (masked grids)
/// stay singletons. Throws std::invalid_argument if the extent along `dim`
/// is odd or `dim` is out of range.
Partition aligned_matching(const Graph& g, const LatticeCoords& lattice, int dim);

/// Greedy maximal matching over edges visited in seed-shuffled order.
Partition random_maximal_matching(const Graph& g, std::uint64_t seed);

struct Quotient {
  Graph graph;                     // coarse graph, edges sorted
  std::vector<Index> multiplicity; // fine edges behind each coarse edge
};

/// Unweighted quotient graph plus the fine-edge count per coarse edge.
Quotient quotient(const Graph& g, const Partition& p);
Graph coarse_graph(const Graph& g, const Partition& p);
std::vector<Index> edge_multiplicity(const Graph& g, const Partition& p);

/// Lattice of the coarse graph after aligned_matching along `dim`.
LatticeCoords coarse_lattice(const LatticeCoords& fine, const Partition& p, int dim);

}  // namespace amli
