#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace amli {

using Index = std::int32_t;
using Vec = std::vector<double>;

/// Undirected edge stored with u < v. The orientation fixes the sign of the
/// discrete gradient: (Bu)_k = u[e.u] - u[e.v].
struct Edge {
  Index u = 0;
  Index v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable unweighted undirected graph.
///
/// Edges keep the order given at construction (each normalized to u < v), so
/// edge vectors are indexed by that order. Adjacency is stored as sorted
/// neighbor lists in compressed form, with the edge id of every adjacency
/// entry alongside.
class Graph {
 public:
  Graph() = default;

  /// Throws std::invalid_argument on out-of-range endpoints, self-loops or
  /// duplicate edges.
  Graph(Index n, std::vector<Edge> edges);

  Index num_vertices() const { return n_; }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(Index k) const { return edges_[k]; }

  std::span<const Index> neighbors(Index i) const {
    return {nbrs_.data() + offsets_[i], nbrs_.data() + offsets_[i + 1]};
  }
  /// Edge ids parallel to neighbors(i).
  std::span<const Index> incident_edges(Index i) const {
    return {nbr_edge_.data() + offsets_[i], nbr_edge_.data() + offsets_[i + 1]};
  }
  Index degree(Index i) const { return offsets_[i + 1] - offsets_[i]; }
  Index max_degree() const;

  /// Edge id of {a, b}, or -1 if absent.
  Index find_edge(Index a, Index b) const;

 private:
  Index n_ = 0;
  std::vector<Edge> edges_;
  std::vector<Index> offsets_{0};
  std::vector<Index> nbrs_;
  std::vector<Index> nbr_edge_;
};

/// out = A u, with A = D - adjacency. `out` must not alias `u`.
void laplacian_apply(const Graph& g, std::span<const double> u, std::span<double> out);
Vec laplacian_apply(const Graph& g, std::span<const double> u);

/// Discrete gradient B: vertices -> edges.
void incidence_apply(const Graph& g, std::span<const double> u, std::span<double> out);
Vec incidence_apply(const Graph& g, std::span<const double> u);

/// B^T: edges -> vertices.
void incidence_transpose_apply(const Graph& g, std::span<const double> w, std::span<double> out);
Vec incidence_transpose_apply(const Graph& g, std::span<const double> w);

/// Component label per vertex, labels numbered 0.. in order of first vertex.
std::vector<Index> connected_components(const Graph& g);
Index count_components(const Graph& g);
bool is_connected(const Graph& g);

/// Vertex-induced subgraph connectivity test.
bool is_connected_subset(const Graph& g, std::span<const Index> vertices);

}  // namespace amli
