#pragma once

#include <cmath>
#include <vector>

#include "amli/dense.hpp"
#include "amli/graph.hpp"
#include "amli/meshgen.hpp"
#include "amli/rng.hpp"

namespace amli::testing {

inline Graph path_graph(Index n) {
  std::vector<Edge> e;
  for (Index i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph(n, std::move(e));
}

inline Graph cycle_graph(Index n) {
  std::vector<Edge> e;
  for (Index i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return Graph(n, std::move(e));
}

/// Random spanning tree plus `extra` random chords (duplicates skipped).
inline Graph random_connected_graph(Index n, Index extra, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Edge> edges;
  std::vector<std::vector<char>> used(n, std::vector<char>(n, 0));
  auto add = [&](Index a, Index b) {
    if (a == b || used[a][b]) return;
    used[a][b] = used[b][a] = 1;
    edges.push_back({std::min(a, b), std::max(a, b)});
  };
  for (Index v = 1; v < n; ++v) add(v, static_cast<Index>(rng.below(v)));
  for (Index t = 0; t < extra; ++t) add(static_cast<Index>(rng.below(n)), static_cast<Index>(rng.below(n)));
  return Graph(n, std::move(edges));
}

inline Vec random_vector(std::size_t n, SplitMix64& rng) {
  Vec v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

inline Vec random_mean_free(std::size_t n, SplitMix64& rng) {
  Vec v = random_vector(n, rng);
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(n);
  for (double& x : v) x -= m;
  return v;
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Dense matrix of a linear map given by its action on unit vectors.
template <class F>
DenseMatrix assemble(std::size_t n, F&& apply) {
  DenseMatrix m(n, n);
  Vec e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vec col = apply(e);
    e[j] = 0.0;
    m.set_column(j, col);
  }
  return m;
}

/// Eigenvalues of the symmetric matrix M restricted to the complement of
/// the constants, ascending.
inline std::vector<double> eig_on_mean_free(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  const DenseMatrix q = complement_basis(std::vector<double>(n, 1.0));
  return eig_sym(q.transpose() * m * q).values;
}

}  // namespace amli::testing
