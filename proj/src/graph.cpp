#include "amli/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace amli {

namespace {

void check_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": expected length " + std::to_string(want) +
                                ", got " + std::to_string(got));
  }
}

}  // namespace

Graph::Graph(Index n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 1) throw std::invalid_argument("graph must have at least one vertex");
  std::vector<Index> deg(n_, 0);
  for (auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (e.u == e.v) throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
    ++deg[e.u];
    ++deg[e.v];
  }
  offsets_.assign(n_ + 1, 0);
  for (Index i = 0; i < n_; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
  nbrs_.resize(offsets_[n_]);
  nbr_edge_.resize(offsets_[n_]);
  std::vector<Index> fill(offsets_.begin(), offsets_.end() - 1);
  for (Index k = 0; k < num_edges(); ++k) {
    const auto& e = edges_[k];
    nbrs_[fill[e.u]] = e.v;
    nbr_edge_[fill[e.u]++] = k;
    nbrs_[fill[e.v]] = e.u;
    nbr_edge_[fill[e.v]++] = k;
  }
  std::vector<std::pair<Index, Index>> tmp;
  for (Index i = 0; i < n_; ++i) {
    tmp.clear();
    for (Index p = offsets_[i]; p < offsets_[i + 1]; ++p) tmp.emplace_back(nbrs_[p], nbr_edge_[p]);
    std::sort(tmp.begin(), tmp.end());
    for (std::size_t q = 0; q < tmp.size(); ++q) {
      if (q > 0 && tmp[q].first == tmp[q - 1].first) {
        throw std::invalid_argument("duplicate edge (" + std::to_string(std::min(i, tmp[q].first)) +
                                    "," + std::to_string(std::max(i, tmp[q].first)) + ")");
      }
      nbrs_[offsets_[i] + q] = tmp[q].first;
      nbr_edge_[offsets_[i] + q] = tmp[q].second;
    }
  }
}

Index Graph::max_degree() const {
  Index d = 0;
  for (Index i = 0; i < n_; ++i) d = std::max(d, degree(i));
  return d;
}

Index Graph::find_edge(Index a, Index b) const {
  auto nb = neighbors(a);
  auto it = std::lower_bound(nb.begin(), nb.end(), b);
  if (it == nb.end() || *it != b) return -1;
  return incident_edges(a)[it - nb.begin()];
}

void laplacian_apply(const Graph& g, std::span<const double> u, std::span<double> out) {
  check_size(u.size(), g.num_vertices(), "laplacian_apply");
  check_size(out.size(), g.num_vertices(), "laplacian_apply output");
  for (Index i = 0; i < g.num_vertices(); ++i) {
    double s = 0.0;
    for (Index j : g.neighbors(i)) s += u[j];
    out[i] = g.degree(i) * u[i] - s;
  }
}

Vec laplacian_apply(const Graph& g, std::span<const double> u) {
  Vec out(g.num_vertices());
  laplacian_apply(g, u, out);
  return out;
}

void incidence_apply(const Graph& g, std::span<const double> u, std::span<double> out) {
  check_size(u.size(), g.num_vertices(), "incidence_apply");
  check_size(out.size(), g.num_edges(), "incidence_apply output");
  const auto& es = g.edges();
  for (std::size_t k = 0; k < es.size(); ++k) out[k] = u[es[k].u] - u[es[k].v];
}

Vec incidence_apply(const Graph& g, std::span<const double> u) {
  Vec out(g.num_edges());
  incidence_apply(g, u, out);
  return out;
}

void incidence_transpose_apply(const Graph& g, std::span<const double> w, std::span<double> out) {
  check_size(w.size(), g.num_edges(), "incidence_transpose_apply");
  check_size(out.size(), g.num_vertices(), "incidence_transpose_apply output");
  std::fill(out.begin(), out.end(), 0.0);
  const auto& es = g.edges();
  for (std::size_t k = 0; k < es.size(); ++k) {
    out[es[k].u] += w[k];
    out[es[k].v] -= w[k];
  }
}

Vec incidence_transpose_apply(const Graph& g, std::span<const double> w) {
  Vec out(g.num_vertices());
  incidence_transpose_apply(g, w, out);
  return out;
}

std::vector<Index> connected_components(const Graph& g) {
  const Index n = g.num_vertices();
  std::vector<Index> label(n, -1);
  std::vector<Index> stack;
  Index next = 0;
  for (Index s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      Index v = stack.back();
      stack.pop_back();
      for (Index w : g.neighbors(v)) {
        if (label[w] < 0) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

Index count_components(const Graph& g) {
  auto labels = connected_components(g);
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

bool is_connected(const Graph& g) { return count_components(g) == 1; }

bool is_connected_subset(const Graph& g, std::span<const Index> vertices) {
  if (vertices.size() <= 1) return true;
  std::vector<Index> sorted(vertices.begin(), vertices.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<char> seen(sorted.size(), 0);
  auto local = [&](Index v) -> std::ptrdiff_t {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
    return (it != sorted.end() && *it == v) ? it - sorted.begin() : -1;
  };
  std::vector<Index> stack{sorted[0]};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    Index v = stack.back();
    stack.pop_back();
    for (Index w : g.neighbors(v)) {
      auto l = local(w);
      if (l >= 0 && !seen[l]) {
        seen[l] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == sorted.size();
}

}  // namespace amli
