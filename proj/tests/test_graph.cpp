#include <doctest.h>

#include <filesystem>
#include <set>
#include <sstream>

#include "amli/graph.hpp"
#include "amli/graph_io.hpp"
#include "amli/meshgen.hpp"
#include "support.hpp"

using namespace amli;
using namespace amli::testing;

TEST_CASE("edges are normalized and adjacency mirrors them") {
  const Graph g(4, {{2, 1}, {0, 3}, {3, 2}});
  CHECK(g.edge(0) == Edge{1, 2});
  CHECK(g.edge(1) == Edge{0, 3});
  CHECK(g.edge(2) == Edge{2, 3});
  Index entries = 0;
  for (Index i = 0; i < g.num_vertices(); ++i) {
    auto nb = g.neighbors(i);
    CHECK(std::is_sorted(nb.begin(), nb.end()));
    for (std::size_t t = 0; t < nb.size(); ++t) {
      const auto& e = g.edge(g.incident_edges(i)[t]);
      CHECK(((e.u == i && e.v == nb[t]) || (e.v == i && e.u == nb[t])));
    }
    entries += g.degree(i);
  }
  CHECK(entries == 2 * g.num_edges());
  CHECK(g.find_edge(3, 0) == 1);
  CHECK(g.find_edge(0, 1) == -1);
}

TEST_CASE("invalid edge lists are rejected") {
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{-1, 1}}), std::invalid_argument);
}

TEST_CASE("laplacian on small graphs") {
  const Graph p3 = path_graph(3);
  CHECK(laplacian_apply(p3, Vec{1, 0, 0}) == Vec{1, -1, 0});
  const Graph c4 = cycle_graph(4);
  const Vec u{1, 0, 1, 0};
  const Vec expect = dense_laplacian(c4) * std::span<const double>(u);
  CHECK(expect == Vec{2, -2, 2, -2});
  CHECK(laplacian_apply(c4, u) == expect);
  CHECK(laplacian_apply(c4, Vec(4, 1.0)) == Vec(4, 0.0));
  CHECK_THROWS_AS(laplacian_apply(p3, Vec{1, 2}), std::invalid_argument);
}

TEST_CASE("incidence operator and its transpose") {
  const Graph p3 = path_graph(3);
  CHECK(incidence_apply(p3, Vec{1, 0, 0}) == Vec{1, 0});
  CHECK(incidence_apply(p3, Vec(3, 2.5)) == Vec(2, 0.0));
  CHECK(incidence_transpose_apply(p3, Vec{1, 0}) == Vec{1, -1, 0});
  CHECK(incidence_transpose_apply(p3, incidence_apply(p3, Vec(3, 1.0))) == Vec(3, 0.0));
  CHECK_THROWS_AS(incidence_apply(p3, Vec{1}), std::invalid_argument);
  CHECK_THROWS_AS(incidence_transpose_apply(p3, Vec{1, 2, 3}), std::invalid_argument);
}

TEST_CASE("A = B^T B and B, B^T are adjoint on random graphs") {
  SplitMix64 rng(3);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Index n = 2 + static_cast<Index>(rng.below(19));
    const Graph g = random_connected_graph(n, n, seed);
    const DenseMatrix a = dense_laplacian(g);
    // Dense B built row by row from the orientation rule.
    DenseMatrix b(g.num_edges(), n);
    for (Index k = 0; k < g.num_edges(); ++k) {
      b(k, g.edge(k).u) = 1.0;
      b(k, g.edge(k).v) = -1.0;
    }
    CHECK((b.transpose() * b - a).max_abs() == 0.0);
    const Vec u = random_vector(n, rng), w = random_vector(g.num_edges(), rng);
    CHECK(max_abs_diff(incidence_transpose_apply(g, incidence_apply(g, u)), laplacian_apply(g, u)) < 1e-12);
    CHECK(std::abs(dot(incidence_apply(g, u), w) - dot(u, incidence_transpose_apply(g, w))) < 1e-12);
  }
}

TEST_CASE("laplacian properties on random vectors") {
  SplitMix64 rng(11);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Graph g = random_connected_graph(25, 30, seed);
    const Vec u = random_vector(25, rng);
    const Vec au = laplacian_apply(g, u);
    const double nu = std::sqrt(dot(u, u));
    CHECK(std::abs(dot(au, Vec(25, 1.0))) <= 1e-12 * nu);
    const Vec bu = incidence_apply(g, u);
    CHECK(std::abs(dot(bu, bu) - dot(au, u)) <= 1e-12 * std::max(1.0, dot(au, u)));
    CHECK(dot(au, u) >= -1e-12 * nu * nu);
  }
}

TEST_CASE("connected components") {
  CHECK(count_components(path_graph(3)) == 1);
  const Graph two(4, {{0, 1}, {2, 3}});
  CHECK(count_components(two) == 2);
  CHECK_FALSE(is_connected(two));
  const auto labels = connected_components(two);
  CHECK(labels[0] == labels[1]);
  CHECK(labels[0] != labels[2]);

  // Agreement with a transitive-closure oracle on sparse random graphs.
  SplitMix64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const Index n = 5 + static_cast<Index>(rng.below(26));
    std::vector<Edge> edges;
    std::set<std::pair<Index, Index>> seen;
    for (Index k = 0; k < n / 2 + 1; ++k) {
      Index a = static_cast<Index>(rng.below(n)), b = static_cast<Index>(rng.below(n));
      if (a == b || !seen.insert({std::min(a, b), std::max(a, b)}).second) continue;
      edges.push_back({a, b});
    }
    const Graph g(n, edges);
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (Index i = 0; i < n; ++i) reach[i][i] = 1;
    for (const auto& e : g.edges()) reach[e.u][e.v] = reach[e.v][e.u] = 1;
    for (Index k = 0; k < n; ++k)
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
          if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
    const auto lab = connected_components(g);
    Index max_label = 0;
    for (Index i = 0; i < n; ++i) {
      max_label = std::max(max_label, lab[i]);
      for (Index j = 0; j < n; ++j) CHECK((lab[i] == lab[j]) == static_cast<bool>(reach[i][j]));
    }
    CHECK(max_label + 1 == count_components(g));
  }
}

TEST_CASE("matrix market round trip") {
  const Graph p3 = path_graph(3);
  std::stringstream ss;
  write_matrix_market(p3, ss);
  const Graph back = read_matrix_market(ss);
  CHECK(back.num_vertices() == 3);
  std::set<std::pair<Index, Index>> a, b;
  for (const auto& e : p3.edges()) a.insert({e.u, e.v});
  for (const auto& e : back.edges()) b.insert({e.u, e.v});
  CHECK(a == b);

  const auto path = std::filesystem::temp_directory_path() / "amli_grid44.mtx";
  save_graph(grid_graph({{4, 4}, {}}).graph, path);
  const Graph grid = load_graph(path);
  CHECK(grid.num_vertices() == 16);
  CHECK(grid.num_edges() == 2 * 4 * 3);
  std::filesystem::remove(path);
}

TEST_CASE("matrix market rejects malformed input") {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_matrix_market(in);
  };
  const std::string hdr = "%%MatrixMarket matrix coordinate pattern symmetric\n";
  CHECK_THROWS_AS(parse(hdr + "3 3 1\n2 2\n"), FormatError);
  CHECK_THROWS_AS(parse("%%MatrixMarket matrix coordinate pattern general\n3 3 1\n2 1\n"), FormatError);
  CHECK_THROWS_AS(parse("%%MatrixMarket matrix coordinate real symmetric\n3 3 1\n2 1 1.0\n"), FormatError);
  CHECK_THROWS_AS(parse(hdr + "3 4 1\n2 1\n"), FormatError);
  CHECK_THROWS_AS(parse(hdr + "3 3 2\n2 1\n"), FormatError);
  CHECK_THROWS_AS(parse(hdr + "3 3 2\n2 1\n1 2\n"), FormatError);
  CHECK_THROWS_AS(parse(hdr + "3 3 1\n4 1\n"), FormatError);
  CHECK_THROWS_AS(parse(""), FormatError);
  CHECK(parse(hdr + "% comment\n3 3 2\n2 1\n3 2\n").num_edges() == 2);
}
