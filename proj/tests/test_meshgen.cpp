#include <doctest.h>

#include <algorithm>
#include <set>

#include "amli/meshgen.hpp"
#include "support.hpp"

using namespace amli;
using namespace amli::testing;

namespace {

std::set<std::pair<Index, Index>> edge_set(const Graph& g) {
  std::set<std::pair<Index, Index>> s;
  for (const auto& e : g.edges()) s.insert({e.u, e.v});
  return s;
}

/// Convex hull vertex count by monotone chain (collinear points excluded).
int hull_size(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  auto cross = [](const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  return static_cast<int>(k) - 1;
}

}  // namespace

TEST_CASE("grid sizes") {
  const auto p3 = grid_graph({{3}, {}});
  CHECK(p3.graph.num_vertices() == 3);
  CHECK(p3.graph.num_edges() == 2);
  const auto g22 = grid_graph({{2, 2}, {}});
  CHECK(g22.graph.num_vertices() == 4);
  CHECK(g22.graph.num_edges() == 4);
  const auto g44 = grid_graph({{4, 4}, {}});
  CHECK(g44.graph.num_vertices() == 16);
  CHECK(g44.graph.num_edges() == 2 * 4 * 3);
  const auto c = grid_graph({{3, 4, 5}, {}});
  CHECK(c.graph.num_edges() == 2 * 4 * 5 + 3 * 3 * 5 + 3 * 4 * 4);
  CHECK(c.graph.max_degree() <= 6);
  CHECK(is_connected(c.graph));
}

TEST_CASE("grid edges join unit-distance lattice points") {
  const auto g = grid_graph({{3, 4, 2}, {}});
  for (const auto& e : g.graph.edges()) {
    auto a = g.lattice.of(e.u), b = g.lattice.of(e.v);
    int diff = 0;
    for (int j = 0; j < 3; ++j) diff += std::abs(a[j] - b[j]);
    CHECK(diff == 1);
  }
  // First dimension varies fastest.
  CHECK(g.lattice.of(1)[0] == 1);
  CHECK(g.lattice.of(3)[1] == 1);
}

TEST_CASE("invalid grids") {
  CHECK_THROWS_AS(grid_graph({{}, {}}), std::invalid_argument);
  CHECK_THROWS_AS(grid_graph({{3, 0}, {}}), std::invalid_argument);
  // Keeping only two opposite corners disconnects the grid.
  CHECK_THROWS_AS(grid_graph({{3, 3}, [](std::span<const Index> c) { return c[0] == c[1] && c[0] != 1; }}),
                  std::runtime_error);
  CHECK_THROWS_AS(grid_graph({{3}, [](std::span<const Index>) { return false; }}), std::runtime_error);
}

TEST_CASE("L-shape and Fichera domains") {
  CHECK(lshape_graph(4).graph.num_vertices() == 12);
  CHECK(fichera_graph(2).graph.num_vertices() == 7);
  const auto l = lshape_graph(128);
  CHECK(l.graph.num_vertices() == 12288);
  CHECK(is_connected(l.graph));
  CHECK(fichera_graph(8).graph.num_vertices() == 7 * 8 * 8);
  CHECK_THROWS_AS(lshape_graph(5), std::invalid_argument);
  CHECK_THROWS_AS(fichera_graph(3), std::invalid_argument);
  CHECK_THROWS_AS(lshape_graph(0), std::invalid_argument);
}

TEST_CASE("unstructured mesh of four points") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto m = unstructured_2d(2, seed);
    CHECK(m.graph.num_vertices() == 4);
    // 5 edges in convex position, 6 when a point lands inside the others' triangle.
    CHECK(m.graph.num_edges() == 3 * 4 - 3 - hull_size(m.points));
  }
}

TEST_CASE("unstructured mesh is planar, connected and seed-deterministic") {
  const auto a = unstructured_2d(16, 7);
  CHECK(a.graph.num_vertices() == 256);
  CHECK(a.graph.num_edges() <= 3 * 256 - 6);
  CHECK(is_connected(a.graph));
  const auto b = unstructured_2d(16, 7);
  CHECK(edge_set(a.graph) == edge_set(b.graph));
  const auto c = unstructured_2d(16, 8);
  CHECK(edge_set(a.graph) != edge_set(c.graph));

  // Perturbation radius is exactly h/2.
  const double h = 1.0 / 15;
  for (Index j = 0; j < 16; ++j)
    for (Index i = 0; i < 16; ++i) {
      const auto& p = a.points[j * 16 + i];
      CHECK(std::hypot(p.x - i * h, p.y - j * h) == doctest::Approx(h / 2).epsilon(1e-12));
    }
}

TEST_CASE("delaunay triangulation has the empty-circle property") {
  SplitMix64 rng(41);
  std::vector<Point2> pts(60);
  for (auto& p : pts) p = {rng.uniform(), rng.uniform()};
  const auto edges = delaunay_edges(pts);
  const Graph g(60, edges);
  // Collect triangles as mutually adjacent triples and test empty circumcircles.
  int triangles = 0;
  for (const auto& e : g.edges()) {
    for (Index w : g.neighbors(e.u)) {
      if (w <= e.v || g.find_edge(e.v, w) < 0) continue;
      const auto &a = pts[e.u], &b = pts[e.v], &c = pts[w];
      const double d = 2 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
      if (std::abs(d) < 1e-14) continue;
      const double ux = ((a.x * a.x + a.y * a.y) * (b.y - c.y) + (b.x * b.x + b.y * b.y) * (c.y - a.y) +
                         (c.x * c.x + c.y * c.y) * (a.y - b.y)) / d;
      const double uy = ((a.x * a.x + a.y * a.y) * (c.x - b.x) + (b.x * b.x + b.y * b.y) * (a.x - c.x) +
                         (c.x * c.x + c.y * c.y) * (b.x - a.x)) / d;
      const double r2 = (a.x - ux) * (a.x - ux) + (a.y - uy) * (a.y - uy);
      int inside = 0;
      for (Index q = 0; q < 60; ++q) {
        if (q == e.u || q == e.v || q == w) continue;
        if ((pts[q].x - ux) * (pts[q].x - ux) + (pts[q].y - uy) * (pts[q].y - uy) < r2 * (1 - 1e-9)) ++inside;
      }
      // A 3-cycle of the triangulation that is not a face encloses points;
      // faces never do, and every face is such a cycle.
      if (inside == 0) ++triangles;
    }
  }
  // A triangulation with h hull vertices has 2n - 2 - h faces and
  // 3n - 3 - h edges.
  const int h = hull_size(pts);
  CHECK(triangles == 2 * 60 - 2 - h);
  CHECK(g.num_edges() == 3 * 60 - 3 - h);
  CHECK(is_connected(g));
}
