#include <doctest.h>

#include <cmath>

#include "amli/hierarchy.hpp"
#include "amli/meshgen.hpp"
#include "amli/stability.hpp"
#include "support.hpp"

using namespace amli;
using namespace amli::testing;

namespace {

Hierarchy structured(const GridGraph& g, Variant v = Variant::ordinary) {
  HierarchyOptions o;
  o.variant = v;
  o.lattice = g.lattice;
  return build_hierarchy(g.graph, o);
}

}  // namespace

TEST_CASE("structured hierarchy of a path halves down to two vertices") {
  const Hierarchy h = structured(grid_graph({{8}, {}}));
  REQUIRE(h.num_levels() == 3);
  CHECK(h.level(3).num_vertices() == 8);
  CHECK(h.level(2).num_vertices() == 4);
  CHECK(h.level(1).num_vertices() == 2);
  CHECK(h.level(1).partition.num_vertices() == 0);
}

TEST_CASE("structured hierarchy of a grid stops at one dimension") {
  const Hierarchy h = structured(grid_graph({{4, 4}, {}}));
  REQUIRE(h.num_levels() == 3);
  CHECK(h.level(3).lattice->extents == std::vector<Index>{4, 4});
  CHECK(h.level(2).lattice->extents == std::vector<Index>{2, 4});
  CHECK(h.level(1).lattice->extents == std::vector<Index>{1, 4});
  CHECK(h.level(3).matched_dim == 0);
  CHECK(h.level(2).matched_dim == 0);
  const Graph& c = h.level(1).graph;
  CHECK(c.num_vertices() == 4);
  CHECK(c.num_edges() == 3);
  CHECK(c.max_degree() == 2);

  const Hierarchy cube = structured(grid_graph({{4, 4, 4}, {}}));
  CHECK(cube.num_levels() == 5);
  CHECK(cube.level(1).lattice->extents == std::vector<Index>{1, 1, 4});
}

TEST_CASE("random hierarchy uses floor(log2 N / 2) matchings") {
  const auto m = unstructured_2d(16, 3);
  HierarchyOptions o;
  o.strategy = Strategy::random;
  o.seed = 5;
  const Hierarchy h = build_hierarchy(m.graph, o);
  CHECK(h.num_levels() == 5);
  CHECK(h.sigma_mode() == SigmaMode::ratio);
  for (int k = 2; k <= h.num_levels(); ++k) {
    const auto& lvl = h.level(k);
    Index mult = 1;
    for (Index x : lvl.multiplicity) mult = std::max(mult, x);
    CHECK(lvl.sigma == static_cast<double>(mult));
    CHECK(lvl.sigma <= 4.0);
  }
}

TEST_CASE("hierarchy invariants") {
  std::vector<Hierarchy> hs;
  hs.push_back(structured(grid_graph({{8, 4}, {}})));
  hs.push_back(structured(lshape_graph(8)));
  hs.push_back(structured(grid_graph({{16}, {}}), Variant::modified));
  HierarchyOptions o;
  o.strategy = Strategy::random;
  hs.push_back(build_hierarchy(random_connected_graph(40, 30, 2), o));
  for (const auto& h : hs) {
    CHECK(h.level(1).num_vertices() >= 2);
    for (int k = 1; k <= h.num_levels(); ++k) CHECK(is_connected(h.level(k).graph));
    for (int k = 2; k <= h.num_levels(); ++k) {
      const auto& lvl = h.level(k);
      CHECK(lvl.sigma >= 1.0);
      CHECK(h.level(k - 1).num_vertices() == lvl.num_vertices() - lvl.num_pairs());
      // (Y, P)^T (Y, P) = diag(2 on pairs, 2 on pair columns of P, 1 on singletons).
      const DenseMatrix y = dense_Y(lvl.partition), p = dense_P(lvl.partition);
      DenseMatrix yp(lvl.num_vertices(), y.cols() + p.cols());
      for (std::size_t j = 0; j < y.cols(); ++j) yp.set_column(j, y.column(j));
      for (std::size_t j = 0; j < p.cols(); ++j) yp.set_column(y.cols() + j, p.column(j));
      const DenseMatrix gram = yp.transpose() * yp;
      REQUIRE(gram.rows() == static_cast<std::size_t>(lvl.num_vertices()));
      for (std::size_t i = 0; i < gram.rows(); ++i)
        for (std::size_t j = 0; j < gram.cols(); ++j) {
          double expect = 0.0;
          if (i == j) expect = i < y.cols() ? 2.0 : static_cast<double>(lvl.partition.aggregate_size(i - y.cols()));
          CHECK(gram(i, j) == expect);
        }
      // P^T A P has -multiplicity off the diagonal, where A_c has -1.
      const DenseMatrix ptap = p.transpose() * dense_laplacian(lvl.graph) * p;
      const Graph& cg = h.level(k - 1).graph;
      for (Index e = 0; e < cg.num_edges(); ++e) {
        CHECK(ptap(cg.edge(e).u, cg.edge(e).v) == -static_cast<double>(lvl.multiplicity[e]));
      }
    }
  }
}

TEST_CASE("hierarchy build errors") {
  CHECK_THROWS_AS(build_hierarchy(Graph(4, {{0, 1}, {2, 3}}), HierarchyOptions{}), std::invalid_argument);
  CHECK_THROWS_AS(build_hierarchy(path_graph(4), HierarchyOptions{}), std::invalid_argument);
  CHECK_THROWS_AS(build_hierarchy(Graph(1, {}), HierarchyOptions{}), std::invalid_argument);
  CHECK_THROWS_AS(structured(grid_graph({{3, 4}, {}})), std::runtime_error);
  // A two-vertex path starts at the coarsest size.
  CHECK(structured(grid_graph({{2}, {}})).num_levels() == 1);
}

TEST_CASE("sigma estimates") {
  const auto path = grid_graph({{8}, {}});
  const Partition p = aligned_matching(path.graph, path.lattice, 0);
  CHECK(sigma_estimate(SigmaMode::ratio, edge_multiplicity(path.graph, p), 8) == 1.0);
  CHECK(sigma_estimate(SigmaMode::theory_grid, {}, 8) == 2.0);
  CHECK(sigma_estimate(SigmaMode::theory_general, {}, 8) == 4.0);
  CHECK(sigma_estimate(SigmaMode::modified_grid, {}, 16384) == doctest::Approx(2.0 - 1.0 / 28.0));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Graph g = random_connected_graph(30, 40, seed);
    CHECK(sigma_estimate(SigmaMode::ratio, edge_multiplicity(g, random_maximal_matching(g, seed)), 30) <= 4.0);
  }
  CHECK_THROWS_AS(parse_sigma_mode("bogus"), std::invalid_argument);
  for (auto m : {SigmaMode::theory_grid, SigmaMode::theory_general, SigmaMode::modified_grid, SigmaMode::ratio})
    CHECK(parse_sigma_mode(to_string(m)) == m);
}

TEST_CASE("sigma is the coarse Rayleigh supremum on small levels") {
  // sup (A P v, P v) / (A_c v, v) against the ratio estimate, which bounds it.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Graph g = random_connected_graph(16, 20, seed);
    const Partition p = random_maximal_matching(g, seed);
    const DenseMatrix pm = dense_P(p);
    const Graph c = coarse_graph(g, p);
    const double sup = rayleigh_sup(pm.transpose() * dense_laplacian(g) * pm, dense_laplacian(c),
                                    Vec(c.num_vertices(), 1.0));
    const double ratio = sigma_estimate(SigmaMode::ratio, edge_multiplicity(g, p), 16);
    CHECK(sup >= 1.0 - 1e-12);
    CHECK(sup <= ratio + 1e-12);
  }
}

TEST_CASE("theta schedules") {
  const auto t4 = theta_schedule(4.0, 3);
  CHECK(t4[0] == 1.0);
  CHECK(t4[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(t4[2] == doctest::Approx(0.16).epsilon(1e-15));
  for (double t : theta_schedule(1.0, 30)) CHECK(t == 1.0);
  for (double t : theta_schedule(2.25, 60)) CHECK(t >= 1.0 / 3.0 - 1e-15);

  const auto long4 = theta_schedule(4.0, 200);
  for (int k = 1; k <= 200; ++k) {
    CHECK(long4[k - 1] >= 1.0 / (2.0 * k + std::log(k) + 1.0));
    if (k < 200) CHECK(long4[k] <= long4[k - 1]);
  }
  // zeta recursion: zeta_{k+1} = c/4 (zeta_k + 2 + 1/zeta_k).
  const auto t3 = theta_schedule(3.0, 20);
  double zeta = 1.0;
  for (int k = 1; k < 20; ++k) {
    zeta = 0.75 * (zeta + 2.0 + 1.0 / zeta);
    CHECK(1.0 / t3[k] == doctest::Approx(zeta).epsilon(1e-12));
  }
  CHECK_THROWS_AS(theta_schedule(4.5, 3), std::invalid_argument);
  CHECK_THROWS_AS(theta_schedule(0.5, 3), std::invalid_argument);
  CHECK_THROWS_AS(theta_schedule(2.0, 0), std::invalid_argument);

  const auto tm = theta_schedule_modified(4);
  CHECK(tm == std::vector<double>{1.0, 1.0 / 3, 1.0 / 5, 1.0 / 7});
}

TEST_CASE("AMLI polynomial") {
  const AmliPoly q1 = amli_poly(1.0);
  CHECK(q1.a == 2.0);
  CHECK(q1.b == -1.0);
  CHECK(q1.a + q1.b == 1.0);
  for (double theta : {1.0, 0.5, 0.25, 0.1, 0.01}) {
    const AmliPoly q = amli_poly(theta);
    auto tq = [&](double t) { return t * (q.a + q.b * t); };
    double best = 0.0;
    for (int i = 0; i <= 1000; ++i) best = std::max(best, tq(theta + (1.0 - theta) * i / 1000.0));
    CHECK(best <= 1.0 + 1e-14);
    CHECK(tq((theta + 1.0) / 2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tq(theta) == doctest::Approx(tq(1.0)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(amli_poly(0.0), std::invalid_argument);
  CHECK_THROWS_AS(amli_poly(-0.5), std::invalid_argument);
}

TEST_CASE("schedule constant and warnings") {
  const Hierarchy h = structured(grid_graph({{8, 8}, {}}));
  CHECK(h.schedule_constant() == 4.0);
  CHECK(h.warnings().empty());
  CHECK(h.thetas() == theta_schedule(4.0, h.num_levels()));
  CHECK(h.zeta() == doctest::Approx(1.0 / h.thetas().back()));

  const Hierarchy m = structured(grid_graph({{8, 8}, {}}), Variant::modified);
  CHECK(m.sigma_mode() == SigmaMode::modified_grid);
  CHECK(m.thetas() == theta_schedule_modified(m.num_levels()));

  HierarchyOptions o;
  o.strategy = Strategy::random;
  o.seed = 3;
  const Hierarchy r = build_hierarchy(unstructured_2d(16, 1).graph, o);
  CHECK(r.schedule_constant() <= 4.0);
  bool clamped = false;
  for (int k = 2; k <= r.num_levels(); ++k) clamped = clamped || r.level(k).c_g > 4.0;
  CHECK(clamped == !r.warnings().empty());
}

TEST_CASE("coarsest pseudo-inverse matches the dense oracle") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Graph g = random_connected_graph(15, 10, seed);
    CHECK((laplacian_pinv(g) - pinv_sym(dense_laplacian(g))).max_abs() <= 1e-10);
  }
}
