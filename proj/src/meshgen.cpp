#include "amli/meshgen.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "amli/rng.hpp"

namespace amli {

std::size_t LatticeCoords::box_size() const {
  std::size_t s = 1;
  for (Index e : extents) s *= static_cast<std::size_t>(e);
  return s;
}

GridGraph grid_graph(const GridSpec& spec) {
  if (spec.dims.empty()) throw std::invalid_argument("grid_graph: no dimensions");
  for (Index s : spec.dims) {
    if (s < 1) throw std::invalid_argument("grid_graph: dimension sizes must be >= 1");
  }
  const int m = static_cast<int>(spec.dims.size());
  std::size_t box = 1;
  for (Index s : spec.dims) box *= static_cast<std::size_t>(s);

  LatticeCoords lat;
  lat.extents = spec.dims;
  std::vector<Index> id(box, -1);
  std::vector<Index> c(m, 0);
  Index n = 0;
  for (std::size_t lin = 0; lin < box; ++lin) {
    std::size_t rem = lin;
    for (int j = 0; j < m; ++j) {
      c[j] = static_cast<Index>(rem % spec.dims[j]);
      rem /= spec.dims[j];
    }
    if (spec.mask && !spec.mask(c)) continue;
    id[lin] = n++;
    lat.coords.insert(lat.coords.end(), c.begin(), c.end());
  }
  if (n == 0) throw std::runtime_error("grid_graph: mask removed every vertex");

  std::vector<Edge> edges;
  std::size_t stride = 1;
  std::vector<std::size_t> strides(m);
  for (int j = 0; j < m; ++j) {
    strides[j] = stride;
    stride *= spec.dims[j];
  }
  for (std::size_t lin = 0; lin < box; ++lin) {
    if (id[lin] < 0) continue;
    std::size_t rem = lin;
    for (int j = 0; j < m; ++j) {
      const auto cj = static_cast<Index>(rem % spec.dims[j]);
      rem /= spec.dims[j];
      if (cj + 1 < spec.dims[j]) {
        const Index other = id[lin + strides[j]];
        if (other >= 0) edges.push_back({id[lin], other});
      }
    }
  }
  GridGraph out{Graph(n, std::move(edges)), std::move(lat)};
  if (!is_connected(out.graph)) throw std::runtime_error("grid_graph: masked grid is disconnected");
  return out;
}

GridGraph lshape_graph(Index n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("lshape_graph: n must be even and >= 2");
  const Index h = n / 2;
  return grid_graph({{n, n}, [h](std::span<const Index> c) { return !(c[0] >= h && c[1] >= h); }});
}

GridGraph fichera_graph(Index n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("fichera_graph: n must be even and >= 2");
  const Index h = n / 2;
  return grid_graph(
      {{n, n, n}, [h](std::span<const Index> c) { return !(c[0] >= h && c[1] >= h && c[2] >= h); }});
}

PointGraph unstructured_2d(Index n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("unstructured_2d: n must be >= 2");
  const double h = 1.0 / (n - 1);
  SplitMix64 rng(seed);
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(n) * n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
      pts.push_back({i * h + 0.5 * h * std::cos(angle), j * h + 0.5 * h * std::sin(angle)});
    }
  }
  auto edges = delaunay_edges(pts);
  Graph g(n * n, std::move(edges));
  if (!is_connected(g)) throw std::runtime_error("unstructured_2d: triangulation is disconnected");
  return {std::move(g), std::move(pts)};
}

}  // namespace amli
