#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "amli/graph.hpp"

namespace amli {

/// Integer lattice positions of graph vertices. Coordinates are 0-based;
/// extents are the bounding box sizes per dimension.
struct LatticeCoords {
  std::vector<Index> extents;
  std::vector<Index> coords;  // vertex-major: coords[v * dim() + j]

  int dim() const { return static_cast<int>(extents.size()); }
  std::span<const Index> of(Index v) const {
    return {coords.data() + static_cast<std::size_t>(v) * dim(), static_cast<std::size_t>(dim())};
  }
  std::size_t box_size() const;
};

struct GridSpec {
  std::vector<Index> dims;
  /// Vertex-retention predicate on 0-based lattice coordinates; empty = keep all.
  std::function<bool(std::span<const Index>)> mask;
};

struct GridGraph {
  Graph graph;
  LatticeCoords lattice;
};

/// Lattice points ordered with the first dimension varying fastest. Throws
/// std::invalid_argument on invalid dims, std::runtime_error if the mask
/// leaves a disconnected (or empty) vertex set.
GridGraph grid_graph(const GridSpec& spec);

/// Square [n, n] minus the closed upper quadrant (x >= n/2 and y >= n/2).
GridGraph lshape_graph(Index n);
/// Cube [n, n, n] minus the closed upper octant.
GridGraph fichera_graph(Index n);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct PointGraph {
  Graph graph;
  std::vector<Point2> points;
};

/// n x n lattice on the unit square, every point moved by h/2 in a uniformly
/// random direction (h = 1/(n-1)), then Delaunay-triangulated.
PointGraph unstructured_2d(Index n, std::uint64_t seed);

/// Edges of the Delaunay triangulation of `points` (incremental
/// Bowyer-Watson). Points are inserted in the given order; a point exactly on
/// a circumcircle is treated as outside it.
std::vector<Edge> delaunay_edges(std::span<const Point2> points);

}  // namespace amli
