#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "amli/meshgen.hpp"

namespace amli {

namespace {

using Real = long double;

struct Triangle {
  std::array<Index, 3> v{};   // counter-clockwise
  std::array<Index, 3> nb{};  // nb[i] is across the edge opposite v[i]; -1 = none
  bool alive = true;
};

class BowyerWatson {
 public:
  explicit BowyerWatson(std::span<const Point2> points) : n_real_(static_cast<Index>(points.size())) {
    pts_.assign(points.begin(), points.end());
    double xmin = pts_[0].x, xmax = xmin, ymin = pts_[0].y, ymax = ymin;
    for (const auto& p : pts_) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
    const double r = 1e3 * span;
    pts_.push_back({cx - 2.0 * r, cy - r});
    pts_.push_back({cx + 2.0 * r, cy - r});
    pts_.push_back({cx, cy + 2.0 * r});
    tris_.push_back({{n_real_, n_real_ + 1, n_real_ + 2}, {-1, -1, -1}, true});
  }

  void insert_all() {
    for (Index p = 0; p < n_real_; ++p) insert(p);
  }

  std::vector<Edge> real_edges() const {
    std::vector<Edge> out;
    for (const auto& t : tris_) {
      if (!t.alive) continue;
      for (int i = 0; i < 3; ++i) {
        Index a = t.v[i], b = t.v[(i + 1) % 3];
        if (a >= n_real_ || b >= n_real_) continue;
        out.push_back({std::min(a, b), std::max(a, b)});
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  Real orient(Index a, Index b, Index c) const {
    const Real ax = pts_[a].x, ay = pts_[a].y;
    return (Real(pts_[b].x) - ax) * (Real(pts_[c].y) - ay) - (Real(pts_[b].y) - ay) * (Real(pts_[c].x) - ax);
  }

  // > 0 when p lies strictly inside the circumcircle of the CCW triangle t.
  Real incircle(const Triangle& t, Index p) const {
    const Real px = pts_[p].x, py = pts_[p].y;
    Real m[3][3];
    for (int i = 0; i < 3; ++i) {
      const Real dx = Real(pts_[t.v[i]].x) - px;
      const Real dy = Real(pts_[t.v[i]].y) - py;
      m[i][0] = dx;
      m[i][1] = dy;
      m[i][2] = dx * dx + dy * dy;
    }
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }

  Index locate(Index p) const {
    Index t = last_;
    for (std::size_t steps = 0; steps < 4 * tris_.size() + 16; ++steps) {
      const auto& tri = tris_[t];
      bool moved = false;
      for (int i = 0; i < 3; ++i) {
        if (orient(tri.v[(i + 1) % 3], tri.v[(i + 2) % 3], p) < 0 && tri.nb[i] >= 0) {
          t = tri.nb[i];
          moved = true;
          break;
        }
      }
      if (!moved) return t;
    }
    throw std::runtime_error("delaunay: point location did not terminate");
  }

  void insert(Index p) {
    const Index start = locate(p);
    bad_.clear();
    bad_.push_back(start);
    tris_[start].alive = false;
    for (std::size_t q = 0; q < bad_.size(); ++q) {
      const auto& tri = tris_[bad_[q]];
      for (Index nb : tri.nb) {
        if (nb < 0 || !tris_[nb].alive) continue;
        if (incircle(tris_[nb], p) > 0) {
          tris_[nb].alive = false;
          bad_.push_back(nb);
        }
      }
    }

    // Fan the cavity boundary around p.
    by_first_.clear();
    by_second_.clear();
    const Index first_new = static_cast<Index>(tris_.size());
    for (Index b : bad_) {
      for (int i = 0; i < 3; ++i) {
        const Index outside = tris_[b].nb[i];
        if (outside >= 0 && !tris_[outside].alive) continue;
        const Index a = tris_[b].v[(i + 1) % 3];
        const Index c = tris_[b].v[(i + 2) % 3];
        const Index id = static_cast<Index>(tris_.size());
        tris_.push_back({{p, a, c}, {outside, -1, -1}, true});
        if (outside >= 0) {
          for (auto& back : tris_[outside].nb)
            if (back == b) back = id;
        }
        if (!by_first_.emplace(a, id).second || !by_second_.emplace(c, id).second) {
          throw std::runtime_error("delaunay: cavity is not star-shaped (degenerate input)");
        }
      }
    }
    for (Index id = first_new; id < static_cast<Index>(tris_.size()); ++id) {
      auto& tri = tris_[id];
      // Edge (c, p) is opposite a; its other side starts at c.
      auto f = by_first_.find(tri.v[2]);
      auto s = by_second_.find(tri.v[1]);
      if (f == by_first_.end() || s == by_second_.end()) {
        throw std::runtime_error("delaunay: open cavity boundary");
      }
      tri.nb[1] = f->second;
      tri.nb[2] = s->second;
    }
    last_ = first_new;
  }

  Index n_real_;
  std::vector<Point2> pts_;
  std::vector<Triangle> tris_;
  Index last_ = 0;
  std::vector<Index> bad_;
  std::unordered_map<Index, Index> by_first_, by_second_;
};

}  // namespace

std::vector<Edge> delaunay_edges(std::span<const Point2> points) {
  if (points.size() < 2) return {};
  BowyerWatson bw(points);
  bw.insert_all();
  return bw.real_edges();
}

}  // namespace amli
