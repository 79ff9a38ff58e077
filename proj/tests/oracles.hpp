#pragma once

// Dense reference constructions in the hierarchical basis (Y, P). They are
// assembled from the block formulas directly and share no code with the
// multiplicative preconditioner they are compared against.

#include <algorithm>
#include <cmath>

#include "amli/dense.hpp"
#include "amli/hierarchy.hpp"
#include "amli/matching.hpp"
#include "amli/precond.hpp"
#include "amli/stability.hpp"
#include "support.hpp"

namespace amli::testing {

/// E = (Y, P), pairs first.
inline DenseMatrix yp_basis(const Partition& p) {
  const DenseMatrix y = dense_Y(p), pm = dense_P(p);
  DenseMatrix e(p.num_vertices(), y.cols() + pm.cols());
  for (std::size_t j = 0; j < y.cols(); ++j) e.set_column(j, y.column(j));
  for (std::size_t j = 0; j < pm.cols(); ++j) e.set_column(y.cols() + j, pm.column(j));
  return e;
}

/// The hat-space vector with E 1_hat = 1.
inline Vec hat_one(const Partition& p) {
  Vec v(p.num_vertices(), 0.0);
  std::fill(v.begin() + static_cast<std::ptrdiff_t>(p.matched_pairs().size()), v.end(), 1.0);
  return v;
}

/// Block matrix with blocks [a, b; c, d].
inline DenseMatrix blocks(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& c, const DenseMatrix& d) {
  DenseMatrix m(a.rows() + c.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) m(a.rows() + i, j) = c(i, j);
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j) m(a.rows() + i, a.cols() + j) = d(i, j);
  return m;
}

/// A_hat = E^T A E.
inline DenseMatrix hat_A(const Graph& g, const Partition& p) {
  const DenseMatrix e = yp_basis(p);
  return e.transpose() * dense_laplacian(g) * e;
}

/// L diag(M_s, sigma D) L^T with L = [I 0; P^T A Y M^{-1} I] and M_s the
/// symmetrized smoother M (2M - Y^T A Y)^{-1} M for symmetric M.
inline DenseMatrix hat_B(const Graph& g, const Partition& p, double sigma, const DenseMatrix& m, const DenseMatrix& d) {
  const DenseMatrix a = dense_laplacian(g), y = dense_Y(p), pm = dense_P(p);
  const DenseMatrix k = y.transpose() * a * y;
  const DenseMatrix minv = inverse(m);
  const DenseMatrix ms = m * inverse(2.0 * m - k) * m;
  const std::size_t np = y.cols(), nc = pm.cols();
  const DenseMatrix l = blocks(DenseMatrix::identity(np), DenseMatrix(np, nc), pm.transpose() * a * y * minv,
                               DenseMatrix::identity(nc));
  const DenseMatrix mid = blocks(ms, DenseMatrix(np, nc), DenseMatrix(nc, np), sigma * d);
  return l * mid * l.transpose();
}

/// G_hat: exact Y^T A Y and sigma A_c.
inline DenseMatrix hat_G(const Graph& g, const Partition& p, double sigma) {
  const DenseMatrix y = dense_Y(p);
  const DenseMatrix k = y.transpose() * dense_laplacian(g) * y;
  return hat_B(g, p, sigma, k, dense_laplacian(coarse_graph(g, p)));
}

/// Node-space matrix of z = two_level_apply(r) with coarse(v) = A_c^dagger v.
inline DenseMatrix node_two_level(const Graph& g, const Partition& p, const PairBlock& block, double sigma) {
  const DenseMatrix ac_pinv = pinv_sym(dense_laplacian(coarse_graph(g, p)));
  CoarseAction coarse = [&](std::span<const double> c, std::span<double> out) {
    const Vec v = ac_pinv * c;
    std::copy(v.begin(), v.end(), out.begin());
  };
  return assemble(g.num_vertices(), [&](const Vec& r) { return two_level_apply(g, p, block, sigma, coarse, r); });
}

/// Pi_1 M Pi_1 with Pi_1 the projection onto the complement of the constants.
inline DenseMatrix project_constants(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  DenseMatrix pr = DenseMatrix::identity(n) - DenseMatrix(n, n, 1.0 / static_cast<double>(n));
  return pr * m * pr;
}

/// inf_w (A(Yw + Px), Yw + Px) by conjugate gradients on the normal
/// equations of w, without forming the Schur complement.
inline double schur_infimum(const DenseMatrix& a, const DenseMatrix& y, const DenseMatrix& pm, const Vec& x) {
  const Vec px = pm * x;
  auto energy = [&](const Vec& w) {
    Vec u = y * w;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += px[i];
    return dot(a * u, u);
  };
  const DenseMatrix k = y.transpose() * a * y;
  Vec w(y.cols(), 0.0);
  // Gradient of the energy is 2 (K w + Y^T A P x).
  const Vec b0 = y.transpose() * (a * px);
  Vec r(b0.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = -b0[i];
  Vec d = r;
  double rr = dot(r, r);
  for (std::size_t it = 0; it < 4 * w.size() + 20 && rr > 1e-30; ++it) {
    const Vec kd = k * d;
    const double alpha = rr / dot(kd, d);
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] += alpha * d[i];
      r[i] -= alpha * kd[i];
    }
    const double rr_new = dot(r, r);
    for (std::size_t i = 0; i < w.size(); ++i) d[i] = r[i] + (rr_new / rr) * d[i];
    rr = rr_new;
  }
  return energy(w);
}

/// Symmetrized Richardson smoother M (2M - K)^{-1} M versus K: returns
/// (min, max) of the pencil, i.e. [1, kappa_s] when M >= K.
inline RayleighRange smoother_range(const DenseMatrix& m, const DenseMatrix& k) {
  return rayleigh_range(m * inverse(2.0 * m - k) * m, k, {});
}

}  // namespace amli::testing
