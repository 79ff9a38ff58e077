#include "amli/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace amli {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<double> DenseMatrix::column(std::size_t j) const {
  std::vector<double> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void DenseMatrix::set_column(std::size_t j, std::span<const double> v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix sum: dimension mismatch");
  DenseMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) { return a + (-1.0) * b; }

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (auto& x : c.row(i)) x *= s;
  return c;
}

std::vector<double> operator*(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector product: dimension mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ai = a.row(i);
    y[i] = std::inner_product(ai.begin(), ai.end(), x.begin(), 0.0);
  }
  return y;
}

SymmetricEigen eig_sym(const DenseMatrix& m, int max_sweeps) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eig_sym: matrix not square");
  const std::size_t n = m.rows();
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
  DenseMatrix v = DenseMatrix::identity(n);

  const double scale = a.frobenius_norm();
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  bool converged = (n <= 1) || scale == 0.0;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    if (off_norm() <= 1e-15 * scale) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        auto rp = a.row(p);
        auto rq = a.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = rp[k], aqk = rq[k];
          rp[k] = c * apk - s * aqk;
          rq[k] = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged && off_norm() > 1e-15 * scale) {
    throw NonConvergence("eig_sym: no convergence after " + std::to_string(max_sweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

DenseMatrix pinv_sym(const DenseMatrix& m, double rel_cutoff) {
  auto eig = eig_sym(m);
  const std::size_t n = m.rows();
  double lmax = 0.0;
  for (double l : eig.values) lmax = std::max(lmax, std::abs(l));
  DenseMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double l = eig.values[k];
    if (std::abs(l) <= rel_cutoff * lmax || l == 0.0) continue;
    const double inv = 1.0 / l;
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = eig.vectors(i, k) * inv;
      if (vi == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * eig.vectors(j, k);
    }
  }
  return out;
}

DenseMatrix cholesky(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw std::invalid_argument("cholesky: matrix not square");
  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw std::domain_error("cholesky: matrix not positive definite");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

std::vector<double> cholesky_solve(const DenseMatrix& l, std::span<const double> b) {
  const std::size_t n = l.rows();
  std::vector<double> y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    double s = y[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * y[k];
    y[i] = s / l(i, i);
  }
  return y;
}

std::vector<double> lu_solve(DenseMatrix m, std::vector<double> b) {
  const std::size_t n = m.rows();
  if (m.cols() != n || b.size() != n) throw std::invalid_argument("lu_solve: dimension mismatch");
  const double scale = std::max(m.max_abs(), 1e-300);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
    if (std::abs(m(piv, c)) <= 1e-14 * scale) throw std::domain_error("lu_solve: singular matrix");
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m(c, k), m(piv, k));
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m(r, c) / m(c, c);
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) m(r, k) -= f * m(c, k);
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= m(i, k) * b[k];
    b[i] = s / m(i, i);
  }
  return b;
}

DenseMatrix inverse(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  DenseMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    inv.set_column(j, lu_solve(m, std::move(e)));
  }
  return inv;
}

DenseMatrix schur_dense(const DenseMatrix& a, const DenseMatrix& y, const DenseMatrix& p) {
  const DenseMatrix yt = y.transpose();
  const DenseMatrix pt = p.transpose();
  const DenseMatrix ay = a * y;
  const DenseMatrix ap = a * p;
  const DenseMatrix ytay = yt * ay;
  const DenseMatrix ptap = pt * ap;
  if (ytay.rows() == 0) return ptap;
  const DenseMatrix ytap = yt * ap;
  DenseMatrix l;
  try {
    l = cholesky(ytay);
  } catch (const std::domain_error&) {
    throw std::domain_error("schur_dense: Y^T A Y is singular");
  }
  // X = (Y^T A Y)^{-1} Y^T A P, column by column.
  DenseMatrix x(ytap.rows(), ytap.cols());
  for (std::size_t j = 0; j < ytap.cols(); ++j) x.set_column(j, cholesky_solve(l, ytap.column(j)));
  return ptap - ytap.transpose() * x;
}

DenseMatrix complement_basis(std::span<const double> v) {
  const std::size_t n = v.size();
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (n == 0 || norm == 0.0) throw std::invalid_argument("complement_basis: zero vector");
  std::vector<double> w(v.begin(), v.end());
  for (double& x : w) x /= norm;
  w[0] += (w[0] >= 0.0 ? 1.0 : -1.0);
  double ww = 0.0;
  for (double x : w) ww += x * x;
  DenseMatrix z(n, n - 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) z(i, j - 1) = (i == j ? 1.0 : 0.0) - 2.0 * w[i] * w[j] / ww;
  return z;
}

RayleighRange rayleigh_range(const DenseMatrix& num, const DenseMatrix& den, std::span<const double> deflate) {
  if (num.rows() != den.rows() || num.cols() != den.cols() || num.rows() != num.cols()) {
    throw std::invalid_argument("rayleigh_range: dimension mismatch");
  }
  DenseMatrix n2 = num, d2 = den;
  if (!deflate.empty()) {
    const DenseMatrix z = complement_basis(deflate);
    const DenseMatrix zt = z.transpose();
    n2 = zt * num * z;
    d2 = zt * den * z;
  }
  const std::size_t m = n2.rows();
  if (m == 0) throw std::domain_error("rayleigh_range: empty subspace");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < i; ++j) d2(i, j) = d2(j, i) = 0.5 * (d2(i, j) + d2(j, i));
  DenseMatrix l;
  try {
    l = cholesky(d2);
  } catch (const std::domain_error&) {
    throw std::domain_error("rayleigh_range: denominator singular on the deflated subspace");
  }
  // C = L^{-1} N L^{-T}
  auto forward = [&](std::vector<double> b) {
    for (std::size_t i = 0; i < m; ++i) {
      double s = b[i];
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * b[k];
      b[i] = s / l(i, i);
    }
    return b;
  };
  DenseMatrix x(m, m);
  for (std::size_t j = 0; j < m; ++j) x.set_column(j, forward(n2.column(j)));
  const DenseMatrix xt = x.transpose();
  DenseMatrix c(m, m);
  for (std::size_t j = 0; j < m; ++j) c.set_column(j, forward(xt.column(j)));
  auto eig = eig_sym(c);
  return {eig.values.front(), eig.values.back()};
}

double rayleigh_sup(const DenseMatrix& num, const DenseMatrix& den, std::span<const double> deflate) {
  return rayleigh_range(num, den, deflate).max;
}

DenseMatrix dense_laplacian(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.num_vertices());
  DenseMatrix a(n, n);
  for (const auto& e : g.edges()) {
    a(e.u, e.u) += 1.0;
    a(e.v, e.v) += 1.0;
    a(e.u, e.v) -= 1.0;
    a(e.v, e.u) -= 1.0;
  }
  return a;
}

}  // namespace amli
