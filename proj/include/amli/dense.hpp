#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "amli/graph.hpp"

namespace amli {

/// Row-major dense matrix. Used for reference computations on small problems
/// and for the coarsest-level solve.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }

  DenseMatrix transpose() const;
  std::vector<double> column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> v);

  double frobenius_norm() const;
  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);
std::vector<double> operator*(const DenseMatrix& a, std::span<const double> x);

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column j pairs with values[j]
};

/// Cyclic Jacobi eigensolver. The input is symmetrized as (M + M^T)/2.
/// Throws NonConvergence after `max_sweeps` sweeps without convergence.
SymmetricEigen eig_sym(const DenseMatrix& m, int max_sweeps = 100);

/// Moore-Penrose inverse of a symmetric PSD matrix; eigenvalues below
/// rel_cutoff * lambda_max are treated as zero.
DenseMatrix pinv_sym(const DenseMatrix& m, double rel_cutoff = 1e-10);

/// Cholesky factor L (lower) of an SPD matrix; throws std::domain_error if a
/// pivot is not positive.
DenseMatrix cholesky(const DenseMatrix& m);
std::vector<double> cholesky_solve(const DenseMatrix& l, std::span<const double> b);

/// Gaussian elimination with partial pivoting. Throws std::domain_error on a
/// numerically singular matrix.
std::vector<double> lu_solve(DenseMatrix m, std::vector<double> b);
DenseMatrix inverse(const DenseMatrix& m);

/// S = P^T A P - P^T A Y (Y^T A Y)^{-1} Y^T A P.
DenseMatrix schur_dense(const DenseMatrix& a, const DenseMatrix& y, const DenseMatrix& p);

/// Orthonormal basis (n x n-1) of the complement of `v`, built from the
/// Householder reflector that maps v to a multiple of e_1.
DenseMatrix complement_basis(std::span<const double> v);

struct RayleighRange {
  double min = 0.0;
  double max = 0.0;
};

/// Extreme values of (num v, v) / (den v, v) over v orthogonal to `deflate`.
/// Both matrices must be symmetric; `den` must be positive definite on the
/// complement of `deflate` (std::domain_error otherwise). An empty `deflate`
/// means no deflation.
RayleighRange rayleigh_range(const DenseMatrix& num, const DenseMatrix& den,
                             std::span<const double> deflate);
double rayleigh_sup(const DenseMatrix& num, const DenseMatrix& den, std::span<const double> deflate);

/// Dense Laplacian of a graph.
DenseMatrix dense_laplacian(const Graph& g);

}  // namespace amli
