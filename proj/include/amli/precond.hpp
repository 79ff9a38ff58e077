#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "amli/dense.hpp"
#include "amli/hierarchy.hpp"

namespace amli {

enum class SmootherKind { exact, cg, richardson };

struct SmootherConfig {
  SmootherKind kind = SmootherKind::exact;
  double cg_tol = 1e-6;  // > 0
  int sweeps = 1;        // >= 1

  static SmootherConfig direct() { return {SmootherKind::exact, 1e-6, 1}; }
  static SmootherConfig cg(double tol);
  static SmootherConfig richardson(int sweeps);
};

/// Symmetric sparse matrix in CSR form with sorted columns.
struct CsrMatrix {
  Index n = 0;
  std::vector<Index> offsets{0};
  std::vector<Index> cols;
  std::vector<double> vals;

  void apply(std::span<const double> x, std::span<double> out) const;
  /// max_i sum_j |a_ij|; equals the l1 norm for symmetric matrices.
  double abs_row_sum_max() const;
  DenseMatrix to_dense() const;
};

/// Y^T A Y of one level, with the data its smoother needs. The direct
/// factorization is built only when the configuration asks for it.
class PairBlock {
 public:
  PairBlock(const Graph& g, const Partition& p, const SmootherConfig& cfg);
  ~PairBlock();
  PairBlock(PairBlock&&) noexcept;
  PairBlock& operator=(PairBlock&&) noexcept;

  Index size() const { return ytay_.n; }
  const CsrMatrix& matrix() const { return ytay_; }
  /// Richardson weight 1 / ||Y^T A Y||_1.
  double omega() const { return omega_; }
  const SmootherConfig& config() const { return cfg_; }

  /// Y^T A Y x. Throws std::invalid_argument on dimension mismatch.
  void apply(std::span<const double> x, std::span<double> out) const;
  Vec apply(std::span<const double> x) const;

  /// Approximate solve of Y^T A Y x = b per the configuration. Returns the
  /// flop estimate of the solve.
  std::uint64_t solve(std::span<const double> b, std::span<double> x) const;
  Vec solve(std::span<const double> b) const;

 private:
  struct Factor;
  CsrMatrix ytay_;
  double omega_ = 0.0;
  SmootherConfig cfg_;
  std::unique_ptr<Factor> factor_;
};

/// Y^T A Y assembled from the graph and the matched pairs of `p`.
CsrMatrix assemble_ytay(const Graph& g, const Partition& p);

/// Maps between a level and its coarse level, in place on caller buffers.
void apply_Yt(const Partition& p, std::span<const double> v, std::span<double> out);  // Y^T v
void add_Y(const Partition& p, std::span<const double> w, std::span<double> out);     // out += Y w
void apply_Pt(const Partition& p, std::span<const double> v, std::span<double> out);  // P^T v
void add_P(const Partition& p, std::span<const double> c, std::span<double> out);     // out += P c

/// v -= mean(v).
void project_out_constants(std::span<double> v);

using CoarseAction = std::function<void(std::span<const double>, std::span<double>)>;

/// Two-level preconditioner of one level in product form:
///   x = Y M^{-1} Y^T r
///   x += P sigma^{-1} coarse(P^T (r - A x))
///   x += Y M^{-1} Y^T (r - A x)
/// r is projected onto the complement of the constants first. With an exact
/// smoother and coarse(v) = A_c^dagger v this is the pseudo-inverse of the
/// two-level operator transported to node space by (Y, P).
Vec two_level_apply(const Graph& g, const Partition& p, const PairBlock& block, double sigma,
                    const CoarseAction& coarse, std::span<const double> r);

struct ApplyStats {
  std::uint64_t flops = 0;
  double mean_removed = 0.0;  // |mean(r)| of the input before projection
};

/// Recursive AMLI W-cycle B_J^{-1}. Immutable after construction; apply is
/// reentrant (workspace per call).
class AmliPreconditioner {
 public:
  /// Default smoothers: ordinary uses a direct solve up to `direct_limit`
  /// pair unknowns and cg(1e-6) above; modified uses richardson(1). A given
  /// `smoother` applies to every level.
  explicit AmliPreconditioner(const Hierarchy& h, std::optional<SmootherConfig> smoother = std::nullopt,
                              Index direct_limit = 4096);
  ~AmliPreconditioner();
  AmliPreconditioner(AmliPreconditioner&&) noexcept;

  const Hierarchy& hierarchy() const { return *h_; }
  const PairBlock& block(int k) const { return blocks_.at(k - 2); }

  void apply(std::span<const double> r, std::span<double> z, ApplyStats* stats = nullptr) const;
  Vec apply(std::span<const double> r, ApplyStats* stats = nullptr) const;

  /// B_k^{-1} on level k (1 <= k <= J).
  Vec apply_level(int k, std::span<const double> r, ApplyStats* stats = nullptr) const;

  /// Flops of one application on a fixed pseudo-random residual.
  std::uint64_t operation_count() const;

 private:
  struct Workspace;
  void apply_rec(int k, std::span<const double> r, std::span<double> z, Workspace& ws) const;

  const Hierarchy* h_;
  std::vector<PairBlock> blocks_;  // blocks_[k-2] belongs to level k
};

}  // namespace amli
