#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "amli/dense.hpp"
#include "amli/graph.hpp"
#include "amli/matching.hpp"

namespace amli {

/// Edge-space operator with B Q = Pi B, stored row-wise (CSR) over the fine
/// graph's edges. Rows of internal edges (both endpoints in one aggregate)
/// are empty.
class PiOperator {
 public:
  struct Entry {
    Index col;
    double value;
  };

  PiOperator() = default;
  explicit PiOperator(Index num_edges) : offsets_(num_edges + 1, 0), num_edges_(num_edges) {}

  Index num_edges() const { return num_edges_; }
  std::span<const Entry> row(Index k) const {
    return {entries_.data() + offsets_[k], entries_.data() + offsets_[k + 1]};
  }

  /// Rows must be appended in order 0, 1, ...; entries are sorted by column.
  void append_row(Index k, std::vector<Entry> entries);

  void apply(std::span<const double> w, std::span<double> out) const;
  Vec apply(std::span<const double> w) const;

  DenseMatrix to_dense() const;

 private:
  std::vector<Index> offsets_{0};
  std::vector<Entry> entries_;
  Index num_edges_ = 0;
  Index rows_done_ = 0;
};

/// (Qv)_i = mean of v over the aggregate containing i.
Vec project_Q(const Partition& p, std::span<const double> v);

/// Closed form for matchings: row k of an external edge has 1 at k and
/// -(1/2) s_k(x) s_l(x) at each matched edge l touching an endpoint x of k,
/// where s_e(x) = +1 if x is the smaller endpoint of e and -1 otherwise.
/// Throws std::invalid_argument if some aggregate has more than two vertices
/// or the partition is invalid for g.
PiOperator build_pi_matching(const Graph& g, const Partition& p);

/// General construction from local solves with (A_m + e_l e_l^T) on every
/// aggregate. Throws std::invalid_argument for disconnected aggregates or
/// aggregates larger than `max_aggregate`.
PiOperator build_pi_general(const Graph& g, const Partition& p, Index max_aggregate = 8);

struct PiNormBounds {
  double inf_norm = 0.0;
  double one_norm = 0.0;
  double product_bound = 0.0;
  double gershgorin_bound = 0.0;  // max row sum of |Pi Pi^T|
};

PiNormBounds pi_norm_bounds(const PiOperator& pi);

/// rho(Pi Pi^T) by dense eigensolve.
double pi_spectral_norm_sq(const PiOperator& pi);

/// sup over v outside ker(A) of (A Qv, Qv) / (A v, v), by dense pencil
/// eigensolve on the complement of the constants. Throws std::length_error if
/// the graph has more than `cap` vertices.
double q_energy_norm(const Graph& g, const Partition& p, Index cap = 2000);

/// max over `trials` random unit vectors v of ||B Q v - Pi B v||_inf.
double check_commutation(const Graph& g, const Partition& p, const PiOperator& pi, int trials,
                         std::uint64_t seed = 1);

/// Dense aggregation (P) and pair-difference (Y) maps of a partition.
DenseMatrix dense_P(const Partition& p);
DenseMatrix dense_Y(const Partition& p);

}  // namespace amli
