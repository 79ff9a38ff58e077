#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amli/dense.hpp"
#include "amli/graph.hpp"
#include "amli/matching.hpp"
#include "amli/meshgen.hpp"

namespace amli {

enum class Strategy { structured, random };
enum class Variant { ordinary, modified };
enum class SigmaMode { theory_grid, theory_general, modified_grid, ratio };

std::string_view to_string(Strategy s);
std::string_view to_string(Variant v);
std::string_view to_string(SigmaMode m);
/// Throw std::invalid_argument on unknown names.
Strategy parse_strategy(std::string_view s);
Variant parse_variant(std::string_view s);
SigmaMode parse_sigma_mode(std::string_view s);

/// One level k of the stack. For k >= 2 `partition` maps this level's
/// vertices onto level k-1; the coarsest level has an empty partition.
struct HierarchyLevel {
  Graph graph;
  Partition partition;
  std::vector<Index> multiplicity;  // per edge of the next-coarser graph
  double sigma = 1.0;
  double c_g = 1.0;
  int matched_dim = -1;  // structured strategy only
  std::optional<LatticeCoords> lattice;

  Index num_vertices() const { return graph.num_vertices(); }
  Index num_pairs() const { return static_cast<Index>(partition.matched_pairs().size()); }
};

struct HierarchyOptions {
  Strategy strategy = Strategy::structured;
  Variant variant = Variant::ordinary;
  /// Unset: theory-grid (ordinary) or modified-grid (modified) for the
  /// structured strategy, ratio for the random strategy.
  std::optional<SigmaMode> sigma_mode;
  std::uint64_t seed = 1;
  /// Required by the structured strategy.
  std::optional<LatticeCoords> lattice;
};

class Hierarchy {
 public:
  /// Levels are numbered 1 (coarsest) .. J (finest, the input graph).
  int num_levels() const { return static_cast<int>(levels_.size()); }
  const HierarchyLevel& level(int k) const { return levels_.at(k - 1); }
  const HierarchyLevel& finest() const { return levels_.back(); }

  /// theta(k) for k = 1..J; theta(1) = 1.
  double theta(int k) const { return theta_.at(k - 1); }
  const std::vector<double>& thetas() const { return theta_; }
  /// zeta_J = 1 / theta_J, the condition number bound of B_J^{-1} A.
  double zeta() const { return 1.0 / theta_.back(); }

  /// Constant c used by the schedule (max c_g over levels, clamped to [1, 4]).
  double schedule_constant() const { return schedule_c_; }
  Variant variant() const { return variant_; }
  SigmaMode sigma_mode() const { return sigma_mode_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// A_1^dagger.
  const DenseMatrix& coarsest_pinv() const { return coarsest_pinv_; }

 private:
  friend Hierarchy build_hierarchy(const Graph& g, const HierarchyOptions& opts);

  std::vector<HierarchyLevel> levels_;  // levels_[k-1] is level k
  std::vector<double> theta_;
  double schedule_c_ = 1.0;
  Variant variant_ = Variant::ordinary;
  SigmaMode sigma_mode_ = SigmaMode::theory_grid;
  std::vector<std::string> warnings_;
  DenseMatrix coarsest_pinv_;
};

/// Structured: aligned matching along the lowest-index dimension of extent
/// > 1 until one non-trivial dimension remains; a graph that starts
/// one-dimensional is halved down to two vertices. Random: floor(log2(N)/2)
/// random maximal matchings.
/// Throws std::invalid_argument if g is disconnected or the lattice is
/// missing/inconsistent, std::runtime_error if coarsening stalls or would
/// leave fewer than two coarse vertices.
Hierarchy build_hierarchy(const Graph& g, const HierarchyOptions& opts);

/// Scaling sigma for a level with the given coarse-edge multiplicities.
/// `finest_vertices` is N in 2 - 1/(2 log2 N).
double sigma_estimate(SigmaMode mode, std::span<const Index> multiplicity, Index finest_vertices);

/// theta_1 = 1, theta_{k+1} = (1/c) * 4 theta_k / (theta_k + 1)^2.
/// Throws std::invalid_argument unless 1 <= c <= 4 and levels >= 1.
std::vector<double> theta_schedule(double c, int levels);

/// theta_k = 1/(2k - 1): the c = 4 growth with the logarithmic term dropped.
std::vector<double> theta_schedule_modified(int levels);

/// Coefficients of q(t) = a + b t = 4/(theta+1) (1 - t/(theta+1)).
struct AmliPoly {
  double a = 0.0;
  double b = 0.0;
};
/// Throws std::invalid_argument for theta <= 0 or theta > 1.
AmliPoly amli_poly(double theta);

/// A^dagger of a connected graph Laplacian, as (A + 11^T/n)^{-1} - 11^T/n.
DenseMatrix laplacian_pinv(const Graph& g);

}  // namespace amli
