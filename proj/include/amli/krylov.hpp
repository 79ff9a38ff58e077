#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amli/graph.hpp"

namespace amli {

/// out = Op(in); both of the same length.
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

enum class SolveStatus { converged, max_iterations, indefinite_preconditioner, breakdown };
std::string_view to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::max_iterations;
  int iterations = 0;
  Vec x;
  /// ||x_j - x_true||_A for j = 0..iterations; empty without x_true.
  std::vector<double> error_a_norm_history;
  /// sqrt((B r_j, r_j)) for j = 0..iterations.
  std::vector<double> residual_history;
  /// CG step lengths and direction updates; alpha.size() == iterations.
  std::vector<double> alpha;
  std::vector<double> beta;
  std::string diagnostic;

  bool converged() const { return status == SolveStatus::converged; }
};

/// Preconditioned CG on the complement of the constants: f, x_0 = 0 and
/// every preconditioned residual are projected. Stops when
/// ||x - x_true||_A / ||x_0 - x_true||_A <= tol if x_true is given, else when
/// sqrt((B r, r) / (B r_0, r_0)) <= tol. A negative (B r, r) aborts with
/// status indefinite_preconditioner.
SolveReport pcg_solve(const LinearOperator& apply_a, const LinearOperator& apply_b, std::span<const double> f,
                      double tol, std::optional<std::span<const double>> x_true = std::nullopt,
                      int max_iter = 500);

struct SpectrumEstimate {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int steps = 0;
};

/// Extreme eigenvalues of the Lanczos tridiagonal matrix built from the first
/// `steps` PCG coefficients of a report (all of them if steps <= 0).
SpectrumEstimate lanczos_from_cg(const SolveReport& report, int steps = 0);

/// Extreme eigenvalues of B A on the complement of the constants from
/// `iters` PCG-Lanczos steps with a seeded random right-hand side. Throws
/// std::invalid_argument if iters < 2.
SpectrumEstimate lanczos_extremes(const LinearOperator& apply_a, const LinearOperator& apply_b, Index n, int iters,
                                  std::uint64_t seed);

/// (sqrt(kappa) - 1) / (sqrt(kappa) + 1).
double rate_from_kappa(double kappa);

struct Rates {
  std::optional<double> r_a;  // unset without an error history
  double r_e = 0.0;
  double r_k = 0.0;
};

/// r_a = (e_final / e_0)^(1/iterations); r_e from lambda_max / lambda_min;
/// r_k from kappa = zeta_J.
Rates rates(const SolveReport& report, const SpectrumEstimate& spectrum, double zeta_j);

}  // namespace amli
