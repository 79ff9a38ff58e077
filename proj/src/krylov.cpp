#include "amli/krylov.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "amli/precond.hpp"
#include "amli/rng.hpp"

namespace amli {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max-iterations";
    case SolveStatus::indefinite_preconditioner: return "indefinite-preconditioner";
    case SolveStatus::breakdown: return "breakdown";
  }
  return "?";
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

SolveReport pcg_solve(const LinearOperator& apply_a, const LinearOperator& apply_b, std::span<const double> f,
                      double tol, std::optional<std::span<const double>> x_true, int max_iter) {
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("pcg_solve: tol must lie in (0, 1)");
  const std::size_t n = f.size();
  if (x_true && x_true->size() != n) throw std::invalid_argument("pcg_solve: x_true has the wrong length");

  SolveReport rep;
  rep.x.assign(n, 0.0);
  Vec r(f.begin(), f.end()), z(n), d(n), ad(n), e(n), ae(n);
  project_out_constants(r);

  auto error_norm = [&]() {
    for (std::size_t i = 0; i < n; ++i) e[i] = rep.x[i] - (*x_true)[i];
    project_out_constants(e);
    apply_a(e, ae);
    return std::sqrt(std::max(0.0, dot(e, ae)));
  };

  apply_b(r, z);
  project_out_constants(z);
  double rz = dot(r, z);
  if (rz < 0.0) {
    rep.status = SolveStatus::indefinite_preconditioner;
    rep.diagnostic = "(B r_0, r_0) = " + std::to_string(rz) + " < 0";
    return rep;
  }
  rep.residual_history.push_back(std::sqrt(rz));
  if (x_true) rep.error_a_norm_history.push_back(error_norm());
  const double r0 = rep.residual_history.front();
  const double e0 = x_true ? rep.error_a_norm_history.front() : 0.0;
  auto done = [&]() {
    if (x_true) return e0 == 0.0 || rep.error_a_norm_history.back() <= tol * e0;
    return r0 == 0.0 || rep.residual_history.back() <= tol * r0;
  };
  if (done()) {
    rep.status = SolveStatus::converged;
    return rep;
  }

  d = z;
  for (int it = 0; it < max_iter; ++it) {
    apply_a(d, ad);
    const double dad = dot(d, ad);
    if (!(dad > 0.0)) {
      rep.status = SolveStatus::breakdown;
      rep.diagnostic = "(A d, d) = " + std::to_string(dad) + " at iteration " + std::to_string(it);
      return rep;
    }
    const double alpha = rz / dad;
    for (std::size_t i = 0; i < n; ++i) {
      rep.x[i] += alpha * d[i];
      r[i] -= alpha * ad[i];
    }
    project_out_constants(rep.x);
    apply_b(r, z);
    project_out_constants(z);
    const double rz_new = dot(r, z);
    rep.iterations = it + 1;
    rep.alpha.push_back(alpha);
    if (rz_new < 0.0) {
      rep.status = SolveStatus::indefinite_preconditioner;
      rep.diagnostic = "(B r, r) = " + std::to_string(rz_new) + " < 0 at iteration " + std::to_string(it + 1);
      return rep;
    }
    rep.residual_history.push_back(std::sqrt(rz_new));
    if (x_true) rep.error_a_norm_history.push_back(error_norm());
    if (done()) {
      rep.status = SolveStatus::converged;
      return rep;
    }
    const double beta = rz_new / rz;
    rep.beta.push_back(beta);
    for (std::size_t i = 0; i < n; ++i) d[i] = z[i] + beta * d[i];
    rz = rz_new;
  }
  rep.status = SolveStatus::max_iterations;
  rep.diagnostic = "no convergence in " + std::to_string(max_iter) + " iterations";
  return rep;
}

SpectrumEstimate lanczos_from_cg(const SolveReport& report, int steps) {
  int m = static_cast<int>(report.alpha.size());
  if (steps > 0) m = std::min(m, steps);
  if (m == 0) throw std::invalid_argument("lanczos_from_cg: report has no CG steps");
  Eigen::VectorXd diag(m), off(std::max(0, m - 1));
  for (int j = 0; j < m; ++j) {
    diag[j] = 1.0 / report.alpha[j];
    if (j > 0) diag[j] += report.beta[j - 1] / report.alpha[j - 1];
    if (j + 1 < m) off[j] = std::sqrt(report.beta[j]) / report.alpha[j];
  }
  SpectrumEstimate s;
  s.steps = m;
  if (m == 1) {
    s.lambda_min = s.lambda_max = diag[0];
    return s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  s.lambda_min = es.eigenvalues()[0];
  s.lambda_max = es.eigenvalues()[m - 1];
  return s;
}

SpectrumEstimate lanczos_extremes(const LinearOperator& apply_a, const LinearOperator& apply_b, Index n, int iters,
                                  std::uint64_t seed) {
  if (iters < 2) throw std::invalid_argument("lanczos_extremes: need at least 2 iterations");
  SplitMix64 rng(seed);
  Vec f(n);
  for (double& v : f) v = rng.uniform(-1.0, 1.0);
  project_out_constants(f);
  // Tolerance at the edge of double precision: stop only on exhaustion.
  const SolveReport rep = pcg_solve(apply_a, apply_b, f, 1e-15, std::nullopt, iters);
  if (rep.alpha.empty()) throw std::runtime_error("lanczos_extremes: no CG step (" + rep.diagnostic + ")");
  return lanczos_from_cg(rep, iters);
}

double rate_from_kappa(double kappa) {
  if (!(kappa >= 1.0)) throw std::invalid_argument("rate_from_kappa: kappa must be >= 1");
  const double s = std::sqrt(kappa);
  return (s - 1.0) / (s + 1.0);
}

Rates rates(const SolveReport& report, const SpectrumEstimate& spectrum, double zeta_j) {
  Rates out;
  const auto& e = report.error_a_norm_history;
  if (!e.empty() && report.iterations > 0 && e.front() > 0.0) {
    out.r_a = std::pow(e.back() / e.front(), 1.0 / report.iterations);
  }
  out.r_e = rate_from_kappa(std::max(1.0, spectrum.lambda_max / spectrum.lambda_min));
  out.r_k = rate_from_kappa(zeta_j);
  return out;
}

}  // namespace amli
