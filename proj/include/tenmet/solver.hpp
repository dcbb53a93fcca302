#ifndef TENMET_SOLVER_HPP
#define TENMET_SOLVER_HPP

#include <vector>

#include "tenmet/objective.hpp"
#include "tenmet/types.hpp"

namespace tenmet {

/// Fixed-point-continuation solver settings.
///
/// The continuation schedule starts at mu_1 = mu_init_scale * lambda_max(g)
/// at the initial iterate and decays geometrically (factor mu_decay) down to
/// mu_bar. mu_bar <= 0 selects the default 1e-4 * mu_1; tau <= 0 selects the
/// automatic step size 1 / lambda_max(g) per stage with halving on objective
/// increase.
struct SolverConfig {
  double mu_bar = 0.0;
  double mu_decay = 0.25;
  double mu_init_scale = 0.25;
  int t_max = 200;          // inner iterations per mu stage
  double rel_tol = 1e-5;    // ||W' - W||_F / max(1, ||W||_F) stopping rule
  double tau = 0.0;         // fixed step size; <= 0 means automatic
  bool record_iterates = false;
};

/// Result of one per-mode solve.
struct SolverState {
  Matrix w;
  std::vector<double> objective_trace;  // objective after each accepted step
  std::vector<double> mu_trace;         // mu in force at that step
  double mu_current = 0.0;
  int iterations_used = 0;
  std::vector<Matrix> iterates;  // filled when record_iterates is set
};

/// Eigenvalue soft-threshold: symmetrize Z, subtract `threshold` from every
/// eigenvalue and clamp at zero, then reassemble. The result is PSD and its
/// nuclear norm is sum_i max(0, lambda_i - threshold).
Matrix shrink(const Matrix& z, double threshold);

/// Runs the continuation loop: at each mu stage, alternate the gradient step
/// Z = W - tau g(W) with the shrinkage step W = shrink(Z, tau mu) until the
/// relative change drops below rel_tol or t_max is reached.
///
/// Throws StepSizeDiverged if a user-fixed tau makes the objective increase
/// five steps in a row.
SolverState mfpc_solve(const ModeContext& ctx, const Matrix& w0,
                       const SolverConfig& cfg);

/// Largest eigenvalue of a symmetric matrix (used for step sizes and the
/// continuation start).
double max_eigenvalue(const Matrix& sym);

}  // namespace tenmet

#endif  // TENMET_SOLVER_HPP
