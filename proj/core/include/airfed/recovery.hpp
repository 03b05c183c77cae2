#pragma once

#include <vector>

#include <armadillo>

#include "airfed/coding.hpp"
#include "airfed/rng.hpp"

namespace airfed {

/// One sparse inverse problem: min |A x - y|_2^2 s.t. |x|_0 <= budget.
/// The matrix is referenced, not owned; keep it alive while solving.
struct RecoveryProblem {
  const arma::cx_mat* A = nullptr;
  arma::cx_vec y;
  arma::uword sparsity_budget = 0;

  RecoveryProblem(const arma::cx_mat& matrix, arma::cx_vec observation,
                  arma::uword budget)
      : A(&matrix), y(std::move(observation)), sparsity_budget(budget) {}
};

struct RecoveryResult {
  arma::cx_vec x;
  double objective = 0.0;  // final |A x - y|_2^2
  arma::uword iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // one entry per IHT iteration
};

/// Greedy matching pursuit, stopped once the set of distinct selected atoms
/// reaches the sparsity budget (or the residual vanishes). Coefficients
/// accumulate across re-selections of the same atom; no least-squares refit.
arma::cx_vec matching_pursuit_warm_start(const RecoveryProblem& prob);

/// Iterative hard thresholding x <- H_budget(x + A^H (y - A x)) from the
/// given starting point. Requires |A|_2 < 1; the objective is then
/// non-increasing. Stops at 1e-6 relative change of x or 500 iterations.
RecoveryResult iht_solve(const RecoveryProblem& prob,
                         const arma::cx_vec& warm_start);

/// Public entry point: IHT warm-started by matching pursuit.
RecoveryResult recover(const RecoveryProblem& prob);

/// Draws random S-sparse signals, compresses them with fresh matrices, and
/// counts exact-support recoveries. Validation harness for solver quality.
double recovery_rate_experiment(arma::uword samples, arma::uword half_d,
                                arma::uword sparsity, arma::uword trials,
                                double noise_level, Rng& rng);

namespace detail {
/// Keeps the budget largest-magnitude entries (ties to the lower index).
arma::cx_vec hard_threshold(const arma::cx_vec& v, arma::uword budget);
}  // namespace detail

}  // namespace airfed
