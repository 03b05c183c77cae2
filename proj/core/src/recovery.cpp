#include "airfed/recovery.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace airfed {

namespace detail {

arma::cx_vec hard_threshold(const arma::cx_vec& v, arma::uword budget) {
  if (budget >= v.n_elem) return v;
  const arma::uvec keep = top_magnitude(v, budget);
  arma::cx_vec out(v.n_elem, arma::fill::zeros);
  for (arma::uword i = 0; i < keep.n_elem; ++i) out[keep[i]] = v[keep[i]];
  return out;
}

}  // namespace detail

namespace {

void check_problem(const RecoveryProblem& prob) {
  if (prob.A == nullptr) throw std::invalid_argument("recovery problem has no matrix");
  if (prob.sparsity_budget < 1) {
    throw std::invalid_argument("sparsity budget must be at least 1");
  }
  if (prob.y.n_elem != prob.A->n_rows) {
    throw std::invalid_argument("observation length does not match matrix");
  }
}

// A*x through the nonzero columns only; the iterates stay budget-sparse so
// this is far cheaper than a dense product.
arma::cx_vec sparse_product(const arma::cx_mat& A, const arma::cx_vec& x) {
  arma::uword nnz = 0;
  for (arma::uword j = 0; j < x.n_elem; ++j) {
    if (x[j] != arma::cx_double{0.0, 0.0}) ++nnz;
  }
  if (4 * nnz >= x.n_elem) return A * x;
  arma::cx_vec out(A.n_rows, arma::fill::zeros);
  for (arma::uword j = 0; j < x.n_elem; ++j) {
    if (x[j] != arma::cx_double{0.0, 0.0}) out += x[j] * A.col(j);
  }
  return out;
}

}  // namespace

arma::cx_vec matching_pursuit_warm_start(const RecoveryProblem& prob) {
  check_problem(prob);
  const arma::cx_mat& A = *prob.A;
  const arma::uword n = A.n_cols;

  arma::vec col_norms_sq(n);
  for (arma::uword j = 0; j < n; ++j) {
    col_norms_sq[j] = std::pow(arma::norm(A.col(j)), 2);
  }

  arma::cx_vec x(n, arma::fill::zeros);
  arma::cx_vec residual = prob.y;
  std::unordered_set<arma::uword> atoms;
  // Re-selections refine coefficients without growing the atom set; the cap
  // bounds the loop when the budget approaches the number of samples.
  const arma::uword max_steps =
      std::max<arma::uword>(4 * prob.sparsity_budget, 32);

  for (arma::uword step = 0; step < max_steps; ++step) {
    if (arma::norm(residual) < 1e-10) break;
    const arma::cx_vec corr = A.t() * residual;

    // Best single-atom energy reduction: maximize |<a_j, r>|^2 / |a_j|^2.
    arma::uword best = 0;
    double best_gain = -1.0;
    for (arma::uword j = 0; j < n; ++j) {
      if (col_norms_sq[j] <= 0.0) continue;
      const double gain = std::norm(corr[j]) / col_norms_sq[j];
      if (gain > best_gain) {
        best_gain = gain;
        best = j;
      }
    }
    if (best_gain <= 0.0) break;

    const arma::cx_double coeff = corr[best] / col_norms_sq[best];
    x[best] += coeff;
    residual -= coeff * A.col(best);
    atoms.insert(best);
    if (atoms.size() >= prob.sparsity_budget) break;
  }
  return x;
}

RecoveryResult iht_solve(const RecoveryProblem& prob,
                         const arma::cx_vec& warm_start) {
  check_problem(prob);
  const arma::cx_mat& A = *prob.A;
  if (warm_start.n_elem != A.n_cols) {
    throw std::invalid_argument("warm start length does not match matrix");
  }
  constexpr arma::uword kMaxIters = 500;
  constexpr double kRelChangeTol = 1e-6;

  RecoveryResult result;
  result.x = detail::hard_threshold(warm_start, prob.sparsity_budget);

  arma::cx_vec residual = prob.y - sparse_product(A, result.x);
  result.objective = std::pow(arma::norm(residual), 2);

  for (arma::uword it = 0; it < kMaxIters; ++it) {
    const arma::cx_vec next = detail::hard_threshold(
        result.x + A.t() * residual, prob.sparsity_budget);
    residual = prob.y - sparse_product(A, next);

    const double change = arma::norm(next - result.x);
    const double scale = arma::norm(result.x);
    result.x = next;
    result.objective = std::pow(arma::norm(residual), 2);
    result.objective_trace.push_back(result.objective);
    result.iterations = it + 1;
    if (change <= kRelChangeTol * std::max(scale, 1e-300)) {
      result.converged = true;
      break;
    }
  }
  return result;
}

RecoveryResult recover(const RecoveryProblem& prob) {
  return iht_solve(prob, matching_pursuit_warm_start(prob));
}

double recovery_rate_experiment(arma::uword samples, arma::uword half_d,
                                arma::uword sparsity, arma::uword trials,
                                double noise_level, Rng& rng) {
  arma::uword successes = 0;
  for (arma::uword trial = 0; trial < trials; ++trial) {
    const MeasurementMatrix matrix =
        make_measurement_matrix(samples, half_d, rng);

    // Random S-sparse ground truth with CN(0,1) values.
    const arma::uvec perm = rng.permutation(half_d);
    arma::uvec support = arma::sort(perm.head(sparsity));
    arma::cx_vec truth(half_d, arma::fill::zeros);
    for (arma::uword i = 0; i < sparsity; ++i) {
      truth[support[i]] = rng.cx_gaussian();
    }

    arma::cx_vec y = matrix.A * truth;
    if (noise_level > 0.0) {
      y += noise_level * rng.cx_gaussian_vec(samples);
    }

    const RecoveryResult result =
        recover(RecoveryProblem(matrix.A, y, sparsity));
    std::vector<arma::uword> recovered;
    for (arma::uword j = 0; j < result.x.n_elem; ++j) {
      if (result.x[j] != arma::cx_double{0.0, 0.0}) recovered.push_back(j);
    }
    const arma::uvec rec(recovered);
    if (rec.n_elem == support.n_elem && arma::all(rec == support)) {
      ++successes;
    }
  }
  return static_cast<double>(successes) / static_cast<double>(trials);
}

}  // namespace airfed
