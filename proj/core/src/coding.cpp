#include "airfed/coding.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace airfed {

arma::cx_vec split(const arma::vec& delta_theta) {
  const arma::uword d = delta_theta.n_elem;
  const arma::uword half = (d + 1) / 2;
  arma::cx_vec x(half);
  for (arma::uword i = 0; i < half; ++i) {
    const double re = delta_theta[i];
    const double im = (i + half < d) ? delta_theta[i + half] : 0.0;
    x[i] = {re, im};
  }
  return x;
}

arma::vec unsplit(const arma::cx_vec& x, arma::uword d) {
  const arma::uword half = x.n_elem;
  if (d != 2 * half && d + 1 != 2 * half) {
    throw std::invalid_argument("unsplit length does not match packed vector");
  }
  arma::vec delta(d);
  for (arma::uword i = 0; i < half; ++i) {
    delta[i] = x[i].real();
    if (i + half < d) delta[i + half] = x[i].imag();
  }
  return delta;
}

arma::cx_vec densify(const SparseUpdate& sparse) {
  arma::cx_vec x(sparse.dim, arma::fill::zeros);
  for (arma::uword i = 0; i < sparse.nnz(); ++i) {
    x[sparse.support[i]] = sparse.values[i];
  }
  return x;
}

arma::uvec top_magnitude(const arma::cx_vec& v, arma::uword S) {
  const arma::uword n = v.n_elem;
  if (n == 0) return {};
  if (S >= n) {
    return arma::regspace<arma::uvec>(0, n - 1);
  }
  std::vector<arma::uword> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  const auto better = [&v](arma::uword a, arma::uword b) {
    const double ma = std::abs(v[a]);
    const double mb = std::abs(v[b]);
    if (ma != mb) return ma > mb;
    return a < b;  // ties keep the lower index
  };
  std::nth_element(idx.begin(), idx.begin() + S, idx.end(), better);
  idx.resize(S);
  std::sort(idx.begin(), idx.end());
  return arma::uvec(idx);
}

std::pair<SparseUpdate, arma::cx_vec> sparsify(const arma::cx_vec& x_full,
                                               const arma::cx_vec& residual,
                                               arma::uword S) {
  if (S < 1) throw std::invalid_argument("sparsity level must be at least 1");
  if (x_full.n_elem != residual.n_elem) {
    throw std::invalid_argument("residual length does not match update");
  }
  const arma::cx_vec carrier = x_full + residual;
  return sparsify_on_pattern(x_full, residual, top_magnitude(carrier, S));
}

arma::uvec choose_pattern_from_client(const arma::cx_vec& x_full, arma::uword S) {
  return top_magnitude(x_full, S);
}

std::pair<SparseUpdate, arma::cx_vec> sparsify_on_pattern(
    const arma::cx_vec& x_full, const arma::cx_vec& residual,
    const arma::uvec& pattern) {
  if (x_full.n_elem != residual.n_elem) {
    throw std::invalid_argument("residual length does not match update");
  }
  arma::cx_vec new_residual = x_full + residual;

  SparseUpdate sparse;
  sparse.dim = x_full.n_elem;
  std::vector<arma::uword> support;
  std::vector<arma::cx_double> values;
  support.reserve(pattern.n_elem);
  values.reserve(pattern.n_elem);
  for (arma::uword i = 0; i < pattern.n_elem; ++i) {
    const arma::uword j = pattern[i];
    const arma::cx_double kept = new_residual[j];
    if (kept == arma::cx_double{0.0, 0.0}) continue;  // keep values nonzero
    support.push_back(j);
    values.push_back(kept);
    new_residual[j] = {0.0, 0.0};  // carrier minus kept part, exactly
  }
  sparse.support = arma::uvec(support);
  sparse.values = arma::cx_vec(values);
  return {std::move(sparse), std::move(new_residual)};
}

double spectral_norm_power_iteration(const arma::cx_mat& A, Rng& rng,
                                     arma::uword max_iters, double rel_tol) {
  // Iterate on the smaller of A A^H and A^H A; both share the top
  // eigenvalue |A|_2^2 and the Gram form keeps each step cheap.
  const bool wide = A.n_cols >= A.n_rows;
  const arma::cx_mat B = wide ? arma::cx_mat(A * A.t()) : arma::cx_mat(A.t() * A);
  arma::cx_vec v = rng.cx_gaussian_vec(B.n_rows);
  v /= arma::norm(v);

  double lambda = 0.0;
  for (arma::uword it = 0; it < max_iters; ++it) {
    arma::cx_vec w = B * v;
    const double next = arma::norm(w);
    if (next == 0.0) return 0.0;  // zero matrix
    v = w / next;
    if (it > 0 && std::abs(next - lambda) <= rel_tol * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

MeasurementMatrix make_measurement_matrix(arma::uword samples,
                                          arma::uword half_d, Rng& rng) {
  if (samples < 1 || half_d < 1) {
    throw std::invalid_argument("measurement matrix must be nonempty");
  }
  MeasurementMatrix m;
  m.A = rng.cx_gaussian_mat(samples, half_d);
  const double raw_norm = spectral_norm_power_iteration(m.A, rng);
  m.A /= 1.01 * raw_norm;
  m.spectral_norm = 1.0 / 1.01;
  return m;
}

arma::cx_vec encode(const SparseUpdate& sparse, const MeasurementMatrix& matrix) {
  if (sparse.dim != matrix.dim()) {
    throw std::invalid_argument("sparse vector dimension does not match matrix");
  }
  arma::cx_vec x(matrix.samples(), arma::fill::zeros);
  for (arma::uword i = 0; i < sparse.nnz(); ++i) {
    x += sparse.values[i] * matrix.A.col(sparse.support[i]);
  }
  return x;
}

}  // namespace airfed
