#pragma once

#include <utility>

#include <armadillo>

#include "airfed/rng.hpp"

namespace airfed {

/// Packs a real model update of length d into a complex vector of length
/// ceil(d/2): element i is delta[i] + j delta[i + d/2]. Odd d is padded
/// with one trailing zero first.
arma::cx_vec split(const arma::vec& delta_theta);

/// Exact inverse of split; `d` is the original (possibly odd) length.
arma::vec unsplit(const arma::cx_vec& x, arma::uword d);

/// An at-most-S-sparse complex vector stored as (support, values).
struct SparseUpdate {
  arma::uvec support;   // strictly increasing, 0-based
  arma::cx_vec values;  // nonzero, aligned with support
  arma::uword dim = 0;  // ambient dimension d/2

  arma::uword nnz() const { return support.n_elem; }
};

arma::cx_vec densify(const SparseUpdate& sparse);

/// Indices of the S largest-magnitude entries, ties broken toward the
/// lower index; returned sorted ascending.
arma::uvec top_magnitude(const arma::cx_vec& v, arma::uword S);

/// Top-S sparsification with error feedback: adds the accumulated residual
/// to the packed update, keeps the S largest-magnitude entries, and returns
/// the kept part plus the new residual (carrier minus kept part, exact).
std::pair<SparseUpdate, arma::cx_vec> sparsify(const arma::cx_vec& x_full,
                                               const arma::cx_vec& residual,
                                               arma::uword S);

/// The pattern a randomly chosen client imposes on everyone in the
/// shared-pattern variant: its own top-S index set.
arma::uvec choose_pattern_from_client(const arma::cx_vec& x_full, arma::uword S);

/// Projects carrier = x_full + residual onto a fixed support; everything
/// off the pattern (and exact zeros on it) goes into the new residual.
std::pair<SparseUpdate, arma::cx_vec> sparsify_on_pattern(
    const arma::cx_vec& x_full, const arma::cx_vec& residual,
    const arma::uvec& pattern);

/// Compression matrix with spectral norm pinned to 1/1.01.
struct MeasurementMatrix {
  arma::cx_mat A;  // T x d/2
  double spectral_norm = 0.0;

  arma::uword samples() const { return A.n_rows; }
  arma::uword dim() const { return A.n_cols; }
};

/// Largest singular value via power iteration on the smaller Gram matrix;
/// stops at 1e-8 relative change or 200 iterations.
double spectral_norm_power_iteration(const arma::cx_mat& A, Rng& rng,
                                     arma::uword max_iters = 200,
                                     double rel_tol = 1e-8);

/// Draws A_r with i.i.d. CN(0,1) entries and rescales to A_r/(1.01 |A_r|_2)
/// so iterative hard thresholding is guaranteed to descend.
MeasurementMatrix make_measurement_matrix(arma::uword samples,
                                          arma::uword half_d, Rng& rng);

/// x = A * densify(sparse), computed from the support only.
arma::cx_vec encode(const SparseUpdate& sparse, const MeasurementMatrix& matrix);

}  // namespace airfed
