#pragma once

#include <armadillo>

#include "airfed/channel.hpp"

namespace airfed {

/// MMSE estimates of the individual client channels plus their per-antenna
/// qualities gamma_k = rho tau_p beta_k^2 / (1 + rho tau_p beta_k).
struct PerClientEstimate {
  arma::cx_mat G_hat;  // M x K
  arma::vec gammas;    // K
};

/// MMSE estimate of the normalized sum channel h_sum = sum_k h_k and its
/// quality gamma_bar = rho tau_p beta_min K^2 / (1 + rho tau_p beta_min K).
struct SumEstimate {
  arma::cx_vec h_hat_sum;  // M
  double gamma_bar = 0.0;
};

/// Per-antenna mean-square of the individual MMSE channel estimate.
double estimate_quality(double rho, double tau_p, double beta);

/// Per-antenna mean-square of the sum-channel MMSE estimate.
double sum_estimate_quality(double rho, double tau_p, double beta_min,
                            arma::uword clients);

/// MMSE estimate of every client channel from the orthogonal-pilot block:
/// g_hat_k = sqrt(rho tau_p) beta_k / (1 + rho tau_p beta_k) * Y phi_k.
PerClientEstimate estimate_per_client(const arma::cx_mat& Y_p,
                                      const PilotSet& pilots, double rho,
                                      const FadingProfile& profile);

/// MMSE estimate of the normalized sum channel from the shared-pilot block:
/// h_hat = sqrt(rho tau_p beta_min) K / (1 + rho tau_p beta_min K) * Y phi.
SumEstimate estimate_sum(const arma::cx_mat& Y_p, const arma::cx_vec& phi,
                         double rho, const FadingProfile& profile,
                         arma::uword clients);

/// Closed-form per-antenna MSE of the sum channel reconstructed by adding
/// the K individual estimates: sum_k (beta_k - gamma_k).
double mse_sum_from_orthogonal(const FadingProfile& profile, double rho,
                               double tau_p);

/// Closed-form per-antenna MSE of the shared-pilot sum-channel estimate,
/// on the beta_min power scale: beta_min * (K - gamma_bar).
double mse_sum_from_common(const FadingProfile& profile, double rho,
                           double tau_p, arma::uword clients);

}  // namespace airfed
