#pragma once

#include <stdexcept>
#include <vector>

#include <armadillo>

#include "airfed/airlink.hpp"
#include "airfed/estimation.hpp"

namespace airfed {

/// Thrown when the estimated channel matrix is too ill-conditioned to
/// separate the clients; the harness aborts the round.
class CombiningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-client combined observations x_hat_k (length T each). Clients that
/// did not transmit (eta_k = 0) carry a zero vector and the silent flag.
struct CombinedPerClient {
  std::vector<arma::cx_vec> x_hats;
  std::vector<char> silent;
};

/// Sum-channel combined observation and the scaling constant applied.
struct CombinedSum {
  arma::cx_vec x_hat;
  double scaling = 0.0;  // c = K / (M sqrt(eta rho) gamma_bar)
};

/// Best linear unbiased (zero-forcing) combining on individual estimates:
/// x_hat_k = (1/sqrt(eta_k rho)) [G_hat (G_hat^H G_hat)^-1]_k^H Y.
/// Requires M >= K and cond(G_hat^H G_hat) below 1e12.
CombinedPerClient blue_combine(const arma::cx_mat& Y,
                               const PerClientEstimate& est,
                               const PowerAllocation& alloc, double rho);

/// Conjugate combining on the sum-channel estimate:
/// x_hat = c (h_hat_sum^H Y)^T with c = K / (M sqrt(eta rho) gamma_bar).
CombinedSum sum_combine(const arma::cx_mat& Y, const SumEstimate& est,
                        double eta, double rho, arma::uword antennas,
                        arma::uword clients);

/// Ideal aggregation: sum_k w_k update_k, bypassing the channel entirely.
arma::vec genie_aggregate(const std::vector<arma::vec>& updates,
                          const arma::vec& weights);

}  // namespace airfed
