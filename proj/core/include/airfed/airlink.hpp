#pragma once

#include <stdexcept>
#include <vector>

#include <armadillo>

#include "airfed/channel.hpp"
#include "airfed/rng.hpp"

namespace airfed {

/// Thrown when a round cannot transmit at all (every client silent).
class PowerControlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-client power-control coefficients eta_k, constrained so that
/// |sqrt(eta_k) x_k|^2 <= T for every client.
struct PowerAllocation {
  arma::vec etas;
};

/// Full-power policy: eta_k = T / |x_k|^2 (each client hits the constraint
/// with equality). A zero-norm client gets eta_k = 0 and stays silent.
PowerAllocation power_full(const std::vector<arma::cx_vec>& x,
                           double sample_budget);

struct SumPower {
  PowerAllocation alloc;
  double eta = 0.0;  // common scale: eta_k = eta w_k^2 / beta_k
};

/// Coordinated policy for sum-channel combining: the received power must be
/// equal across clients, eta_k = eta w_k^2/beta_k, with eta chosen so the
/// loudest client meets the constraint with equality.
SumPower power_sum(const std::vector<arma::cx_vec>& x,
                   const arma::vec& weights, const FadingProfile& profile,
                   double sample_budget);

/// Uplink data transmission: Y = sum_k sqrt(rho eta_k) g_k x_k^T + N with
/// unit-variance AWGN. `with_noise=false` suppresses N for exact tests.
arma::cx_mat transmit(const std::vector<arma::cx_vec>& x,
                      const PowerAllocation& alloc,
                      const ChannelRealization& channel, double rho, Rng& rng,
                      bool with_noise = true);

}  // namespace airfed
