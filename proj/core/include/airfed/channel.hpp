#pragma once

#include <armadillo>

#include "airfed/rng.hpp"

namespace airfed {

/// Large-scale fading coefficients of the K clients (linear power gains).
struct FadingProfile {
  arma::vec betas;
  double beta_min = 0.0;

  static FadingProfile from_betas(arma::vec betas);
  arma::uword clients() const { return betas.n_elem; }
};

/// One block-fading realization. Column k of G is the M-antenna channel of
/// client k, drawn CN(0, beta_k I). The normalized (small-scale only)
/// channel is g_k / sqrt(beta_k).
struct ChannelRealization {
  arma::cx_mat G;  // M x K

  arma::uword antennas() const { return G.n_rows; }
  arma::uword clients() const { return G.n_cols; }
};

/// Mutually orthonormal pilot sequences, one column per client.
struct PilotSet {
  arma::cx_mat Phi;  // tau_p x K, Phi^H Phi = I

  arma::uword length() const { return Phi.n_rows; }
  arma::uword clients() const { return Phi.n_cols; }
};

/// Draws an i.i.d. Rayleigh block-fading realization: entry (m,k) is
/// CN(0, beta_k), columns independent.
ChannelRealization generate_channel(arma::uword antennas, arma::uword clients,
                                    const FadingProfile& profile, Rng& rng);

/// Deterministic orthonormal pilot set (columns of the tau_p-point DFT
/// matrix, scaled to unit norm). Requires tau_p >= K.
PilotSet make_orthogonal_pilots(arma::uword tau_p, arma::uword clients);

/// Received pilot block when every client sends its own orthogonal pilot:
/// Y = sum_k sqrt(rho tau_p) g_k phi_k^H + N, with unit-variance noise.
arma::cx_mat pilot_rx_orthogonal(const ChannelRealization& channel,
                                 const PilotSet& pilots, double rho, Rng& rng,
                                 bool with_noise = true);

/// Received pilot block when all clients share one pilot and scale their
/// power by beta_min/beta_k, so they transmit over normalized channels:
/// Y = sum_k sqrt(rho tau_p beta_min) h_k phi^H + N.
arma::cx_mat pilot_rx_sum(const ChannelRealization& channel,
                          const arma::cx_vec& phi, double rho,
                          const FadingProfile& profile, Rng& rng,
                          bool with_noise = true);

}  // namespace airfed
