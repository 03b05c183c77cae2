#include "airfed/channel.hpp"

#include <stdexcept>

namespace airfed {

FadingProfile FadingProfile::from_betas(arma::vec betas) {
  if (betas.n_elem == 0) {
    throw std::invalid_argument("fading profile must have at least one client");
  }
  if (arma::any(betas <= 0.0)) {
    throw std::invalid_argument("fading coefficients must be strictly positive");
  }
  FadingProfile p;
  p.beta_min = betas.min();
  p.betas = std::move(betas);
  return p;
}

ChannelRealization generate_channel(arma::uword antennas, arma::uword clients,
                                    const FadingProfile& profile, Rng& rng) {
  if (antennas < 1 || clients < 1) {
    throw std::invalid_argument("channel needs at least one antenna and client");
  }
  if (profile.clients() != clients) {
    throw std::invalid_argument("fading profile size does not match client count");
  }
  ChannelRealization ch;
  ch.G = rng.cx_gaussian_mat(antennas, clients);
  for (arma::uword k = 0; k < clients; ++k) {
    ch.G.col(k) *= std::sqrt(profile.betas[k]);
  }
  return ch;
}

PilotSet make_orthogonal_pilots(arma::uword tau_p, arma::uword clients) {
  if (tau_p < clients) {
    throw std::invalid_argument("pilot length must be at least the client count");
  }
  PilotSet pilots;
  pilots.Phi.set_size(tau_p, clients);
  const double scale = 1.0 / std::sqrt(static_cast<double>(tau_p));
  for (arma::uword k = 0; k < clients; ++k) {
    for (arma::uword t = 0; t < tau_p; ++t) {
      const double angle = -2.0 * arma::datum::pi *
                           static_cast<double>(t) * static_cast<double>(k) /
                           static_cast<double>(tau_p);
      pilots.Phi(t, k) = scale * arma::cx_double(std::cos(angle), std::sin(angle));
    }
  }
  return pilots;
}

arma::cx_mat pilot_rx_orthogonal(const ChannelRealization& channel,
                                 const PilotSet& pilots, double rho, Rng& rng,
                                 bool with_noise) {
  if (pilots.clients() != channel.clients()) {
    throw std::invalid_argument("pilot set does not match channel client count");
  }
  const double tau_p = static_cast<double>(pilots.length());
  arma::cx_mat Y = std::sqrt(rho * tau_p) * channel.G * pilots.Phi.t();
  if (with_noise) {
    Y += rng.cx_gaussian_mat(channel.antennas(), pilots.length());
  }
  return Y;
}

arma::cx_mat pilot_rx_sum(const ChannelRealization& channel,
                          const arma::cx_vec& phi, double rho,
                          const FadingProfile& profile, Rng& rng,
                          bool with_noise) {
  if (profile.clients() != channel.clients()) {
    throw std::invalid_argument("fading profile does not match channel client count");
  }
  if (profile.beta_min <= 0.0) {
    throw std::invalid_argument("beta_min must be positive");
  }
  const double tau_p = static_cast<double>(phi.n_elem);
  // Power scaling beta_min/beta_k turns g_k into sqrt(beta_min) h_k.
  arma::cx_vec combined(channel.antennas(), arma::fill::zeros);
  for (arma::uword k = 0; k < channel.clients(); ++k) {
    combined += std::sqrt(rho * tau_p * profile.beta_min / profile.betas[k]) *
                channel.G.col(k);
  }
  arma::cx_mat Y = combined * phi.t();
  if (with_noise) {
    Y += rng.cx_gaussian_mat(channel.antennas(), phi.n_elem);
  }
  return Y;
}

}  // namespace airfed
