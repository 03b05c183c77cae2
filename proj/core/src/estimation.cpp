#include "airfed/estimation.hpp"

#include <stdexcept>

namespace airfed {

double estimate_quality(double rho, double tau_p, double beta) {
  return rho * tau_p * beta * beta / (1.0 + rho * tau_p * beta);
}

double sum_estimate_quality(double rho, double tau_p, double beta_min,
                            arma::uword clients) {
  const double k = static_cast<double>(clients);
  return rho * tau_p * beta_min * k * k / (1.0 + rho * tau_p * beta_min * k);
}

PerClientEstimate estimate_per_client(const arma::cx_mat& Y_p,
                                      const PilotSet& pilots, double rho,
                                      const FadingProfile& profile) {
  if (Y_p.n_cols != pilots.length()) {
    throw std::invalid_argument("pilot block width does not match pilot length");
  }
  const arma::uword clients = pilots.clients();
  if (profile.clients() != clients) {
    throw std::invalid_argument("fading profile size does not match pilot set");
  }
  const double tau_p = static_cast<double>(pilots.length());

  PerClientEstimate est;
  est.G_hat.set_size(Y_p.n_rows, clients);
  est.gammas.set_size(clients);
  // Sufficient statistic per client: Y phi_k = sqrt(rho tau_p) g_k + noise.
  const arma::cx_mat stats = Y_p * pilots.Phi;
  for (arma::uword k = 0; k < clients; ++k) {
    const double beta = profile.betas[k];
    const double shrink = std::sqrt(rho * tau_p) * beta / (1.0 + rho * tau_p * beta);
    est.G_hat.col(k) = shrink * stats.col(k);
    est.gammas[k] = estimate_quality(rho, tau_p, beta);
  }
  return est;
}

SumEstimate estimate_sum(const arma::cx_mat& Y_p, const arma::cx_vec& phi,
                         double rho, const FadingProfile& profile,
                         arma::uword clients) {
  if (Y_p.n_cols != phi.n_elem) {
    throw std::invalid_argument("pilot block width does not match pilot length");
  }
  const double tau_p = static_cast<double>(phi.n_elem);
  const double k = static_cast<double>(clients);
  const double beta_min = profile.beta_min;

  SumEstimate est;
  const double shrink = std::sqrt(rho * tau_p * beta_min) * k /
                        (1.0 + rho * tau_p * beta_min * k);
  est.h_hat_sum = shrink * (Y_p * phi);
  est.gamma_bar = sum_estimate_quality(rho, tau_p, beta_min, clients);
  return est;
}

double mse_sum_from_orthogonal(const FadingProfile& profile, double rho,
                               double tau_p) {
  double mse = 0.0;
  for (arma::uword k = 0; k < profile.clients(); ++k) {
    mse += profile.betas[k] - estimate_quality(rho, tau_p, profile.betas[k]);
  }
  return mse;
}

double mse_sum_from_common(const FadingProfile& profile, double rho,
                           double tau_p, arma::uword clients) {
  const double gamma_bar =
      sum_estimate_quality(rho, tau_p, profile.beta_min, clients);
  return profile.beta_min * (static_cast<double>(clients) - gamma_bar);
}

}  // namespace airfed
