#include "airfed/airlink.hpp"

namespace airfed {

PowerAllocation power_full(const std::vector<arma::cx_vec>& x,
                           double sample_budget) {
  PowerAllocation alloc;
  alloc.etas.set_size(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double energy = std::pow(arma::norm(x[k]), 2);
    alloc.etas[k] = energy > 0.0 ? sample_budget / energy : 0.0;
  }
  return alloc;
}

SumPower power_sum(const std::vector<arma::cx_vec>& x,
                   const arma::vec& weights, const FadingProfile& profile,
                   double sample_budget) {
  if (x.size() != weights.n_elem || x.size() != profile.clients()) {
    throw std::invalid_argument("power_sum inputs disagree on client count");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double energy = std::pow(arma::norm(x[k]), 2);
    const double load = weights[k] * weights[k] / profile.betas[k] * energy;
    worst = std::max(worst, load);
  }
  if (worst <= 0.0) {
    throw PowerControlError("all clients silent; common power scale undefined");
  }
  SumPower power;
  power.eta = sample_budget / worst;
  power.alloc.etas.set_size(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    power.alloc.etas[k] =
        power.eta * weights[k] * weights[k] / profile.betas[k];
  }
  return power;
}

arma::cx_mat transmit(const std::vector<arma::cx_vec>& x,
                      const PowerAllocation& alloc,
                      const ChannelRealization& channel, double rho, Rng& rng,
                      bool with_noise) {
  const arma::uword clients = channel.clients();
  if (x.size() != clients || alloc.etas.n_elem != clients) {
    throw std::invalid_argument("transmit inputs disagree on client count");
  }
  const arma::uword samples = x.empty() ? 0 : x[0].n_elem;
  for (const auto& xk : x) {
    if (xk.n_elem != samples) {
      throw std::invalid_argument("encoded vectors must share one length");
    }
  }
  // Y = G_scaled * X with row k of X equal to sqrt(rho eta_k) x_k^T.
  arma::cx_mat X(clients, samples);
  for (arma::uword k = 0; k < clients; ++k) {
    X.row(k) = std::sqrt(rho * alloc.etas[k]) * x[k].st();
  }
  arma::cx_mat Y = channel.G * X;
  if (with_noise) {
    Y += rng.cx_gaussian_mat(channel.antennas(), samples);
  }
  return Y;
}

}  // namespace airfed
