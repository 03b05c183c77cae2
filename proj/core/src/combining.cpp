#include "airfed/combining.hpp"

namespace airfed {

CombinedPerClient blue_combine(const arma::cx_mat& Y,
                               const PerClientEstimate& est,
                               const PowerAllocation& alloc, double rho) {
  const arma::uword antennas = est.G_hat.n_rows;
  const arma::uword clients = est.G_hat.n_cols;
  if (Y.n_rows != antennas) {
    throw std::invalid_argument("received block does not match antenna count");
  }
  if (alloc.etas.n_elem != clients) {
    throw std::invalid_argument("power allocation does not match client count");
  }
  if (antennas < clients) {
    throw CombiningError("zero-forcing needs at least as many antennas as clients");
  }

  const arma::cx_mat gram = est.G_hat.t() * est.G_hat;
  if (!gram.is_finite() || arma::cond(gram) > 1e12) {
    throw CombiningError("estimated channel Gram matrix is rank deficient");
  }
  // Row k of solve(gram, G_hat^H Y) equals ([G_hat gram^-1]_k)^H Y.
  arma::cx_mat separated;
  if (!arma::solve(separated, gram, arma::cx_mat(est.G_hat.t() * Y),
                   arma::solve_opts::likely_sympd)) {
    throw CombiningError("normal-equations solve failed");
  }

  CombinedPerClient out;
  out.x_hats.resize(clients);
  out.silent.resize(clients);
  for (arma::uword k = 0; k < clients; ++k) {
    const bool silent = alloc.etas[k] <= 0.0;
    out.silent[k] = silent ? 1 : 0;
    if (silent) {
      out.x_hats[k] = arma::cx_vec(Y.n_cols, arma::fill::zeros);
    } else {
      out.x_hats[k] = separated.row(k).st() / std::sqrt(alloc.etas[k] * rho);
    }
  }
  return out;
}

CombinedSum sum_combine(const arma::cx_mat& Y, const SumEstimate& est,
                        double eta, double rho, arma::uword antennas,
                        arma::uword clients) {
  if (Y.n_rows != est.h_hat_sum.n_elem || Y.n_rows != antennas) {
    throw std::invalid_argument("received block does not match estimate length");
  }
  if (eta <= 0.0) {
    throw CombiningError("no transmission occurred (eta = 0)");
  }
  if (est.gamma_bar <= 0.0) {
    throw CombiningError("sum estimate carries no information (gamma_bar = 0)");
  }
  CombinedSum out;
  out.scaling = static_cast<double>(clients) /
                (static_cast<double>(antennas) * std::sqrt(eta * rho) *
                 est.gamma_bar);
  out.x_hat = out.scaling * (est.h_hat_sum.t() * Y).st();
  return out;
}

arma::vec genie_aggregate(const std::vector<arma::vec>& updates,
                          const arma::vec& weights) {
  if (updates.empty() || updates.size() != weights.n_elem) {
    throw std::invalid_argument("genie aggregate needs one weight per update");
  }
  arma::vec sum(updates[0].n_elem, arma::fill::zeros);
  for (std::size_t k = 0; k < updates.size(); ++k) {
    if (updates[k].n_elem != sum.n_elem) {
      throw std::invalid_argument("updates must have equal lengths");
    }
    sum += weights[k] * updates[k];
  }
  return sum;
}

}  // namespace airfed
