#include "airfed/validate.hpp"

#include <functional>
#include <iomanip>
#include <string>
#include <vector>

#include "airfed/airlink.hpp"
#include "airfed/coding.hpp"
#include "airfed/combining.hpp"
#include "airfed/data.hpp"
#include "airfed/estimation.hpp"
#include "airfed/learning.hpp"
#include "airfed/recovery.hpp"

namespace airfed {

namespace {

struct Check {
  std::string name;
  std::function<bool()> fn;
};

bool channel_second_moment() {
  Rng rng(101);
  const auto profile = FadingProfile::from_betas(arma::vec{0.5, 2.0});
  double acc0 = 0.0;
  double acc1 = 0.0;
  const arma::uword trials = 4000;
  const arma::uword antennas = 16;
  for (arma::uword i = 0; i < trials; ++i) {
    const auto ch = generate_channel(antennas, 2, profile, rng);
    acc0 += arma::accu(arma::square(arma::abs(ch.G.col(0))));
    acc1 += arma::accu(arma::square(arma::abs(ch.G.col(1))));
  }
  const double n = static_cast<double>(trials * antennas);
  return std::abs(acc0 / n - 0.5) < 0.02 && std::abs(acc1 / n - 2.0) < 0.08;
}

bool pilot_orthonormality() {
  const PilotSet pilots = make_orthogonal_pilots(20, 20);
  const arma::cx_mat gram = pilots.Phi.t() * pilots.Phi;
  return arma::norm(gram - arma::eye<arma::cx_mat>(20, 20), "fro") < 1e-12;
}

bool mmse_shrinkage() {
  // Noiseless input shrinks toward the channel by gamma/beta.
  Rng rng(7);
  const auto profile = FadingProfile::from_betas(arma::vec{1.0});
  const auto ch = generate_channel(8, 1, profile, rng);
  const PilotSet pilots = make_orthogonal_pilots(4, 1);
  const arma::cx_mat Y = pilot_rx_orthogonal(ch, pilots, 10.0, rng, false);
  const auto est = estimate_per_client(Y, pilots, 10.0, profile);
  const double shrink = 40.0 / 41.0;
  return arma::norm(est.G_hat.col(0) - shrink * ch.G.col(0)) <
         1e-10 * arma::norm(ch.G.col(0));
}

bool estimation_mse_closed_form() {
  Rng rng(11);
  const auto profile = FadingProfile::from_betas(arma::vec(4, arma::fill::ones));
  const PilotSet pilots = make_orthogonal_pilots(4, 4);
  const double rho = 10.0;
  double mse = 0.0;
  const arma::uword trials = 3000;
  const arma::uword antennas = 16;
  for (arma::uword i = 0; i < trials; ++i) {
    const auto ch = generate_channel(antennas, 4, profile, rng);
    const arma::cx_mat Y = pilot_rx_orthogonal(ch, pilots, rho, rng);
    const auto est = estimate_per_client(Y, pilots, rho, profile);
    mse += std::pow(arma::norm(est.G_hat - ch.G, "fro"), 2);
  }
  mse /= static_cast<double>(trials * antennas * 4);
  return std::abs(mse - 1.0 / 41.0) < 0.05 / 41.0;
}

bool error_feedback_conservation() {
  Rng rng(13);
  const arma::cx_vec x = rng.cx_gaussian_vec(64);
  const arma::cx_vec r = rng.cx_gaussian_vec(64);
  const auto [sparse, r_new] = sparsify(x, r, 5);
  const arma::cx_vec lhs = densify(sparse) + r_new;
  const arma::cx_vec rhs = x + r;
  return arma::norm(lhs - rhs) == 0.0;
}

bool measurement_norm_bound() {
  Rng rng(17);
  const auto m = make_measurement_matrix(40, 256, rng);
  const double true_norm = arma::norm(arma::cx_mat(m.A), 2);
  return true_norm < 1.0 && std::abs(true_norm - 1.0 / 1.01) < 1e-3;
}

bool zero_forcing_exact() {
  Rng rng(19);
  const auto profile = FadingProfile::from_betas(arma::vec(4, arma::fill::ones));
  const auto ch = generate_channel(12, 4, profile, rng);
  std::vector<arma::cx_vec> x(4);
  for (auto& v : x) v = rng.cx_gaussian_vec(6);
  const auto alloc = power_full(x, 6.0);
  const arma::cx_mat Y = transmit(x, alloc, ch, 2.0, rng, false);
  PerClientEstimate est{ch.G, profile.betas};
  const auto combined = blue_combine(Y, est, alloc, 2.0);
  for (arma::uword k = 0; k < 4; ++k) {
    if (arma::norm(combined.x_hats[k] - x[k]) > 1e-8 * arma::norm(x[k])) {
      return false;
    }
  }
  return true;
}

bool recovery_small_instances() {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = make_measurement_matrix(16, 64, rng);
    arma::cx_vec truth(64, arma::fill::zeros);
    const arma::uvec support = rng.permutation(64).head(2);
    for (arma::uword i = 0; i < 2; ++i) truth[support[i]] = rng.cx_gaussian();
    const auto res = recover(RecoveryProblem(m.A, m.A * truth, 2));
    if (arma::norm(res.x - truth) > 1e-6 * arma::norm(truth)) return false;
  }
  return true;
}

bool iht_monotone() {
  Rng rng(29);
  const auto m = make_measurement_matrix(20, 100, rng);
  const arma::cx_vec y = rng.cx_gaussian_vec(20);
  const auto res = recover(RecoveryProblem(m.A, y, 4));
  for (std::size_t i = 1; i < res.objective_trace.size(); ++i) {
    if (res.objective_trace[i] > res.objective_trace[i - 1] + 1e-12) return false;
  }
  return true;
}

bool gradient_check_mlp() {
  Rng rng(31);
  const Mlp net(4);
  const arma::vec theta = net.init_params(rng);
  Dataset batch = make_synthetic_digits(6, 3, rng);
  arma::vec grad;
  net.loss_and_grad(theta, batch, &grad);
  const double h = 1e-4;
  for (int probe = 0; probe < 8; ++probe) {
    const arma::uword i = rng.uniform_index(theta.n_elem);
    arma::vec tp = theta;
    tp[i] += h;
    const double up = net.loss_and_grad(tp, batch, nullptr);
    tp[i] -= 2 * h;
    const double down = net.loss_and_grad(tp, batch, nullptr);
    const double fd = (up - down) / (2 * h);
    if (std::abs(fd - grad[i]) > 1e-4 * std::max(1.0, std::abs(fd))) return false;
  }
  return true;
}

bool power_constraints_hold() {
  Rng rng(37);
  std::vector<arma::cx_vec> x(3);
  for (auto& v : x) v = rng.cx_gaussian_vec(8);
  const auto profile = FadingProfile::from_betas(arma::vec{0.1, 1.0, 2.0});
  const arma::vec w(3, arma::fill::value(1.0 / 3.0));
  const double budget = 8.0;
  const auto full = power_full(x, budget);
  const auto sum = power_sum(x, w, profile, budget);
  for (arma::uword k = 0; k < 3; ++k) {
    const double energy = std::pow(arma::norm(x[k]), 2);
    if (full.etas[k] * energy > budget + 1e-9) return false;
    if (sum.alloc.etas[k] * energy > budget + 1e-9) return false;
  }
  return true;
}

bool partition_is_single_digit() {
  Rng rng(41);
  const Dataset train = make_synthetic_digits(400, 5, rng);
  const auto shards = partition_heterogeneous(train, 10);
  for (arma::uword k = 0; k < 10; ++k) {
    const arma::uword digit = k / 2;
    if (shards[k].size() != shards[0].size()) return false;
    if (arma::any(shards[k].labels != digit)) return false;
  }
  return true;
}

}  // namespace

bool run_validation_suite(std::ostream& out) {
  const std::vector<Check> checks = {
      {"channel per-antenna power matches beta", channel_second_moment},
      {"pilot set is orthonormal", pilot_orthonormality},
      {"MMSE estimate shrinks noiseless input", mmse_shrinkage},
      {"per-client estimation MSE matches closed form", estimation_mse_closed_form},
      {"sparsification conserves mass exactly", error_feedback_conservation},
      {"measurement matrix norm is pinned below one", measurement_norm_bound},
      {"zero-forcing separates clients exactly", zero_forcing_exact},
      {"sparse recovery is exact on small instances", recovery_small_instances},
      {"IHT objective is non-increasing", iht_monotone},
      {"MLP gradient matches finite differences", gradient_check_mlp},
      {"power constraints are never violated", power_constraints_hold},
      {"heterogeneous shards hold one digit each", partition_is_single_digit},
  };

  bool all_ok = true;
  for (const Check& check : checks) {
    bool ok = false;
    try {
      ok = check.fn();
    } catch (const std::exception& e) {
      out << "[FAIL] " << check.name << " (exception: " << e.what() << ")\n";
      all_ok = false;
      continue;
    }
    out << (ok ? "[ok]   " : "[FAIL] ") << check.name << "\n";
    all_ok = all_ok && ok;
  }
  return all_ok;
}

}  // namespace airfed
