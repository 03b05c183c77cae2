#include "airfed/learning.hpp"

#include <stdexcept>

namespace airfed {

Dataset Dataset::subset(const arma::uvec& indices) const {
  Dataset out;
  out.images.set_size(images.n_rows, images.n_cols, indices.n_elem);
  out.labels.set_size(indices.n_elem);
  for (arma::uword i = 0; i < indices.n_elem; ++i) {
    out.images.slice(i) = images.slice(indices[i]);
    out.labels[i] = labels[indices[i]];
  }
  return out;
}

arma::vec Network::init_params(Rng& rng) const {
  arma::vec theta(param_count(), arma::fill::zeros);
  for (const LayerInfo& layer : layout()) {
    if (layer.name.ends_with("_b")) continue;  // biases stay zero
    // Glorot uniform range from the layer fan.
    double fan_in = 1.0;
    double fan_out = 1.0;
    if (layer.shape.size() == 2) {
      fan_out = static_cast<double>(layer.shape[0]);
      fan_in = static_cast<double>(layer.shape[1]);
    } else if (layer.shape.size() == 4) {
      const double window =
          static_cast<double>(layer.shape[0] * layer.shape[1]);
      fan_in = window * static_cast<double>(layer.shape[2]);
      fan_out = window * static_cast<double>(layer.shape[3]);
    }
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (arma::uword i = 0; i < layer.count; ++i) {
      theta[layer.offset + i] = limit * (2.0 * rng.uniform() - 1.0);
    }
  }
  return theta;
}

LocalUpdate local_sgd(const Network& net, const arma::vec& theta0,
                      const Dataset& shard, arma::uword iters,
                      arma::uword batch_size, double lr, Rng& rng) {
  const arma::uword n = shard.size();
  if (n == 0) throw std::invalid_argument("local training shard is empty");
  if (batch_size == 0) throw std::invalid_argument("batch size must be positive");

  const bool with_replacement = batch_size > n;
  arma::vec theta = theta0;
  arma::uvec order;
  arma::uword cursor = 0;
  arma::vec grad;

  for (arma::uword it = 0; it < iters; ++it) {
    arma::uvec idx(with_replacement ? batch_size : std::min(batch_size, n));
    if (with_replacement) {
      for (arma::uword i = 0; i < idx.n_elem; ++i) {
        idx[i] = rng.uniform_index(n);
      }
    } else {
      if (order.n_elem == 0 || cursor + idx.n_elem > n) {
        order = rng.permutation(n);
        cursor = 0;
      }
      idx = order.subvec(cursor, cursor + idx.n_elem - 1);
      cursor += idx.n_elem;
    }
    net.loss_and_grad(theta, shard.subset(idx), &grad);
    theta -= lr * grad;
  }
  return {theta - theta0};
}

double global_step_size(arma::uword round) {
  return 1.0 / (3.0 * (1e-4 * static_cast<double>(round) + 1.0));
}

arma::vec global_update(const arma::vec& theta, const arma::vec& delta_hat,
                        arma::uword round) {
  if (theta.n_elem != delta_hat.n_elem) {
    throw std::invalid_argument("aggregated update length does not match model");
  }
  return theta + global_step_size(round) * delta_hat;
}

EvalResult evaluate(const Network& net, const arma::vec& theta,
                    const Dataset& test) {
  const arma::uword n = test.size();
  if (n == 0) throw std::invalid_argument("test set is empty");
  const arma::mat probs = net.class_probabilities(theta, test);

  arma::uword correct = 0;
  double loss = 0.0;
  for (arma::uword i = 0; i < n; ++i) {
    arma::uword best = 0;
    for (arma::uword c = 1; c < probs.n_cols; ++c) {
      if (probs(i, c) > probs(i, best)) best = c;  // ties keep the lower class
    }
    if (best == test.labels[i]) ++correct;
    loss -= std::log(std::max(probs(i, test.labels[i]), 1e-300));
  }
  return {static_cast<double>(correct) / static_cast<double>(n),
          loss / static_cast<double>(n)};
}

}  // namespace airfed
