#pragma once

#include <memory>
#include <string>
#include <vector>

#include <armadillo>

#include "airfed/rng.hpp"

namespace airfed {

/// Image classification data: N grayscale 28x28 images in [0,1] plus labels.
struct Dataset {
  arma::cube images;  // 28 x 28 x N
  arma::uvec labels;  // N, values in [0,9]

  arma::uword size() const { return labels.n_elem; }
  Dataset subset(const arma::uvec& indices) const;
};

/// Maps a flat parameter range onto one layer tensor.
struct LayerInfo {
  std::string name;
  arma::uword offset = 0;
  arma::uword count = 0;
  std::vector<arma::uword> shape;
};

/// A differentiable classifier over a flat 64-bit parameter vector.
class Network {
 public:
  virtual ~Network() = default;

  virtual arma::uword param_count() const = 0;
  virtual const std::vector<LayerInfo>& layout() const = 0;

  /// Glorot-uniform weights, zero biases; draw order follows the layout.
  arma::vec init_params(Rng& rng) const;

  /// Mean cross-entropy over the batch; exact gradient via backpropagation
  /// when `grad` is non-null.
  virtual double loss_and_grad(const arma::vec& theta, const Dataset& batch,
                               arma::vec* grad) const = 0;

  /// Softmax class probabilities, one row per sample.
  virtual arma::mat class_probabilities(const arma::vec& theta,
                                        const Dataset& data) const = 0;
};

/// Dense 784 -> hidden -> 10 network with ReLU and softmax.
class Mlp final : public Network {
 public:
  explicit Mlp(arma::uword hidden = 32);

  arma::uword param_count() const override { return params_; }
  const std::vector<LayerInfo>& layout() const override { return layout_; }
  double loss_and_grad(const arma::vec& theta, const Dataset& batch,
                       arma::vec* grad) const override;
  arma::mat class_probabilities(const arma::vec& theta,
                                const Dataset& data) const override;

  arma::uword hidden() const { return hidden_; }

 private:
  arma::uword hidden_;
  arma::uword params_;
  std::vector<LayerInfo> layout_;
};

/// conv 3x3x16 (valid, ReLU) -> maxpool 2x2 -> conv 3x3x32 (valid, ReLU)
/// -> maxpool 2x2 -> flatten (800) -> dense 10 -> softmax. 12810 parameters.
class Cnn final : public Network {
 public:
  Cnn();

  arma::uword param_count() const override { return params_; }
  const std::vector<LayerInfo>& layout() const override { return layout_; }
  double loss_and_grad(const arma::vec& theta, const Dataset& batch,
                       arma::vec* grad) const override;
  arma::mat class_probabilities(const arma::vec& theta,
                                const Dataset& data) const override;

 private:
  arma::uword params_;
  std::vector<LayerInfo> layout_;
};

struct LocalUpdate {
  arma::vec delta;  // theta after local training minus theta before
};

/// Runs `iters` SGD steps on batches sampled from the shard (without
/// replacement until exhausted, reshuffling; with replacement when the
/// batch exceeds the shard) and returns the parameter difference.
LocalUpdate local_sgd(const Network& net, const arma::vec& theta,
                      const Dataset& shard, arma::uword iters,
                      arma::uword batch_size, double lr, Rng& rng);

/// Global step size schedule 1 / (3 (1e-4 t + 1)).
double global_step_size(arma::uword round);

/// theta(t+1) = theta(t) + alpha_t * delta_hat.
arma::vec global_update(const arma::vec& theta, const arma::vec& delta_hat,
                        arma::uword round);

struct EvalResult {
  double accuracy = 0.0;
  double mean_loss = 0.0;
};

/// Top-1 accuracy (ties resolved to the lowest class index) and mean
/// cross-entropy over the test set.
EvalResult evaluate(const Network& net, const arma::vec& theta,
                    const Dataset& test);

}  // namespace airfed
