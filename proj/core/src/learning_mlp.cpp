#include <stdexcept>

#include "airfed/learning.hpp"

namespace airfed {

namespace {

constexpr arma::uword kInput = 28 * 28;
constexpr arma::uword kClasses = 10;

// Zero-copy view of the batch as a 784 x N matrix (cube slices are
// contiguous column-major 28x28 blocks).
arma::mat flat_view(const Dataset& batch) {
  return arma::mat(const_cast<double*>(batch.images.memptr()), kInput,
                   batch.size(), false, true);
}

arma::mat softmax_columns(arma::mat logits) {
  logits.each_row() -= arma::max(logits, 0);
  logits = arma::exp(logits);
  logits.each_row() /= arma::sum(logits, 0);
  return logits;
}

}  // namespace

Mlp::Mlp(arma::uword hidden) : hidden_(hidden) {
  if (hidden < 1) throw std::invalid_argument("hidden width must be at least 1");
  arma::uword off = 0;
  const auto add = [&](const std::string& name, std::vector<arma::uword> shape) {
    arma::uword count = 1;
    for (arma::uword s : shape) count *= s;
    layout_.push_back({name, off, count, std::move(shape)});
    off += count;
  };
  add("dense1_w", {hidden_, kInput});
  add("dense1_b", {hidden_});
  add("dense2_w", {kClasses, hidden_});
  add("dense2_b", {kClasses});
  params_ = off;
}

double Mlp::loss_and_grad(const arma::vec& theta, const Dataset& batch,
                          arma::vec* grad) const {
  if (theta.n_elem != params_) {
    throw std::invalid_argument("parameter vector has the wrong length");
  }
  const arma::uword n = batch.size();
  if (n == 0) throw std::invalid_argument("batch is empty");

  const arma::mat W1(const_cast<double*>(theta.memptr()) + layout_[0].offset,
                     hidden_, kInput, false, true);
  const arma::vec b1(const_cast<double*>(theta.memptr()) + layout_[1].offset,
                     hidden_, false, true);
  const arma::mat W2(const_cast<double*>(theta.memptr()) + layout_[2].offset,
                     kClasses, hidden_, false, true);
  const arma::vec b2(const_cast<double*>(theta.memptr()) + layout_[3].offset,
                     kClasses, false, true);

  const arma::mat X = flat_view(batch);
  arma::mat Z1 = W1 * X;
  Z1.each_col() += b1;
  const arma::mat A1 = arma::clamp(Z1, 0.0, arma::datum::inf);
  arma::mat Z2 = W2 * A1;
  Z2.each_col() += b2;
  const arma::mat P = softmax_columns(Z2);

  double loss = 0.0;
  for (arma::uword i = 0; i < n; ++i) {
    loss -= std::log(std::max(P(batch.labels[i], i), 1e-300));
  }
  loss /= static_cast<double>(n);

  if (grad != nullptr) {
    arma::mat dZ2 = P;
    for (arma::uword i = 0; i < n; ++i) dZ2(batch.labels[i], i) -= 1.0;
    dZ2 /= static_cast<double>(n);

    arma::mat dA1 = W2.t() * dZ2;
    dA1.elem(arma::find(Z1 <= 0.0)).zeros();

    grad->set_size(params_);
    arma::mat gW1(grad->memptr() + layout_[0].offset, hidden_, kInput, false, true);
    arma::vec gb1(grad->memptr() + layout_[1].offset, hidden_, false, true);
    arma::mat gW2(grad->memptr() + layout_[2].offset, kClasses, hidden_, false, true);
    arma::vec gb2(grad->memptr() + layout_[3].offset, kClasses, false, true);
    gW1 = dA1 * X.t();
    gb1 = arma::sum(dA1, 1);
    gW2 = dZ2 * A1.t();
    gb2 = arma::sum(dZ2, 1);
  }
  return loss;
}

arma::mat Mlp::class_probabilities(const arma::vec& theta,
                                   const Dataset& data) const {
  if (theta.n_elem != params_) {
    throw std::invalid_argument("parameter vector has the wrong length");
  }
  const arma::mat W1(const_cast<double*>(theta.memptr()) + layout_[0].offset,
                     hidden_, kInput, false, true);
  const arma::vec b1(const_cast<double*>(theta.memptr()) + layout_[1].offset,
                     hidden_, false, true);
  const arma::mat W2(const_cast<double*>(theta.memptr()) + layout_[2].offset,
                     kClasses, hidden_, false, true);
  const arma::vec b2(const_cast<double*>(theta.memptr()) + layout_[3].offset,
                     kClasses, false, true);

  arma::mat Z1 = W1 * flat_view(data);
  Z1.each_col() += b1;
  arma::mat Z2 = W2 * arma::clamp(Z1, 0.0, arma::datum::inf);
  Z2.each_col() += b2;
  return softmax_columns(Z2).t();
}

}  // namespace airfed
