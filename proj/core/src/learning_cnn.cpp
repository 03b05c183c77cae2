#include <stdexcept>

#include "airfed/learning.hpp"

namespace airfed {

namespace {

constexpr arma::uword kImg = 28;
constexpr arma::uword kKernel = 3;
constexpr arma::uword kC1 = 16;   // conv1 output channels
constexpr arma::uword kC2 = 32;   // conv2 output channels
constexpr arma::uword kConv1Out = kImg - kKernel + 1;        // 26
constexpr arma::uword kPool1Out = kConv1Out / 2;             // 13
constexpr arma::uword kConv2Out = kPool1Out - kKernel + 1;   // 11
constexpr arma::uword kPool2Out = kConv2Out / 2;             // 5 (odd edge dropped)
constexpr arma::uword kFlat = kPool2Out * kPool2Out * kC2;   // 800
constexpr arma::uword kClasses = 10;

// Kernel weights are flattened as r + 3c + 9ci + 9*in_channels*co.
inline double w1_at(const double* w, arma::uword r, arma::uword c,
                    arma::uword co) {
  return w[r + kKernel * c + kKernel * kKernel * co];
}
inline double w2_at(const double* w, arma::uword r, arma::uword c,
                    arma::uword ci, arma::uword co) {
  return w[r + kKernel * c + kKernel * kKernel * (ci + kC1 * co)];
}
inline arma::uword w1_idx(arma::uword r, arma::uword c, arma::uword co) {
  return r + kKernel * c + kKernel * kKernel * co;
}
inline arma::uword w2_idx(arma::uword r, arma::uword c, arma::uword ci,
                          arma::uword co) {
  return r + kKernel * c + kKernel * kKernel * (ci + kC1 * co);
}

// 2x2 max pooling; `argmax` records, per output cell, the flat in-slice
// index of the chosen input. Ties go to the first element in column-major
// scan order.
void max_pool(const arma::cube& in, arma::cube& out, arma::ucube& argmax) {
  const arma::uword rows = out.n_rows;
  const arma::uword cols = out.n_cols;
  for (arma::uword ch = 0; ch < in.n_slices; ++ch) {
    for (arma::uword j = 0; j < cols; ++j) {
      for (arma::uword i = 0; i < rows; ++i) {
        double best = -arma::datum::inf;
        arma::uword best_idx = 0;
        for (arma::uword dj = 0; dj < 2; ++dj) {
          for (arma::uword di = 0; di < 2; ++di) {
            const arma::uword r = 2 * i + di;
            const arma::uword c = 2 * j + dj;
            const double v = in(r, c, ch);
            if (v > best) {
              best = v;
              best_idx = r + in.n_rows * c;
            }
          }
        }
        out(i, j, ch) = best;
        argmax(i, j, ch) = best_idx;
      }
    }
  }
}

struct ForwardPass {
  arma::cube z1{kConv1Out, kConv1Out, kC1};
  arma::cube p1{kPool1Out, kPool1Out, kC1};
  arma::ucube m1{kPool1Out, kPool1Out, kC1};
  arma::cube z2{kConv2Out, kConv2Out, kC2};
  arma::cube p2{kPool2Out, kPool2Out, kC2};
  arma::ucube m2{kPool2Out, kPool2Out, kC2};
  arma::vec flat{kFlat};
  arma::vec probs{kClasses};
};

struct ParamView {
  const double* w1;
  const double* b1;
  const double* w2;
  const double* b2;
  arma::mat Wd;
  arma::vec bd;
};

ParamView view_params(const arma::vec& theta,
                      const std::vector<LayerInfo>& layout) {
  ParamView v;
  const double* base = theta.memptr();
  v.w1 = base + layout[0].offset;
  v.b1 = base + layout[1].offset;
  v.w2 = base + layout[2].offset;
  v.b2 = base + layout[3].offset;
  v.Wd = arma::mat(const_cast<double*>(base) + layout[4].offset, kClasses,
                   kFlat, false, true);
  v.bd = arma::vec(const_cast<double*>(base) + layout[5].offset, kClasses,
                   false, true);
  return v;
}

void forward(const ParamView& p, const arma::mat& image, ForwardPass& f) {
  for (arma::uword co = 0; co < kC1; ++co) {
    for (arma::uword j = 0; j < kConv1Out; ++j) {
      for (arma::uword i = 0; i < kConv1Out; ++i) {
        double acc = p.b1[co];
        for (arma::uword c = 0; c < kKernel; ++c) {
          for (arma::uword r = 0; r < kKernel; ++r) {
            acc += w1_at(p.w1, r, c, co) * image(i + r, j + c);
          }
        }
        f.z1(i, j, co) = acc;
      }
    }
  }
  arma::cube a1 = arma::clamp(f.z1, 0.0, arma::datum::inf);
  max_pool(a1, f.p1, f.m1);

  for (arma::uword co = 0; co < kC2; ++co) {
    for (arma::uword j = 0; j < kConv2Out; ++j) {
      for (arma::uword i = 0; i < kConv2Out; ++i) {
        double acc = p.b2[co];
        for (arma::uword ci = 0; ci < kC1; ++ci) {
          for (arma::uword c = 0; c < kKernel; ++c) {
            for (arma::uword r = 0; r < kKernel; ++r) {
              acc += w2_at(p.w2, r, c, ci, co) * f.p1(i + r, j + c, ci);
            }
          }
        }
        f.z2(i, j, co) = acc;
      }
    }
  }
  arma::cube a2 = arma::clamp(f.z2, 0.0, arma::datum::inf);
  max_pool(a2, f.p2, f.m2);

  f.flat = arma::vectorise(f.p2);
  arma::vec logits = p.Wd * f.flat + p.bd;
  logits -= logits.max();
  f.probs = arma::exp(logits);
  f.probs /= arma::accu(f.probs);
}

}  // namespace

Cnn::Cnn() {
  arma::uword off = 0;
  const auto add = [&](const std::string& name, std::vector<arma::uword> shape) {
    arma::uword count = 1;
    for (arma::uword s : shape) count *= s;
    layout_.push_back({name, off, count, std::move(shape)});
    off += count;
  };
  add("conv1_w", {kKernel, kKernel, 1, kC1});
  add("conv1_b", {kC1});
  add("conv2_w", {kKernel, kKernel, kC1, kC2});
  add("conv2_b", {kC2});
  add("dense_w", {kClasses, kFlat});
  add("dense_b", {kClasses});
  params_ = off;  // 12810
}

double Cnn::loss_and_grad(const arma::vec& theta, const Dataset& batch,
                          arma::vec* grad) const {
  if (theta.n_elem != params_) {
    throw std::invalid_argument("parameter vector has the wrong length");
  }
  const arma::uword n = batch.size();
  if (n == 0) throw std::invalid_argument("batch is empty");

  const ParamView p = view_params(theta, layout_);
  double loss = 0.0;

  double* g = nullptr;
  if (grad != nullptr) {
    grad->zeros(params_);
    g = grad->memptr();
  }
  double* gw1 = g ? g + layout_[0].offset : nullptr;
  double* gb1 = g ? g + layout_[1].offset : nullptr;
  double* gw2 = g ? g + layout_[2].offset : nullptr;
  double* gb2 = g ? g + layout_[3].offset : nullptr;
  arma::mat gWd;
  arma::vec gbd;
  if (g != nullptr) {
    gWd = arma::mat(g + layout_[4].offset, kClasses, kFlat, false, true);
    gbd = arma::vec(g + layout_[5].offset, kClasses, false, true);
  }

  ForwardPass f;
  for (arma::uword s = 0; s < n; ++s) {
    const arma::mat image(
        const_cast<double*>(batch.images.slice_memptr(s)), kImg, kImg, false,
        true);
    forward(p, image, f);
    loss -= std::log(std::max(f.probs[batch.labels[s]], 1e-300));
    if (g == nullptr) continue;

    arma::vec dlogits = f.probs;
    dlogits[batch.labels[s]] -= 1.0;

    gWd += dlogits * f.flat.t();
    gbd += dlogits;

    arma::vec dflat = p.Wd.t() * dlogits;
    const arma::cube dp2(dflat.memptr(), kPool2Out, kPool2Out, kC2);

    // Un-pool and apply the ReLU mask in one step.
    arma::cube dz2(kConv2Out, kConv2Out, kC2, arma::fill::zeros);
    for (arma::uword ch = 0; ch < kC2; ++ch) {
      for (arma::uword j = 0; j < kPool2Out; ++j) {
        for (arma::uword i = 0; i < kPool2Out; ++i) {
          const arma::uword idx = f.m2(i, j, ch);
          const arma::uword r = idx % kConv2Out;
          const arma::uword c = idx / kConv2Out;
          if (f.z2(r, c, ch) > 0.0) dz2(r, c, ch) = dp2(i, j, ch);
        }
      }
    }

    for (arma::uword co = 0; co < kC2; ++co) {
      double bias_acc = 0.0;
      for (arma::uword j = 0; j < kConv2Out; ++j) {
        for (arma::uword i = 0; i < kConv2Out; ++i) {
          bias_acc += dz2(i, j, co);
        }
      }
      gb2[co] += bias_acc;
      for (arma::uword ci = 0; ci < kC1; ++ci) {
        for (arma::uword c = 0; c < kKernel; ++c) {
          for (arma::uword r = 0; r < kKernel; ++r) {
            double acc = 0.0;
            for (arma::uword j = 0; j < kConv2Out; ++j) {
              for (arma::uword i = 0; i < kConv2Out; ++i) {
                acc += dz2(i, j, co) * f.p1(i + r, j + c, ci);
              }
            }
            gw2[w2_idx(r, c, ci, co)] += acc;
          }
        }
      }
    }

    // Gradient through conv2 into pool1 output (full correlation).
    arma::cube dp1(kPool1Out, kPool1Out, kC1, arma::fill::zeros);
    for (arma::uword co = 0; co < kC2; ++co) {
      for (arma::uword j = 0; j < kConv2Out; ++j) {
        for (arma::uword i = 0; i < kConv2Out; ++i) {
          const double v = dz2(i, j, co);
          if (v == 0.0) continue;
          for (arma::uword ci = 0; ci < kC1; ++ci) {
            for (arma::uword c = 0; c < kKernel; ++c) {
              for (arma::uword r = 0; r < kKernel; ++r) {
                dp1(i + r, j + c, ci) += v * w2_at(p.w2, r, c, ci, co);
              }
            }
          }
        }
      }
    }

    arma::cube dz1(kConv1Out, kConv1Out, kC1, arma::fill::zeros);
    for (arma::uword ch = 0; ch < kC1; ++ch) {
      for (arma::uword j = 0; j < kPool1Out; ++j) {
        for (arma::uword i = 0; i < kPool1Out; ++i) {
          const arma::uword idx = f.m1(i, j, ch);
          const arma::uword r = idx % kConv1Out;
          const arma::uword c = idx / kConv1Out;
          if (f.z1(r, c, ch) > 0.0) dz1(r, c, ch) = dp1(i, j, ch);
        }
      }
    }

    for (arma::uword co = 0; co < kC1; ++co) {
      double bias_acc = 0.0;
      for (arma::uword j = 0; j < kConv1Out; ++j) {
        for (arma::uword i = 0; i < kConv1Out; ++i) {
          bias_acc += dz1(i, j, co);
        }
      }
      gb1[co] += bias_acc;
      for (arma::uword c = 0; c < kKernel; ++c) {
        for (arma::uword r = 0; r < kKernel; ++r) {
          double acc = 0.0;
          for (arma::uword j = 0; j < kConv1Out; ++j) {
            for (arma::uword i = 0; i < kConv1Out; ++i) {
              acc += dz1(i, j, co) * image(i + r, j + c);
            }
          }
          gw1[w1_idx(r, c, co)] += acc;
        }
      }
    }
  }

  const double scale = 1.0 / static_cast<double>(n);
  loss *= scale;
  if (grad != nullptr) *grad *= scale;
  return loss;
}

arma::mat Cnn::class_probabilities(const arma::vec& theta,
                                   const Dataset& data) const {
  if (theta.n_elem != params_) {
    throw std::invalid_argument("parameter vector has the wrong length");
  }
  const ParamView p = view_params(theta, layout_);
  arma::mat probs(data.size(), kClasses);
  ForwardPass f;
  for (arma::uword s = 0; s < data.size(); ++s) {
    const arma::mat image(
        const_cast<double*>(data.images.slice_memptr(s)), kImg, kImg, false,
        true);
    forward(p, image, f);
    probs.row(s) = f.probs.t();
  }
  return probs;
}

}  // namespace airfed
