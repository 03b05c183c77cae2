#include "airfed/runner.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "airfed/airlink.hpp"
#include "airfed/combining.hpp"
#include "airfed/estimation.hpp"
#include "airfed/recovery.hpp"

namespace airfed {

namespace {

constexpr arma::uword kServer = ~arma::uword(0);  // client slot for server-side draws

std::unique_ptr<Network> build_network(const ExperimentConfig& cfg) {
  if (cfg.model == ModelKind::kCnn) return std::make_unique<Cnn>();
  return std::make_unique<Mlp>(cfg.mlp_hidden);
}

Dataset filter_classes(const Dataset& data, arma::uword classes) {
  std::vector<arma::uword> keep;
  for (arma::uword n = 0; n < data.size(); ++n) {
    if (data.labels[n] < classes) keep.push_back(n);
  }
  return data.subset(arma::uvec(keep));
}

Dataset truncate(const Dataset& data, arma::uword limit) {
  if (limit == 0 || limit >= data.size()) return data;
  return data.subset(arma::regspace<arma::uvec>(0, limit - 1));
}

}  // namespace

std::string csv_header() {
  return "round,method,seed,test_accuracy,test_loss,wall_time_seconds";
}

std::string csv_row(const MetricsRow& row) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%llu,%s,%llu,%.12g,%.12g,%.3f",
                static_cast<unsigned long long>(row.round),
                row.method.c_str(),
                static_cast<unsigned long long>(row.seed), row.test_accuracy,
                row.test_loss, row.wall_time_seconds);
  return buf;
}

Runner::Runner(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  net_ = build_network(cfg_);
  d_ = net_->param_count();
  half_d_ = (d_ + 1) / 2;
  S_ = cfg_.sparsity > 0
           ? cfg_.sparsity
           : std::max<arma::uword>(1, static_cast<arma::uword>(0.005 * half_d_));
  T_ = cfg_.samples > 0 ? cfg_.samples : 10 * S_;
  tau_p_ = cfg_.pilot_len > 0 ? cfg_.pilot_len : cfg_.clients;

  const arma::uword K = cfg_.clients;
  profile_ = beta_profile_range(K, cfg_.beta_db_min, cfg_.beta_db_max);
  weights_ = arma::vec(K, arma::fill::value(1.0 / static_cast<double>(K)));
  pilots_ = make_orthogonal_pilots(tau_p_, K);

  const arma::uword classes = K / 2;
  Dataset train;
  if (cfg_.dataset == DatasetKind::kSynthetic) {
    Rng train_rng(derive_seed(cfg_.seed, 0, 0, StreamRole::kDataset));
    Rng test_rng(derive_seed(cfg_.seed, 0, 1, StreamRole::kDataset));
    train = make_synthetic_digits(cfg_.train_size, classes, train_rng);
    test_ = make_synthetic_digits(cfg_.test_size, classes, test_rng);
  } else {
    MnistData mnist = load_mnist(cfg_.mnist_dir);
    train = truncate(mnist.train, cfg_.train_size);
    // Score only the digits the clients actually hold.
    test_ = truncate(filter_classes(mnist.test, classes), cfg_.test_size);
  }
  shards_ = partition_heterogeneous(train, K);

  Rng init_rng(derive_seed(cfg_.seed, 0, 0, StreamRole::kParamInit));
  theta_ = net_->init_params(init_rng);
  residuals_.assign(K, arma::cx_vec(half_d_, arma::fill::zeros));
}

std::vector<arma::vec> Runner::local_deltas(arma::uword t) {
  std::vector<arma::vec> deltas(cfg_.clients);
  for (arma::uword k = 0; k < cfg_.clients; ++k) {
    Rng rng(derive_seed(cfg_.seed, t, k, StreamRole::kLocalBatch));
    deltas[k] = local_sgd(*net_, theta_, shards_[k], cfg_.local_iters,
                          cfg_.batch_size, cfg_.local_lr, rng)
                    .delta;
  }
  return deltas;
}

MeasurementMatrix Runner::round_matrix(arma::uword t, arma::uword client) {
  Rng rng(derive_seed(cfg_.seed, t, client, StreamRole::kMeasurementMatrix));
  if (!cfg_.unitary_measurement) {
    return make_measurement_matrix(T_, half_d_, rng);
  }
  // Test mode: rows of a random unitary, exactly conditioned.
  arma::cx_mat Q, R;
  arma::qr(Q, R, rng.cx_gaussian_mat(half_d_, half_d_));
  MeasurementMatrix m;
  m.A = Q.head_rows(T_) / 1.01;
  m.spectral_norm = 1.0 / 1.01;
  return m;
}

MetricsRow Runner::evaluate_round(arma::uword t, double elapsed) const {
  const EvalResult eval = evaluate(*net_, theta_, test_);
  MetricsRow row;
  row.round = t;
  row.method = method_name(cfg_.method);
  row.seed = cfg_.seed;
  row.test_accuracy = eval.accuracy;
  row.test_loss = eval.mean_loss;
  row.wall_time_seconds = elapsed;
  return row;
}

MetricsRow Runner::run_round(arma::uword t) {
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (cfg_.method) {
      case Method::kBlue: round_blue(t); break;
      case Method::kSumSame: round_sum(t, true); break;
      case Method::kSumDiff: round_sum(t, false); break;
      case Method::kGenie: round_genie(t); break;
    }
  } catch (const CombiningError& e) {
    ++failures_;
    std::cerr << "round " << t << " aborted: " << e.what() << "\n";
  } catch (const PowerControlError& e) {
    ++failures_;
    std::cerr << "round " << t << " skipped: " << e.what() << "\n";
  }
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  return evaluate_round(t, elapsed.count());
}

void Runner::round_genie(arma::uword t) {
  const std::vector<arma::vec> deltas = local_deltas(t);
  theta_ = global_update(theta_, genie_aggregate(deltas, weights_), t);
}

void Runner::round_blue(arma::uword t) {
  const arma::uword K = cfg_.clients;
  const double rho = cfg_.rho_linear();
  const std::vector<arma::vec> deltas = local_deltas(t);

  // Client side: everything below is per-client only; no shared matrix,
  // pattern, or power constant enters this loop.
  std::vector<SparseUpdate> sparse(K);
  std::vector<arma::cx_vec> new_residuals(K);
  std::vector<MeasurementMatrix> matrices(K);
  std::vector<arma::cx_vec> encoded(K);
  for (arma::uword k = 0; k < K; ++k) {
    const arma::cx_vec packed = split(deltas[k]);
    std::tie(sparse[k], new_residuals[k]) = sparsify(packed, residuals_[k], S_);
    matrices[k] = round_matrix(t, k);
    encoded[k] = encode(sparse[k], matrices[k]);
  }
  const PowerAllocation alloc =
      power_full(encoded, static_cast<double>(T_));

  Rng channel_rng(derive_seed(cfg_.seed, t, kServer, StreamRole::kChannel));
  const ChannelRealization channel =
      generate_channel(cfg_.antennas, K, profile_, channel_rng);

  PerClientEstimate est;
  if (cfg_.perfect_csi) {
    est.G_hat = channel.G;
    est.gammas = profile_.betas;
  } else {
    Rng pilot_rng(derive_seed(cfg_.seed, t, kServer, StreamRole::kPilotNoise));
    const arma::cx_mat Y_p = pilot_rx_orthogonal(channel, pilots_, rho,
                                                 pilot_rng, cfg_.channel_noise);
    est = estimate_per_client(Y_p, pilots_, rho, profile_);
  }

  Rng data_rng(derive_seed(cfg_.seed, t, kServer, StreamRole::kDataNoise));
  const arma::cx_mat Y =
      transmit(encoded, alloc, channel, rho, data_rng, cfg_.data_noise);

  const CombinedPerClient combined = blue_combine(Y, est, alloc, rho);

  arma::vec delta_hat(d_, arma::fill::zeros);
  for (arma::uword k = 0; k < K; ++k) {
    if (combined.silent[k]) continue;
    const RecoveryResult rec =
        recover(RecoveryProblem(matrices[k].A, combined.x_hats[k], S_));
    delta_hat += weights_[k] * unsplit(rec.x, d_);
  }

  residuals_ = std::move(new_residuals);  // the round succeeded; commit
  theta_ = global_update(theta_, delta_hat, t);
}

void Runner::round_sum(arma::uword t, bool same_pattern) {
  const arma::uword K = cfg_.clients;
  const double rho = cfg_.rho_linear();
  const std::vector<arma::vec> deltas = local_deltas(t);

  const MeasurementMatrix matrix = round_matrix(t, kServer);

  std::vector<arma::cx_vec> packed(K);
  for (arma::uword k = 0; k < K; ++k) packed[k] = split(deltas[k]);

  arma::uvec pattern;
  if (same_pattern) {
    Rng pick_rng(derive_seed(cfg_.seed, t, kServer, StreamRole::kPatternChoice));
    const arma::uword chooser = pick_rng.uniform_index(K);
    pattern = choose_pattern_from_client(packed[chooser] + residuals_[chooser], S_);
  }

  std::vector<SparseUpdate> sparse(K);
  std::vector<arma::cx_vec> new_residuals(K);
  std::vector<arma::cx_vec> encoded(K);
  for (arma::uword k = 0; k < K; ++k) {
    if (same_pattern) {
      std::tie(sparse[k], new_residuals[k]) =
          sparsify_on_pattern(packed[k], residuals_[k], pattern);
    } else {
      std::tie(sparse[k], new_residuals[k]) =
          sparsify(packed[k], residuals_[k], S_);
    }
    encoded[k] = encode(sparse[k], matrix);
  }

  const SumPower power =
      power_sum(encoded, weights_, profile_, static_cast<double>(T_));

  Rng channel_rng(derive_seed(cfg_.seed, t, kServer, StreamRole::kChannel));
  const ChannelRealization channel =
      generate_channel(cfg_.antennas, K, profile_, channel_rng);

  SumEstimate est;
  if (cfg_.perfect_csi) {
    est.h_hat_sum.zeros(cfg_.antennas);
    for (arma::uword k = 0; k < K; ++k) {
      est.h_hat_sum += channel.G.col(k) / std::sqrt(profile_.betas[k]);
    }
    est.gamma_bar = static_cast<double>(K);
  } else {
    Rng pilot_rng(derive_seed(cfg_.seed, t, kServer, StreamRole::kPilotNoise));
    const arma::cx_mat Y_p =
        pilot_rx_sum(channel, pilots_.Phi.col(0), rho, profile_, pilot_rng,
                     cfg_.channel_noise);
    est = estimate_sum(Y_p, pilots_.Phi.col(0), rho, profile_, K);
  }

  Rng data_rng(derive_seed(cfg_.seed, t, kServer, StreamRole::kDataNoise));
  const arma::cx_mat Y =
      transmit(encoded, power.alloc, channel, rho, data_rng, cfg_.data_noise);

  const CombinedSum combined =
      sum_combine(Y, est, power.eta, rho, cfg_.antennas, K);

  const arma::uword budget = same_pattern ? S_ : K * S_;
  const RecoveryResult rec =
      recover(RecoveryProblem(matrix.A, combined.x_hat, budget));
  // The weights are already baked into the power scaling, so the recovered
  // vector estimates sum_k w_k x_k^sparse directly.
  const arma::vec delta_hat = unsplit(rec.x, d_);

  residuals_ = std::move(new_residuals);
  theta_ = global_update(theta_, delta_hat, t);
}

std::vector<MetricsRow> Runner::run_all() {
  std::vector<MetricsRow> rows;
  rows.reserve(cfg_.rounds);
  for (arma::uword t = 0; t < cfg_.rounds; ++t) {
    rows.push_back(run_round(t));
  }
  return rows;
}

void write_metrics_csv(const std::vector<MetricsRow>& rows,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write metrics file: " + path);
  out << csv_header() << "\n";
  for (const MetricsRow& row : rows) out << csv_row(row) << "\n";
  if (!out.good()) {
    throw std::runtime_error("failed while writing metrics file: " + path);
  }
}

std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg) {
  Runner runner(cfg);
  std::vector<MetricsRow> rows = runner.run_all();
  write_metrics_csv(rows, cfg.output_path);
  return rows;
}

}  // namespace airfed
