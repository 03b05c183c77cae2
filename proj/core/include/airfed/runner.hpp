#pragma once

#include <memory>
#include <string>
#include <vector>

#include "airfed/channel.hpp"
#include "airfed/coding.hpp"
#include "airfed/config.hpp"
#include "airfed/data.hpp"
#include "airfed/learning.hpp"

namespace airfed {

/// One evaluated communication round.
struct MetricsRow {
  arma::uword round = 0;
  std::string method;
  std::uint64_t seed = 0;
  double test_accuracy = 0.0;
  double test_loss = 0.0;
  double wall_time_seconds = 0.0;
};

std::string csv_header();
std::string csv_row(const MetricsRow& row);

/// Drives one experiment: owns the model, shards, residual state, and the
/// per-round pipelines of the four aggregation methods.
class Runner {
 public:
  explicit Runner(ExperimentConfig cfg);

  /// Executes round t (0-based). A combining or power-control failure
  /// leaves the model and residuals unchanged and is counted, not thrown.
  MetricsRow run_round(arma::uword t);

  std::vector<MetricsRow> run_all();

  const ExperimentConfig& config() const { return cfg_; }
  const Network& network() const { return *net_; }
  const arma::vec& theta() const { return theta_; }
  const std::vector<arma::cx_vec>& residuals() const { return residuals_; }
  arma::uword round_failures() const { return failures_; }

  arma::uword model_dim() const { return d_; }
  arma::uword sparsity() const { return S_; }
  arma::uword sample_count() const { return T_; }

 private:
  std::vector<arma::vec> local_deltas(arma::uword t);
  MeasurementMatrix round_matrix(arma::uword t, arma::uword client);
  MetricsRow evaluate_round(arma::uword t, double elapsed) const;

  void round_blue(arma::uword t);
  void round_sum(arma::uword t, bool same_pattern);
  void round_genie(arma::uword t);

  ExperimentConfig cfg_;
  std::unique_ptr<Network> net_;
  arma::uword d_ = 0;
  arma::uword half_d_ = 0;
  arma::uword S_ = 0;
  arma::uword T_ = 0;
  arma::uword tau_p_ = 0;
  FadingProfile profile_;
  arma::vec weights_;
  PilotSet pilots_;
  std::vector<Dataset> shards_;
  Dataset test_;
  arma::vec theta_;
  std::vector<arma::cx_vec> residuals_;
  arma::uword failures_ = 0;
};

/// Writes header plus one line per row; throws with path context on failure.
void write_metrics_csv(const std::vector<MetricsRow>& rows,
                       const std::string& path);

/// Runs the configured number of rounds and writes the metrics CSV.
std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg);

}  // namespace airfed
