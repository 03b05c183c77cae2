#pragma once

#include <cstdint>
#include <string>

#include <armadillo>

namespace airfed {

enum class Method { kBlue, kSumSame, kSumDiff, kGenie };
enum class Scale { kDesk, kPaper };
enum class DatasetKind { kSynthetic, kMnist };
enum class ModelKind { kMlp, kCnn };

std::string method_name(Method method);
Method parse_method(const std::string& name);
Scale parse_scale(const std::string& name);

/// Everything a run needs. Zero means "derive from the rest" for the
/// entries documented as such.
struct ExperimentConfig {
  Method method = Method::kBlue;
  arma::uword antennas = 32;   // M
  arma::uword clients = 10;    // K (even; digit pairs)
  double snr_db = 30.0;        // rho
  arma::uword pilot_len = 0;   // tau_p; 0 -> K
  arma::uword sparsity = 0;    // S; 0 -> floor(0.005 * d/2)
  arma::uword samples = 0;     // T; 0 -> 10 S
  arma::uword rounds = 150;
  arma::uword local_iters = 3;
  arma::uword batch_size = 200;
  double local_lr = 0.01;
  double beta_db_min = -40.0;
  double beta_db_max = 0.0;
  std::uint64_t seed = 1;

  ModelKind model = ModelKind::kMlp;
  arma::uword mlp_hidden = 8;  // desk-scale width; build_mlp default is 32
  DatasetKind dataset = DatasetKind::kSynthetic;
  arma::uword train_size = 2000;  // 0 -> all available (MNIST)
  arma::uword test_size = 1000;   // 0 -> all available (MNIST)
  std::string mnist_dir;
  std::string output_path = "metrics.csv";

  // Test-mode switches (config file only, not CLI).
  bool channel_noise = true;
  bool data_noise = true;
  bool perfect_csi = false;
  bool unitary_measurement = false;

  double rho_linear() const { return std::pow(10.0, snr_db / 10.0); }
  void validate() const;  // throws std::invalid_argument
};

/// Preset bundles. Desk runs in minutes on one CPU; paper mirrors the
/// reference configuration (M=100, K=20, CNN, full MNIST).
ExperimentConfig desk_config();
ExperimentConfig paper_config();

/// Flat key=value text, '#' comments. Unknown keys are rejected.
ExperimentConfig load_config_file(const std::string& path);

}  // namespace airfed
