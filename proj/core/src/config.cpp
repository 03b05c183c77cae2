#include "airfed/config.hpp"

#include <fstream>
#include <stdexcept>

namespace airfed {

std::string method_name(Method method) {
  switch (method) {
    case Method::kBlue: return "blue";
    case Method::kSumSame: return "sum-same";
    case Method::kSumDiff: return "sum-diff";
    case Method::kGenie: return "genie";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "blue") return Method::kBlue;
  if (name == "sum-same") return Method::kSumSame;
  if (name == "sum-diff") return Method::kSumDiff;
  if (name == "genie") return Method::kGenie;
  throw std::invalid_argument("unknown method: " + name);
}

Scale parse_scale(const std::string& name) {
  if (name == "desk") return Scale::kDesk;
  if (name == "paper") return Scale::kPaper;
  throw std::invalid_argument("unknown scale: " + name);
}

void ExperimentConfig::validate() const {
  if (antennas < 1) throw std::invalid_argument("antenna count must be positive");
  if (clients < 1) throw std::invalid_argument("client count must be positive");
  if (clients % 2 != 0) {
    throw std::invalid_argument("client count must be even (digit pairs)");
  }
  if (clients / 2 > 10) {
    throw std::invalid_argument("at most 20 clients (10 digits, paired)");
  }
  if (method == Method::kBlue && pilot_len != 0 && pilot_len < clients) {
    throw std::invalid_argument("orthogonal pilots need tau_p >= K");
  }
  if (rounds < 1) throw std::invalid_argument("round count must be positive");
  if (local_iters < 1) throw std::invalid_argument("local iterations must be positive");
  if (batch_size < 1) throw std::invalid_argument("batch size must be positive");
  if (dataset == DatasetKind::kMnist && mnist_dir.empty()) {
    throw std::invalid_argument("mnist dataset needs mnist_dir");
  }
  if (dataset == DatasetKind::kSynthetic && (train_size == 0 || test_size == 0)) {
    throw std::invalid_argument("synthetic dataset needs explicit sizes");
  }
  if (model == ModelKind::kMlp && mlp_hidden < 1) {
    throw std::invalid_argument("hidden width must be positive");
  }
}

ExperimentConfig desk_config() { return {}; }

ExperimentConfig paper_config() {
  ExperimentConfig cfg;
  cfg.antennas = 100;
  cfg.clients = 20;
  cfg.snr_db = 30.0;
  cfg.pilot_len = 20;
  cfg.sparsity = 32;
  cfg.samples = 320;
  cfg.rounds = 1000;
  cfg.batch_size = 500;
  cfg.model = ModelKind::kCnn;
  cfg.dataset = DatasetKind::kMnist;
  cfg.train_size = 0;
  cfg.test_size = 0;
  return cfg;
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("bad boolean for " + key + ": " + v);
}

}  // namespace

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);

  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  " is not key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto as_u64 = [&] { return std::stoull(value); };
    const auto as_f64 = [&] { return std::stod(value); };

    if (key == "method") cfg.method = parse_method(value);
    else if (key == "M") cfg.antennas = as_u64();
    else if (key == "K") cfg.clients = as_u64();
    else if (key == "rho_db") cfg.snr_db = as_f64();
    else if (key == "tau_p") cfg.pilot_len = as_u64();
    else if (key == "S") cfg.sparsity = as_u64();
    else if (key == "T") cfg.samples = as_u64();
    else if (key == "rounds") cfg.rounds = as_u64();
    else if (key == "local_iters") cfg.local_iters = as_u64();
    else if (key == "batch_size") cfg.batch_size = as_u64();
    else if (key == "local_lr") cfg.local_lr = as_f64();
    else if (key == "beta_db_min") cfg.beta_db_min = as_f64();
    else if (key == "beta_db_max") cfg.beta_db_max = as_f64();
    else if (key == "seed") cfg.seed = as_u64();
    else if (key == "model") {
      if (value == "mlp") cfg.model = ModelKind::kMlp;
      else if (value == "cnn") cfg.model = ModelKind::kCnn;
      else throw std::invalid_argument("unknown model: " + value);
    }
    else if (key == "hidden") cfg.mlp_hidden = as_u64();
    else if (key == "dataset") {
      if (value == "synthetic") cfg.dataset = DatasetKind::kSynthetic;
      else if (value == "mnist") cfg.dataset = DatasetKind::kMnist;
      else throw std::invalid_argument("unknown dataset: " + value);
    }
    else if (key == "train_size") cfg.train_size = as_u64();
    else if (key == "test_size") cfg.test_size = as_u64();
    else if (key == "mnist_dir") cfg.mnist_dir = value;
    else if (key == "output") cfg.output_path = value;
    else if (key == "channel_noise") cfg.channel_noise = parse_bool(value, key);
    else if (key == "data_noise") cfg.data_noise = parse_bool(value, key);
    else if (key == "perfect_csi") cfg.perfect_csi = parse_bool(value, key);
    else if (key == "unitary_measurement") {
      cfg.unitary_measurement = parse_bool(value, key);
    }
    else throw std::invalid_argument("unknown config key: " + key);
  }
  return cfg;
}

}  // namespace airfed
