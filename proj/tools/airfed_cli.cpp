// Command-line front end: run one experiment, sweep seeds, or run the
// built-in module validation suite.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "airfed/runner.hpp"
#include "airfed/validate.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::string method;
  std::string scale = "desk";
  std::uint64_t seed = 0;
  std::uint64_t rounds = 0;
  double snr_db = 0.0;
  std::uint64_t pilot_len = 0;
  std::string mnist_dir;
  std::string output;
};

void add_run_flags(CLI::App* cmd, CliOverrides* o) {
  cmd->add_option("--config", o->config_path, "Key=value config file");
  cmd->add_option("--method", o->method,
                  "Aggregation method: blue|sum-same|sum-diff|genie");
  cmd->add_option("--seed", o->seed, "Master seed");
  cmd->add_option("--rounds", o->rounds, "Communication rounds");
  cmd->add_option("--snr-db", o->snr_db, "Uplink SNR in dB");
  cmd->add_option("--pilot-len", o->pilot_len, "Pilot length tau_p");
  cmd->add_option("--scale", o->scale, "Preset bundle: desk|paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  cmd->add_option("--mnist-dir", o->mnist_dir, "Directory with MNIST IDX files");
  cmd->add_option("--output", o->output, "Metrics CSV path");
}

airfed::ExperimentConfig resolve_config(const CLI::App* cmd,
                                        const CliOverrides& o) {
  airfed::ExperimentConfig cfg = airfed::parse_scale(o.scale) ==
                                         airfed::Scale::kPaper
                                     ? airfed::paper_config()
                                     : airfed::desk_config();
  if (!o.config_path.empty()) cfg = airfed::load_config_file(o.config_path);
  // Explicit flags override config-file values.
  if (cmd->count("--method")) cfg.method = airfed::parse_method(o.method);
  if (cmd->count("--seed")) cfg.seed = o.seed;
  if (cmd->count("--rounds")) cfg.rounds = o.rounds;
  if (cmd->count("--snr-db")) cfg.snr_db = o.snr_db;
  if (cmd->count("--pilot-len")) cfg.pilot_len = o.pilot_len;
  if (cmd->count("--mnist-dir")) {
    cfg.mnist_dir = o.mnist_dir;
    cfg.dataset = airfed::DatasetKind::kMnist;
  }
  if (cmd->count("--output")) cfg.output_path = o.output;
  return cfg;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item =
        text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (!item.empty()) seeds.push_back(std::stoull(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (seeds.empty()) throw CLI::ValidationError("--seeds", "empty seed list");
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated edge learning over a MIMO uplink"};
  app.require_subcommand(1);

  CliOverrides run_opts;
  CLI::App* run = app.add_subcommand("run", "Run one experiment");
  add_run_flags(run, &run_opts);

  CLI::App* validate =
      app.add_subcommand("validate", "Run the module property suites");

  CliOverrides sweep_opts;
  std::string seeds_text;
  CLI::App* sweep = app.add_subcommand("sweep", "Repeat run over a seed list");
  add_run_flags(sweep, &sweep_opts);
  sweep->add_option("--seeds", seeds_text, "Comma-separated seed list")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const airfed::ExperimentConfig cfg = resolve_config(run, run_opts);
      const auto rows = airfed::run_experiment(cfg);
      std::cout << "wrote " << rows.size() << " rounds to " << cfg.output_path
                << " (final accuracy " << rows.back().test_accuracy << ")\n";
      return 0;
    }
    if (validate->parsed()) {
      return airfed::run_validation_suite(std::cout) ? 0 : 1;
    }
    if (sweep->parsed()) {
      airfed::ExperimentConfig cfg = resolve_config(sweep, sweep_opts);
      std::vector<airfed::MetricsRow> all_rows;
      for (const std::uint64_t seed : parse_seed_list(seeds_text)) {
        cfg.seed = seed;
        airfed::Runner runner(cfg);
        const auto rows = runner.run_all();
        all_rows.insert(all_rows.end(), rows.begin(), rows.end());
        std::cout << "seed " << seed << ": final accuracy "
                  << rows.back().test_accuracy << "\n";
      }
      airfed::write_metrics_csv(all_rows, cfg.output_path);
      std::cout << "wrote " << all_rows.size() << " rounds to "
                << cfg.output_path << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
