#pragma once

#include <armadillo>
#include <cstdint>
#include <random>

namespace airfed {

/// One stream per stochastic responsibility; combined with (round, client)
/// into an independent substream seed so every draw in a run is replayable.
enum class StreamRole : std::uint64_t {
  kParamInit = 1,
  kChannel,
  kPilotNoise,
  kDataNoise,
  kMeasurementMatrix,
  kLocalBatch,
  kPatternChoice,
  kDataset,
  kValidation,
};

/// Deterministically derives a substream seed from the master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t round,
                          std::uint64_t client, StreamRole role);

/// Seeded random stream. All stochastic operations in the library take one
/// of these explicitly; there is no hidden global generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double gaussian() { return normal_(engine_); }
  double uniform() { return unit_(engine_); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }

  arma::vec gaussian_vec(arma::uword n);
  arma::mat gaussian_mat(arma::uword rows, arma::uword cols);

  /// Circularly-symmetric complex Gaussian CN(0,1): each of the real and
  /// imaginary parts has variance 1/2, so the total variance is 1.
  arma::cx_double cx_gaussian();
  arma::cx_vec cx_gaussian_vec(arma::uword n);
  arma::cx_mat cx_gaussian_mat(arma::uword rows, arma::uword cols);

  /// Random permutation of 0..n-1.
  arma::uvec permutation(arma::uword n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace airfed
