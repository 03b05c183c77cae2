#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "airfed/channel.hpp"
#include "airfed/learning.hpp"
#include "airfed/rng.hpp"

namespace airfed {

/// Raised on any dataset I/O problem; the message states which of the
/// distinct failure modes occurred (missing file, bad magic, truncation).
class MnistError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads one IDX image/label file pair (big-endian magic 2051/2049 layout)
/// and scales pixels to [0,1].
Dataset load_idx_pair(const std::string& images_path,
                      const std::string& labels_path);

struct MnistData {
  Dataset train;
  Dataset test;
};

/// Loads the four standard MNIST files from a directory.
MnistData load_mnist(const std::string& dir);

/// Writes a dataset back out in IDX format (pixels quantized to bytes).
void save_idx_pair(const Dataset& data, const std::string& images_path,
                   const std::string& labels_path);

/// Label-heterogeneous split: digit floor(k/2) goes to clients 2*floor(k/2)
/// and 2*floor(k/2)+1 (0-based), split evenly; every shard is truncated to
/// the same size. Requires K even and digits 0..K/2-1 present.
std::vector<Dataset> partition_heterogeneous(const Dataset& train,
                                             arma::uword clients);

/// Large-scale fading: K/2 values equispaced in dB over [db_min, db_max],
/// each shared by the two clients holding the same digit.
FadingProfile beta_profile_range(arma::uword clients, double db_min,
                                 double db_max);

/// The reference profile: equispaced between -40 dB and 0 dB.
FadingProfile beta_profile_paper(arma::uword clients);

/// Deterministic stand-in corpus: noisy renderings of digit glyphs,
/// balanced over `classes` labels. Drop-in compatible with the MNIST
/// pipeline (28x28 grayscale in [0,1]).
Dataset make_synthetic_digits(arma::uword count, arma::uword classes, Rng& rng);

}  // namespace airfed
