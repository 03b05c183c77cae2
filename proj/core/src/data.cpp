#include "airfed/data.hpp"

#include <array>
#include <cstdint>
#include <fstream>

namespace airfed {

namespace {

constexpr std::uint32_t kImageMagic = 2051;
constexpr std::uint32_t kLabelMagic = 2049;

std::uint32_t read_u32_be(std::ifstream& in, const std::string& path) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  if (!in) throw MnistError("truncated IDX header in " + path);
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

void write_u32_be(std::ofstream& out, std::uint32_t v) {
  const std::array<unsigned char, 4> b{
      static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
      static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<const char*>(b.data()), 4);
}

}  // namespace

Dataset load_idx_pair(const std::string& images_path,
                      const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw MnistError("missing IDX file: " + images_path);
  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw MnistError("missing IDX file: " + labels_path);

  const std::uint32_t img_magic = read_u32_be(img, images_path);
  if (img_magic != kImageMagic) {
    throw MnistError("bad magic number in " + images_path + " (expected 2051)");
  }
  const std::uint32_t count = read_u32_be(img, images_path);
  const std::uint32_t rows = read_u32_be(img, images_path);
  const std::uint32_t cols = read_u32_be(img, images_path);
  if (rows != 28 || cols != 28) {
    throw MnistError("unexpected image size in " + images_path);
  }

  const std::uint32_t lab_magic = read_u32_be(lab, labels_path);
  if (lab_magic != kLabelMagic) {
    throw MnistError("bad magic number in " + labels_path + " (expected 2049)");
  }
  const std::uint32_t lab_count = read_u32_be(lab, labels_path);
  if (lab_count != count) {
    throw MnistError("image/label counts disagree between " + images_path +
                     " and " + labels_path);
  }

  Dataset data;
  data.images.set_size(28, 28, count);
  data.labels.set_size(count);

  std::vector<unsigned char> buffer(28 * 28);
  for (std::uint32_t n = 0; n < count; ++n) {
    img.read(reinterpret_cast<char*>(buffer.data()), buffer.size());
    if (!img) throw MnistError("truncated image payload in " + images_path);
    // IDX stores each image row-major.
    for (arma::uword r = 0; r < 28; ++r) {
      for (arma::uword c = 0; c < 28; ++c) {
        data.images(r, c, n) = buffer[r * 28 + c] / 255.0;
      }
    }
  }
  std::vector<unsigned char> labels(count);
  lab.read(reinterpret_cast<char*>(labels.data()), labels.size());
  if (!lab) throw MnistError("truncated label payload in " + labels_path);
  for (std::uint32_t n = 0; n < count; ++n) {
    if (labels[n] > 9) throw MnistError("label out of range in " + labels_path);
    data.labels[n] = labels[n];
  }
  return data;
}

MnistData load_mnist(const std::string& dir) {
  MnistData data;
  data.train = load_idx_pair(dir + "/train-images-idx3-ubyte",
                             dir + "/train-labels-idx1-ubyte");
  data.test = load_idx_pair(dir + "/t10k-images-idx3-ubyte",
                            dir + "/t10k-labels-idx1-ubyte");
  return data;
}

void save_idx_pair(const Dataset& data, const std::string& images_path,
                   const std::string& labels_path) {
  std::ofstream img(images_path, std::ios::binary);
  if (!img) throw MnistError("cannot create " + images_path);
  write_u32_be(img, kImageMagic);
  write_u32_be(img, static_cast<std::uint32_t>(data.size()));
  write_u32_be(img, 28);
  write_u32_be(img, 28);
  std::vector<unsigned char> buffer(28 * 28);
  for (arma::uword n = 0; n < data.size(); ++n) {
    for (arma::uword r = 0; r < 28; ++r) {
      for (arma::uword c = 0; c < 28; ++c) {
        const double v = std::clamp(data.images(r, c, n), 0.0, 1.0);
        buffer[r * 28 + c] = static_cast<unsigned char>(std::lround(v * 255.0));
      }
    }
    img.write(reinterpret_cast<const char*>(buffer.data()), buffer.size());
  }

  std::ofstream lab(labels_path, std::ios::binary);
  if (!lab) throw MnistError("cannot create " + labels_path);
  write_u32_be(lab, kLabelMagic);
  write_u32_be(lab, static_cast<std::uint32_t>(data.size()));
  for (arma::uword n = 0; n < data.size(); ++n) {
    const unsigned char v = static_cast<unsigned char>(data.labels[n]);
    lab.write(reinterpret_cast<const char*>(&v), 1);
  }
}

std::vector<Dataset> partition_heterogeneous(const Dataset& train,
                                             arma::uword clients) {
  if (clients == 0 || clients % 2 != 0) {
    throw std::invalid_argument("heterogeneous partition needs an even client count");
  }
  const arma::uword digits = clients / 2;

  std::vector<std::vector<arma::uword>> by_digit(digits);
  for (arma::uword n = 0; n < train.size(); ++n) {
    const arma::uword label = train.labels[n];
    if (label < digits) by_digit[label].push_back(n);
  }
  arma::uword min_count = train.size();
  for (arma::uword c = 0; c < digits; ++c) {
    if (by_digit[c].empty()) {
      throw std::invalid_argument("training data lacks digit " + std::to_string(c));
    }
    min_count = std::min(min_count, arma::uword(by_digit[c].size()));
  }
  const arma::uword per_client = min_count / 2;
  if (per_client == 0) {
    throw std::invalid_argument("not enough samples per digit to split");
  }

  std::vector<Dataset> shards(clients);
  for (arma::uword c = 0; c < digits; ++c) {
    arma::uvec first(per_client);
    arma::uvec second(per_client);
    for (arma::uword i = 0; i < per_client; ++i) {
      first[i] = by_digit[c][i];
      second[i] = by_digit[c][per_client + i];
    }
    shards[2 * c] = train.subset(first);
    shards[2 * c + 1] = train.subset(second);
  }
  return shards;
}

FadingProfile beta_profile_range(arma::uword clients, double db_min,
                                 double db_max) {
  if (clients == 0 || clients % 2 != 0) {
    throw std::invalid_argument("paired fading profile needs an even client count");
  }
  const arma::uword pairs = clients / 2;
  arma::vec betas(clients);
  for (arma::uword i = 0; i < pairs; ++i) {
    // Degenerate single pair sits at the low end of the range.
    const double db = pairs == 1
                          ? db_min
                          : db_min + (db_max - db_min) *
                                         static_cast<double>(i) /
                                         static_cast<double>(pairs - 1);
    const double beta = std::pow(10.0, db / 10.0);
    betas[2 * i] = beta;
    betas[2 * i + 1] = beta;
  }
  return FadingProfile::from_betas(betas);
}

FadingProfile beta_profile_paper(arma::uword clients) {
  return beta_profile_range(clients, -40.0, 0.0);
}

namespace {

// 7x5 glyph bitmaps, one string per row, '#' = ink.
const std::array<std::array<const char*, 7>, 10> kGlyphs = {{
    {".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."},  // 0
    {"..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."},  // 1
    {".###.", "#...#", "....#", "..##.", ".#...", "#....", "#####"},  // 2
    {"####.", "....#", "....#", ".###.", "....#", "....#", "####."},  // 3
    {"...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."},  // 4
    {"#####", "#....", "####.", "....#", "....#", "#...#", ".###."},  // 5
    {"..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."},  // 6
    {"#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."},  // 7
    {".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."},  // 8
    {".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."},  // 9
}};

}  // namespace

Dataset make_synthetic_digits(arma::uword count, arma::uword classes,
                              Rng& rng) {
  if (classes < 1 || classes > 10) {
    throw std::invalid_argument("synthetic digits support 1..10 classes");
  }
  Dataset data;
  data.images.zeros(28, 28, count);
  data.labels.set_size(count);

  // Balanced labels, then shuffled so shards and batches stay unbiased.
  for (arma::uword n = 0; n < count; ++n) data.labels[n] = n % classes;
  const arma::uvec order = rng.permutation(count);
  data.labels = data.labels(order);

  constexpr arma::uword kScale = 3;  // glyph cell -> 3x3 pixel block
  for (arma::uword n = 0; n < count; ++n) {
    const auto& glyph = kGlyphs[data.labels[n]];
    const arma::uword row0 = 2 + rng.uniform_index(5);  // glyph is 21 tall
    const arma::uword col0 = 4 + rng.uniform_index(9);  // glyph is 15 wide
    const double intensity = 0.7 + 0.3 * rng.uniform();
    for (arma::uword gr = 0; gr < 7; ++gr) {
      for (arma::uword gc = 0; gc < 5; ++gc) {
        if (glyph[gr][gc] != '#') continue;
        for (arma::uword dr = 0; dr < kScale; ++dr) {
          for (arma::uword dc = 0; dc < kScale; ++dc) {
            data.images(row0 + kScale * gr + dr, col0 + kScale * gc + dc, n) =
                intensity * (0.8 + 0.2 * rng.uniform());
          }
        }
      }
    }
    for (arma::uword r = 0; r < 28; ++r) {
      for (arma::uword c = 0; c < 28; ++c) {
        const double noisy = data.images(r, c, n) + 0.05 * rng.gaussian();
        data.images(r, c, n) = std::clamp(noisy, 0.0, 1.0);
      }
    }
  }
  return data;
}

}  // namespace airfed
