#include "airfed/rng.hpp"

namespace airfed {

namespace {

// splitmix64 finalizer; full-period mixing of each component.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t round,
                          std::uint64_t client, StreamRole role) {
  std::uint64_t h = mix(master);
  h = mix(h ^ round);
  h = mix(h ^ client);
  h = mix(h ^ static_cast<std::uint64_t>(role));
  return h;
}

arma::vec Rng::gaussian_vec(arma::uword n) {
  arma::vec v(n);
  for (arma::uword i = 0; i < n; ++i) v[i] = normal_(engine_);
  return v;
}

arma::mat Rng::gaussian_mat(arma::uword rows, arma::uword cols) {
  arma::mat m(rows, cols);
  double* p = m.memptr();
  const arma::uword n = rows * cols;
  for (arma::uword i = 0; i < n; ++i) p[i] = normal_(engine_);
  return m;
}

arma::cx_double Rng::cx_gaussian() {
  const double s = M_SQRT1_2;
  return {s * normal_(engine_), s * normal_(engine_)};
}

arma::cx_vec Rng::cx_gaussian_vec(arma::uword n) {
  arma::cx_vec v(n);
  const double s = M_SQRT1_2;
  arma::cx_double* p = v.memptr();
  for (arma::uword i = 0; i < n; ++i) {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    p[i] = {s * re, s * im};
  }
  return v;
}

arma::cx_mat Rng::cx_gaussian_mat(arma::uword rows, arma::uword cols) {
  arma::cx_mat m(rows, cols);
  const double s = M_SQRT1_2;
  arma::cx_double* p = m.memptr();
  const arma::uword n = rows * cols;
  for (arma::uword i = 0; i < n; ++i) {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    p[i] = {s * re, s * im};
  }
  return m;
}

arma::uvec Rng::permutation(arma::uword n) {
  arma::uvec p(n);
  for (arma::uword i = 0; i < n; ++i) p[i] = i;
  // Fisher-Yates with our own engine so the order is seed-reproducible.
  for (arma::uword i = n; i > 1; --i) {
    const arma::uword j = uniform_index(i);
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

}  // namespace airfed
