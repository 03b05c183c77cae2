#include <cstdio>

#include "airfed/recovery.hpp"

using namespace airfed;

int main() {
  Rng rng(23);
  int fails = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = make_measurement_matrix(16, 64, rng);
    arma::cx_vec truth(64, arma::fill::zeros);
    const arma::uvec support = rng.permutation(64).head(2);
    for (arma::uword i = 0; i < 2; ++i) truth[support[i]] = rng.cx_gaussian();
    const auto res = recover(RecoveryProblem(m.A, m.A * truth, 2));
    const double rel = arma::norm(res.x - truth) / arma::norm(truth);
    if (rel > 1e-6) {
      ++fails;
      if (fails <= 5)
        std::printf("trial %d: rel=%.3e obj=%.3e iters=%llu conv=%d\n", trial,
                    rel, res.objective, (unsigned long long)res.iterations,
                    res.converged);
    }
  }
  std::printf("fails: %d/200\n", fails);
  return 0;
}
