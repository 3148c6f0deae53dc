#include "siht/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "siht/sampling.hpp"

namespace siht {

PlantedInstance make_planted_instance(int N, int n, int s_true, double noise_sigma,
                                      LossKind loss, std::uint64_t seed) {
  if (s_true < 1 || s_true > n)
    throw std::invalid_argument("make_planted_instance: require 1 <= s_true <= n");
  Rng rng = Rng(seed).substream("gen");

  Matrix V(N, n);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < n; ++c) V(r, c) = rng.normal();

  DenseVector x_star = DenseVector::Zero(n);
  BatchSample coords = draw_batch(n, s_true, rng);
  for (int j : coords.indices) x_star[j] = rng.normal();

  const DenseVector clean = V * x_star;
  DenseVector y(N);
  if (loss == LossKind::least_squares) {
    for (int i = 0; i < N; ++i) y[i] = clean[i] + noise_sigma * rng.normal();
  } else {
    for (int i = 0; i < N; ++i) {
      const double p = 1.0 / (1.0 + std::exp(-clean[i]));
      y[i] = rng.uniform01() <= p ? 1.0 : 0.0;
    }
  }
  return PlantedInstance{ProblemInstance(std::move(V), std::move(y), loss),
                         std::move(x_star)};
}

ProblemInstance make_low_dispersion_instance(int N, int n, int s_true, double spread,
                                             std::uint64_t seed) {
  Rng rng = Rng(seed).substream("lowdisp");
  DenseVector direction(n);
  for (int j = 0; j < n; ++j) direction[j] = rng.normal();

  Matrix V(N, n);
  for (int i = 0; i < N; ++i) {
    const double scale = 1.0 + spread * rng.normal();
    for (int j = 0; j < n; ++j) V(i, j) = scale * direction[j] + spread * rng.normal();
  }

  DenseVector x_star = DenseVector::Zero(n);
  BatchSample coords = draw_batch(n, s_true, rng);
  for (int j : coords.indices) x_star[j] = rng.normal();

  DenseVector y = V * x_star;
  for (int i = 0; i < N; ++i) y[i] += spread * rng.normal();
  return ProblemInstance(std::move(V), std::move(y), LossKind::least_squares);
}

}  // namespace siht
