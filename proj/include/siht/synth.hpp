#pragma once

#include <cstdint>

#include "siht/rng.hpp"
#include "siht/types.hpp"

namespace siht {

// Synthetic planted-sparse instance: V has iid standard normal entries, the
// planted x* has s_true standard normal nonzeros at uniformly chosen
// coordinates, and
//   least_squares: y = V x* + noise_sigma * standard normal
//   logistic:      y_i ~ Bernoulli(sigmoid(V_i. x*))
struct PlantedInstance {
  ProblemInstance instance;
  DenseVector ground_truth;
};

PlantedInstance make_planted_instance(int N, int n, int s_true, double noise_sigma,
                                      LossKind loss, std::uint64_t seed);

// Low-dispersion least-squares instance: rows are a common direction with
// small multiplicative and additive perturbations, targets from a planted
// sparse point plus small noise. Per-sample gradients stay nearly parallel,
// which keeps the gradient-proportionality ratio close to its Cauchy-Schwarz
// floor N; this is the regime where a moderate constant c exists and a
// mini-batch size strictly below N is admissible.
ProblemInstance make_low_dispersion_instance(int N, int n, int s_true, double spread,
                                             std::uint64_t seed);

}  // namespace siht
