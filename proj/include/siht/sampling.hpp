#pragma once

#include <cstdint>
#include <vector>

#include "siht/rng.hpp"
#include "siht/types.hpp"

namespace siht {

// Index subset of {0..N-1} of fixed size, sorted ascending.
struct BatchSample {
  std::vector<int> indices;
  int population = 0;  // N

  int size() const { return static_cast<int>(indices.size()); }
};

// 0/1 inclusion vector of a batch: z_i = 1 iff i is in the batch.
DenseVector inclusion_vector(const BatchSample& batch);

// Uniform size-S_B subset of {0..N-1} without replacement, each subset with
// probability 1/C(N,S_B). Partial Fisher-Yates on the index pool.
BatchSample draw_batch(int N, int S_B, Rng& rng);

// All C(N,S_B) subsets exactly once, lexicographic. Throws if the count
// exceeds `cap`.
std::vector<BatchSample> enumerate_batches(int N, int S_B, std::uint64_t cap = 1000000);

// Exact binomial coefficient, throws on overflow past cap sentinel use.
std::uint64_t binomial(int n, int k);

// Covariance matrix of the inclusion vector under uniform without-replacement
// sampling: diagonal p(1-p) with p = S_B/N, off-diagonal
// S_B(S_B-1)/(N(N-1)) - p^2.
Matrix inclusion_covariance(int N, int S_B);

// zeta = (N - S_B) / (S_B (N - 1)); zero for the full batch.
double zeta(int N, int S_B);

struct BatchSizeBound {
  int s_b_min = 1;
  bool degenerate = false;     // c <= N: formula denominator changes sign
  double formula_value = 0.0;  // raw value of the lower-bound expression
  // 1 - c/N + ((1 - L_s g)/(1 + L_s g)) / zeta evaluated at s_b_min
  // (infinity when s_b_min == N).
  double margin_at_min = 0.0;
  bool margin_nonneg = true;
};

// Smallest admissible mini-batch size for stepsize gamma in (0, 1/L_s):
// ceil of N / (1 + ((1-L_s*gamma)/(1+L_s*gamma)) * ((N-1)/(c/N - 1))),
// clamped to [1, N]. For c <= N the bound is degenerate and S_B = 1 is
// returned with the flag set.
BatchSizeBound batch_size_lower_bound(int N, double L_s, double gamma, double c);

}  // namespace siht
