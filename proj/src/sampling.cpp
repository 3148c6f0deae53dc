#include "siht/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace siht {

DenseVector inclusion_vector(const BatchSample& batch) {
  DenseVector z = DenseVector::Zero(batch.population);
  for (int i : batch.indices) z[i] = 1.0;
  return z;
}

BatchSample draw_batch(int N, int S_B, Rng& rng) {
  if (N < 1 || S_B < 1 || S_B > N)
    throw std::invalid_argument("draw_batch: require 1 <= S_B <= N");
  std::vector<int> pool(N);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < S_B; ++i) {
    const int j = i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(N - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(S_B);
  std::sort(pool.begin(), pool.end());
  return BatchSample{std::move(pool), N};
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (result > std::numeric_limits<std::uint64_t>::max() / num)
      throw std::overflow_error("binomial: overflow");
    result = result * num / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::vector<BatchSample> enumerate_batches(int N, int S_B, std::uint64_t cap) {
  if (N < 1 || S_B < 1 || S_B > N)
    throw std::invalid_argument("enumerate_batches: require 1 <= S_B <= N");
  const std::uint64_t count = binomial(N, S_B);
  if (count > cap) throw std::invalid_argument("enumerate_batches: C(N,S_B) exceeds cap");

  std::vector<BatchSample> out;
  out.reserve(count);
  std::vector<int> comb(S_B);
  std::iota(comb.begin(), comb.end(), 0);
  while (true) {
    out.push_back(BatchSample{comb, N});
    int i = S_B - 1;
    while (i >= 0 && comb[i] == N - S_B + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < S_B; ++j) comb[j] = comb[j - 1] + 1;
  }
  return out;
}

Matrix inclusion_covariance(int N, int S_B) {
  if (N < 2) throw std::invalid_argument("inclusion_covariance: require N >= 2");
  if (S_B < 1 || S_B > N)
    throw std::invalid_argument("inclusion_covariance: require 1 <= S_B <= N");
  const double p = static_cast<double>(S_B) / N;
  const double off = static_cast<double>(S_B) * (S_B - 1) / (static_cast<double>(N) * (N - 1)) - p * p;
  Matrix cov = Matrix::Constant(N, N, off);
  cov.diagonal().setConstant(p * (1.0 - p));
  return cov;
}

double zeta(int N, int S_B) {
  if (N < 2) throw std::invalid_argument("zeta: require N >= 2");
  if (S_B < 1 || S_B > N) throw std::invalid_argument("zeta: require 1 <= S_B <= N");
  return static_cast<double>(N - S_B) / (static_cast<double>(S_B) * (N - 1));
}

BatchSizeBound batch_size_lower_bound(int N, double L_s, double gamma, double c) {
  if (N < 2) throw std::invalid_argument("batch_size_lower_bound: require N >= 2");
  if (!(c > 0.0)) throw std::invalid_argument("batch_size_lower_bound: require c > 0");
  if (!(gamma > 0.0) || !(gamma < 1.0 / L_s))
    throw std::invalid_argument("batch_size_lower_bound: require 0 < gamma < 1/L_s");

  const double ratio = (1.0 - L_s * gamma) / (1.0 + L_s * gamma);
  BatchSizeBound out;
  if (c <= static_cast<double>(N)) {
    // The bound's denominator term changes sign here; treat any batch size as
    // admissible and let the expected-descent check decide.
    out.degenerate = true;
    out.s_b_min = 1;
    out.formula_value =
        (c == static_cast<double>(N))
            ? std::numeric_limits<double>::quiet_NaN()
            : N / (1.0 + ratio * (N - 1) / (c / N - 1.0));
  } else {
    const double raw = N / (1.0 + ratio * (N - 1) / (c / N - 1.0));
    out.formula_value = raw;
    out.s_b_min = std::clamp(static_cast<int>(std::ceil(raw - 1e-12)), 1, N);
  }
  if (out.s_b_min == N) {
    out.margin_at_min = std::numeric_limits<double>::infinity();
    out.margin_nonneg = true;
  } else {
    const double z = zeta(N, out.s_b_min);
    out.margin_at_min = 1.0 - c / N + ratio / z;
    out.margin_nonneg = out.margin_at_min >= 0.0;
  }
  return out;
}

}  // namespace siht
