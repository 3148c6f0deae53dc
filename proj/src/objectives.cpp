#include "siht/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace siht {

namespace {

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

void check_dim(const ProblemInstance& inst, const DenseVector& x) {
  if (x.size() != inst.dimension())
    throw std::invalid_argument("objectives: dimension mismatch");
}

// Max eigenvalue of a symmetric PSD matrix.
double lambda_max(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

double sample_value(const ProblemInstance& inst, int i, const DenseVector& x) {
  check_dim(inst, x);
  if (i < 0 || i >= inst.num_samples())
    throw std::out_of_range("sample_value: sample index out of range");
  const double t = inst.V.row(i).dot(x);
  if (inst.loss_kind == LossKind::least_squares) {
    const double r = t - inst.targets[i];
    return r * r;
  }
  return -inst.targets[i] * t + softplus(t);
}

double value(const ProblemInstance& inst, const DenseVector& x) {
  check_dim(inst, x);
  const int N = inst.num_samples();
  double acc = 0.0;
  for (int i = 0; i < N; ++i) acc += sample_value(inst, i, x);
  return acc / N;
}

DenseVector sample_gradient(const ProblemInstance& inst, int i, const DenseVector& x) {
  check_dim(inst, x);
  if (i < 0 || i >= inst.num_samples())
    throw std::out_of_range("sample_gradient: sample index out of range");
  const double t = inst.V.row(i).dot(x);
  double scale;
  if (inst.loss_kind == LossKind::least_squares) {
    scale = 2.0 * (t - inst.targets[i]);
  } else {
    scale = sigmoid(t) - inst.targets[i];
  }
  return scale * inst.V.row(i).transpose();
}

DenseVector full_gradient(const ProblemInstance& inst, const DenseVector& x) {
  check_dim(inst, x);
  const int N = inst.num_samples();
  const DenseVector t = inst.V * x;
  DenseVector scale(N);
  if (inst.loss_kind == LossKind::least_squares) {
    scale = 2.0 * (t - inst.targets);
  } else {
    for (int i = 0; i < N; ++i) scale[i] = sigmoid(t[i]) - inst.targets[i];
  }
  return inst.V.transpose() * scale / N;
}

DenseVector minibatch_gradient(const ProblemInstance& inst, const BatchSample& batch,
                               const DenseVector& x) {
  check_dim(inst, x);
  if (batch.indices.empty()) throw std::invalid_argument("minibatch_gradient: empty batch");
  DenseVector g = DenseVector::Zero(inst.dimension());
  for (int i : batch.indices) g += sample_gradient(inst, i, x);
  return g / batch.size();
}

Matrix gradient_matrix(const ProblemInstance& inst, const DenseVector& x) {
  const int N = inst.num_samples();
  Matrix G(inst.dimension(), N);
  for (int i = 0; i < N; ++i) G.col(i) = sample_gradient(inst, i, x);
  return G;
}

SmoothnessEstimate smoothness_modulus(const ProblemInstance& inst, int s,
                                      SmoothnessMethod method, int enumeration_cap_n) {
  const int n = inst.dimension();
  const int N = inst.num_samples();
  if (s < 1 || s >= n) throw std::invalid_argument("smoothness_modulus: require 1 <= s < n");

  if (method == SmoothnessMethod::spectral_upper_bound) {
    const double lmax = lambda_max(inst.V.transpose() * inst.V);
    const double L = inst.loss_kind == LossKind::least_squares ? 2.0 * lmax / N
                                                               : lmax / (4.0 * N);
    return SmoothnessEstimate{L, method};
  }

  if (inst.loss_kind != LossKind::least_squares)
    throw std::invalid_argument("smoothness_modulus: exact_restricted is least_squares only");
  if (n > enumeration_cap_n)
    throw std::invalid_argument("smoothness_modulus: n exceeds enumeration cap");

  const int m = std::min(2 * s, n);
  const Matrix gram = inst.V.transpose() * inst.V;
  double best = 0.0;
  // Iterate all supports of size m.
  std::vector<int> comb(m);
  std::iota(comb.begin(), comb.end(), 0);
  while (true) {
    Matrix block(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) block(a, b) = gram(comb[a], comb[b]);
    best = std::max(best, lambda_max(block));
    int i = m - 1;
    while (i >= 0 && comb[i] == n - m + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < m; ++j) comb[j] = comb[j - 1] + 1;
  }
  return SmoothnessEstimate{2.0 * best / N, method};
}

std::optional<double> claim_c_bound(const ProblemInstance& inst, const SupportSet& J) {
  const int N = inst.num_samples();
  if (J.size() < 1) throw std::invalid_argument("claim_c_bound: J must be nonempty");

  Matrix VJ(N, J.size());
  for (int a = 0; a < J.size(); ++a) VJ.col(a) = inst.V.col(J.indices()[a]);

  Eigen::JacobiSVD<Matrix> svd(VJ * VJ.transpose());
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  if (smax <= 0.0) return std::nullopt;
  double smin_pos = 0.0;
  for (int i = sv.size() - 1; i >= 0; --i) {
    if (sv[i] > 1e-12 * smax) {
      smin_pos = sv[i];
      break;
    }
  }
  if (smin_pos <= 0.0) return std::nullopt;

  double max_row = 0.0;
  for (int r = 0; r < N; ++r) max_row = std::max(max_row, VJ.row(r).squaredNorm());
  return static_cast<double>(N) * N * max_row / (smin_pos * smin_pos);
}

CConstant empirical_c(const ProblemInstance& inst, int s, int trials, Rng& rng) {
  const int n = inst.dimension();
  const int N = inst.num_samples();
  if (trials < 1) throw std::invalid_argument("empirical_c: require trials >= 1");
  if (s < 1 || s >= n) throw std::invalid_argument("empirical_c: require 1 <= s < n");

  double max_ratio = 0.0;
  bool any = false;
  for (int t = 0; t < trials; ++t) {
    DenseVector x(n);
    for (int j = 0; j < n; ++j) x[j] = rng.normal();
    BatchSample jset = draw_batch(n, s, rng);  // uniform size-s index subset of [0, n)
    const SupportSet J(jset.indices, n);

    const DenseVector gJ = J.restrict(full_gradient(inst, x));
    const double denom = gJ.squaredNorm();
    if (denom < 1e-14) continue;
    double num = 0.0;
    for (int i = 0; i < N; ++i) num += J.restrict(sample_gradient(inst, i, x)).squaredNorm();
    max_ratio = std::max(max_ratio, num / denom);
    any = true;
  }
  if (!any)
    throw std::runtime_error(
        "empirical_c: every sampled restricted gradient was below 1e-14; "
        "instance gradient is degenerate on the sampled region");
  return CConstant{1.5 * max_ratio, CMethod::empirical_search};
}

}  // namespace siht
