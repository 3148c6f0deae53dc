#pragma once

#include <optional>

#include "siht/rng.hpp"
#include "siht/sampling.hpp"
#include "siht/types.hpp"

namespace siht {

// Loss models over a ProblemInstance.
//
// Per-sample convention: f^(i) carries no 1/N factor; the 1/N lives only in
// the aggregate, so full_gradient == mean of sample_gradient over all i.
//
//   least_squares: f^(i)(x) = (V_i.x - y_i)^2,          f = (1/N)||Vx - y||^2
//   logistic:      f^(i)(x) = -y_i(V_i.x) + softplus(V_i.x)
//
// softplus is computed as max(t,0) + log1p(exp(-|t|)) to avoid overflow.

double value(const ProblemInstance& inst, const DenseVector& x);
double sample_value(const ProblemInstance& inst, int i, const DenseVector& x);

DenseVector sample_gradient(const ProblemInstance& inst, int i, const DenseVector& x);
DenseVector full_gradient(const ProblemInstance& inst, const DenseVector& x);
DenseVector minibatch_gradient(const ProblemInstance& inst, const BatchSample& batch,
                               const DenseVector& x);

// Columns are per-sample gradients at x (n x N).
Matrix gradient_matrix(const ProblemInstance& inst, const DenseVector& x);

enum class SmoothnessMethod { spectral_upper_bound, exact_restricted };

struct SmoothnessEstimate {
  double L_s = 0.0;
  SmoothnessMethod method = SmoothnessMethod::spectral_upper_bound;
};

// Restricted smoothness modulus.
//   spectral_upper_bound: least_squares (2/N) lambda_max(V^T V),
//                         logistic (1/(4N)) lambda_max(V^T V).
//   exact_restricted (least_squares only, n <= enumeration cap): max over
//   supports of size min(2s, n) of (2/N) lambda_max of the restricted Gram
//   block. Size 2s because the difference of two s-sparse points has at most
//   2s nonzeros.
SmoothnessEstimate smoothness_modulus(const ProblemInstance& inst, int s,
                                      SmoothnessMethod method, int enumeration_cap_n = 20);

// Data-dependent bound on sum_i ||grad_J f^(i)||^2 / ||grad_J f||^2:
//   N^2 * max_r ||(V_r.)_J||^2 / sigma+_min(sum_{j in J} V_.j V_.j^T)^2
// where sigma+_min is the smallest nonzero singular value of the N x N
// restricted Gram matrix (rank <= |J|, singular whenever |J| < N; the
// literal smallest singular value would be 0 and the bound vacuous).
// Returns nullopt when the restricted Gram matrix is all zero.
//
// The bound is independent of x and of the loss (it only needs the composite
// per-sample form f^(i)(V_i. x), which both losses have). It provably upper
// bounds the ratio only when the restricted column block has rank N, i.e.
// |J| >= N for generic data; see the theorem2 checkers for the diagnostic on
// the rank-deficient regime.
std::optional<double> claim_c_bound(const ProblemInstance& inst, const SupportSet& J);

enum class CMethod { claim_bound, empirical_search };

struct CConstant {
  double value = 0.0;
  CMethod method = CMethod::empirical_search;
};

// Empirical search for the constant c: max over `trials` sampled pairs
// (x standard normal dense, J uniform random support of size s) of
//   sum_i ||grad_J f^(i)(x)||^2 / ||grad_J f(x)||^2,
// skipping denominators below 1e-14, multiplied by a 1.5 safety factor.
// Enforcing the pointwise ratio bound implies the expectation form for any
// distribution of J. Throws if every sampled denominator is degenerate.
CConstant empirical_c(const ProblemInstance& inst, int s, int trials, Rng& rng);

}  // namespace siht
