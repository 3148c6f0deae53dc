#pragma once

#include <optional>
#include <string>
#include <vector>

#include "siht/hardthreshold.hpp"
#include "siht/objectives.hpp"
#include "siht/rng.hpp"
#include "siht/types.hpp"

namespace siht {

enum class StopReason { max_iters, f_tail_converged, support_stabilized };

const char* to_string(StopReason r);

struct SolveResult {
  SparseIterate final_iterate;
  TrajectoryRecord trajectory;
  StopReason stop_reason = StopReason::max_iters;
};

struct SolveOptions {
  // Override the default start (zero vector padded to an s-support by the
  // tie rule). Must be feasible.
  std::optional<SparseIterate> x0;
  // Iteration indices at which to snapshot the dense iterate (sorted).
  std::vector<int> snapshot_at;
  std::vector<DenseVector>* snapshots = nullptr;
  // Stopping policy: a sliding window of `window` consecutive f values with
  // range below f_tail_tol*(1+|f|) stops the run, as does an unchanged
  // support over the window together with a restricted gradient norm below
  // grad_tol.
  int window = 200;
  double f_tail_tol = 1e-10;
  double grad_tol = 1e-10;
};

// One mini-batch hard-thresholding step: H_s(x - gamma * G(x, B)).
SparseIterate siht_step(const ProblemInstance& inst, const SparseIterate& x,
                        const BatchSample& batch, double gamma, int s, TieRule rule);

// Mini-batch stochastic IHT. Batches are drawn uniformly without replacement
// from a substream labeled "batch" of the config seed, redrawn independently
// every iteration. Trajectory rows record f, support, the restricted
// gradient norm ||grad_{I_s^x} f||^2, and the batch, starting with an x^0
// row. Throws on a non-finite objective, naming the iteration.
SolveResult siht_run(const ProblemInstance& inst, const SolverConfig& config,
                     const SolveOptions& options = {});

// Deterministic full-batch IHT: siht_run with S_B = N. When gamma < 1/L_s
// (spectral estimate), a monotonicity violation of the f sequence throws,
// since it signals an underestimated L_s.
SolveResult iht_run(const ProblemInstance& inst, const SolverConfig& config,
                    const SolveOptions& options = {});

}  // namespace siht
