#include "siht/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace siht {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::max_iters: return "max_iters";
    case StopReason::f_tail_converged: return "f_tail_converged";
    case StopReason::support_stabilized: return "support_stabilized";
  }
  return "unknown";
}

SparseIterate siht_step(const ProblemInstance& inst, const SparseIterate& x,
                        const BatchSample& batch, double gamma, int s, TieRule rule) {
  const DenseVector g = minibatch_gradient(inst, batch, x.vector);
  return hard_threshold(x.vector - gamma * g, s, rule);
}

namespace {

SparseIterate default_start(const ProblemInstance& inst, const SolverConfig& config) {
  const DenseVector zero = DenseVector::Zero(inst.dimension());
  return hard_threshold(zero, config.s, config.tie_rule);
}

TrajectoryRow make_row(const ProblemInstance& inst, const SparseIterate& x, int k,
                       const std::vector<int>& batch) {
  TrajectoryRow row;
  row.k = k;
  row.f = value(inst, x.vector);
  row.support = x.support.indices();
  row.grad_norm_sq_restricted = x.support.restrict(full_gradient(inst, x.vector)).squaredNorm();
  row.batch = batch;
  return row;
}

SolveResult run_impl(const ProblemInstance& inst, const SolverConfig& config,
                     const SolveOptions& options, bool enforce_monotone) {
  config.validate(inst);
  const int N = inst.num_samples();

  SparseIterate x = options.x0 ? *options.x0 : default_start(inst, config);
  if (x.support.size() > config.s)
    throw std::invalid_argument("siht_run: x0 support exceeds s");
  if (static_cast<int>(x.vector.size()) != inst.dimension())
    throw std::invalid_argument("siht_run: x0 dimension mismatch");

  Rng batch_rng = Rng(config.seed).substream("batch");

  SolveResult result{x, TrajectoryRecord{config.seed, {}}, StopReason::max_iters};
  result.trajectory.rows.push_back(make_row(inst, x, 0, {}));

  std::deque<double> f_window = {result.trajectory.rows.back().f};
  int support_streak = 0;
  std::size_t snap_pos = 0;

  auto maybe_snapshot = [&](int k, const SparseIterate& it) {
    if (options.snapshots == nullptr) return;
    while (snap_pos < options.snapshot_at.size() && options.snapshot_at[snap_pos] == k) {
      options.snapshots->push_back(it.vector);
      ++snap_pos;
    }
  };
  maybe_snapshot(0, x);

  for (int k = 0; k < config.max_iters; ++k) {
    const BatchSample batch = draw_batch(N, config.batch_size, batch_rng);
    SparseIterate next = siht_step(inst, x, batch, config.gamma, config.s, config.tie_rule);

    TrajectoryRow row = make_row(inst, next, k + 1, batch.indices);
    if (!std::isfinite(row.f))
      throw std::runtime_error("siht_run: non-finite objective at iteration " +
                               std::to_string(k + 1));
    if (enforce_monotone && row.f > result.trajectory.rows.back().f + 1e-12 * (1.0 + std::abs(row.f)))
      throw std::runtime_error("iht_run: objective increased at iteration " +
                               std::to_string(k + 1) + " (L_s underestimated?)");

    support_streak = (next.support == x.support) ? support_streak + 1 : 0;
    x = std::move(next);
    result.trajectory.rows.push_back(std::move(row));
    maybe_snapshot(k + 1, x);

    f_window.push_back(result.trajectory.rows.back().f);
    if (static_cast<int>(f_window.size()) > options.window) f_window.pop_front();

    if (static_cast<int>(f_window.size()) == options.window) {
      const auto [lo, hi] = std::minmax_element(f_window.begin(), f_window.end());
      const double f_now = result.trajectory.rows.back().f;
      if (*hi - *lo < options.f_tail_tol * (1.0 + std::abs(f_now))) {
        result.stop_reason = StopReason::f_tail_converged;
        break;
      }
    }
    if (support_streak >= options.window &&
        result.trajectory.rows.back().grad_norm_sq_restricted < options.grad_tol) {
      result.stop_reason = StopReason::support_stabilized;
      break;
    }
  }

  result.final_iterate = x;
  return result;
}

}  // namespace

SolveResult siht_run(const ProblemInstance& inst, const SolverConfig& config,
                     const SolveOptions& options) {
  return run_impl(inst, config, options, false);
}

SolveResult iht_run(const ProblemInstance& inst, const SolverConfig& config,
                    const SolveOptions& options) {
  SolverConfig full = config;
  full.batch_size = inst.num_samples();
  const double L =
      smoothness_modulus(inst, full.s, SmoothnessMethod::spectral_upper_bound).L_s;
  const bool monotone = full.gamma < 1.0 / L;
  return run_impl(inst, full, options, monotone);
}

}  // namespace siht
