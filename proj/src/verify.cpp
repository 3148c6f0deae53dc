#include "siht/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "siht/hardthreshold.hpp"
#include "siht/solver.hpp"

namespace siht {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::exact_pass: return "exact_pass";
    case CheckStatus::mc_pass: return "mc_pass";
    case CheckStatus::fail: return "fail";
  }
  return "unknown";
}

void write_reports_csv(std::ostream& os, const std::vector<CheckReport>& reports) {
  os << "name,status,lhs,rhs,gap,tol,trials,seed\n";
  char buf[512];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%.17g,%.17g,%.17g,%llu,%llu\n",
                  r.name.c_str(), to_string(r.status), r.lhs, r.rhs, r.gap, r.tolerance,
                  static_cast<unsigned long long>(r.trials),
                  static_cast<unsigned long long>(r.seed));
    os << buf;
  }
}

namespace {

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

CheckReport identity_report(const std::string& name, double lhs, double rhs,
                            std::uint64_t trials, double tol) {
  CheckReport r;
  r.name = name;
  r.lhs = lhs;
  r.rhs = rhs;
  r.gap = lhs - rhs;
  r.tolerance = tol;
  r.trials = trials;
  // Identities with both sides ~0 compare absolutely at the same tolerance.
  const bool tiny = std::abs(lhs) < tol && std::abs(rhs) < tol;
  r.status = (tiny || rel_gap(lhs, rhs) <= tol) ? CheckStatus::exact_pass : CheckStatus::fail;
  return r;
}

DenseVector mean_column(const Matrix& G) { return G.rowwise().mean(); }

}  // namespace

CheckReport check_sample_average_identity(const Matrix& G, int S_B, std::uint64_t cap) {
  const int N = static_cast<int>(G.cols());
  const auto batches = enumerate_batches(N, S_B, cap);

  double lhs = 0.0;
  for (const auto& b : batches) {
    DenseVector sum = DenseVector::Zero(G.rows());
    for (int i : b.indices) sum += G.col(i);
    lhs += (sum / S_B).squaredNorm();
  }
  lhs /= static_cast<double>(batches.size());

  const DenseVector gbar = mean_column(G);
  const Matrix cov = inclusion_covariance(N, S_B);
  const double rhs =
      ((G.transpose() * G) * cov).trace() / (static_cast<double>(S_B) * S_B) +
      gbar.squaredNorm();
  return identity_report("sample_average_identity", lhs, rhs, batches.size(), 1e-10);
}

CheckReport check_distance_identity(const Matrix& G, int S_B, std::uint64_t cap) {
  const int N = static_cast<int>(G.cols());
  if (N < 2) throw std::invalid_argument("check_distance_identity: require N >= 2");
  const auto batches = enumerate_batches(N, S_B, cap);
  const DenseVector gbar = mean_column(G);

  double enumerated = 0.0;
  for (const auto& b : batches) {
    DenseVector sum = DenseVector::Zero(G.rows());
    for (int i : b.indices) sum += G.col(i);
    enumerated += (sum / S_B - gbar).squaredNorm();
  }
  enumerated /= static_cast<double>(batches.size());

  double sum_norms = 0.0, sum_centered = 0.0;
  for (int i = 0; i < N; ++i) {
    sum_norms += G.col(i).squaredNorm();
    sum_centered += (G.col(i) - gbar).squaredNorm();
  }
  const double fpc = static_cast<double>(N - S_B) / (static_cast<double>(S_B) * N);
  const double closed_a = fpc / (N - 1) * (sum_norms - N * gbar.squaredNorm());
  const double closed_b = fpc / (N - 1) * sum_centered;

  // Report the worst-agreeing pair among the three expressions.
  const double tol = 1e-10;
  double worst = rel_gap(enumerated, closed_a);
  double lhs = enumerated, rhs = closed_a;
  if (rel_gap(enumerated, closed_b) > worst) {
    worst = rel_gap(enumerated, closed_b);
    rhs = closed_b;
  }
  if (rel_gap(closed_a, closed_b) > worst) {
    lhs = closed_a;
    rhs = closed_b;
  }
  CheckReport r = identity_report("distance_identity", lhs, rhs, batches.size(), tol);
  return r;
}

DescentLemmaReport check_descent_lemma(const ProblemInstance& inst, const SparseIterate& x,
                                       const DenseVector& g, double gamma, double L_s,
                                       TieRule rule) {
  if (!(gamma > 0.0) || gamma > 1.0 / L_s)
    throw std::invalid_argument("check_descent_lemma: require 0 < gamma <= 1/L_s");
  const int s = x.support.size();

  const SparseIterate y = hard_threshold(x.vector - gamma * g, s, rule);
  const DenseVector delta = g - full_gradient(inst, x.vector);
  const SupportSet I = x.support.set_union(y.support);
  const SupportSet I_minus_y = I.set_difference(y.support);

  const double fy = value(inst, y.vector);
  const double base = value(inst, x.vector) -
                      0.5 * gamma * (1.0 - L_s * gamma) * y.support.restrict(g).squaredNorm() -
                      0.5 * gamma * x.support.restrict(g).squaredNorm() +
                      gamma * y.support.restrict(delta).dot(y.support.restrict(g));
  const double rhs_x = base + gamma * I_minus_y.restrict(delta).dot(I_minus_y.restrict(x.vector));
  const double rhs_g = base + gamma * I_minus_y.restrict(delta).dot(I_minus_y.restrict(g));

  const double tol = 1e-10 * (1.0 + std::abs(fy));
  DescentLemmaReport rep;
  rep.as_written.name = "descent_lemma";
  rep.as_written.lhs = fy;
  rep.as_written.rhs = rhs_x;
  rep.as_written.gap = fy - rhs_x;
  rep.as_written.tolerance = tol;
  rep.as_written.trials = 1;
  rep.as_written.status = fy <= rhs_x + tol ? CheckStatus::exact_pass : CheckStatus::fail;
  rep.as_written_failed = !rep.as_written.passed();

  rep.g_variant.name = "descent_lemma_gvariant";
  rep.g_variant.lhs = fy;
  rep.g_variant.rhs = rhs_g;
  rep.g_variant.gap = fy - rhs_g;
  rep.g_variant.tolerance = tol;
  rep.g_variant.trials = 1;
  rep.g_variant.status = fy <= rhs_g + tol ? CheckStatus::exact_pass : CheckStatus::fail;
  return rep;
}

CheckReport check_expected_descent(const ProblemInstance& inst, const SparseIterate& x,
                                   double gamma, int S_B, TieRule rule, std::uint64_t cap,
                                   int mc_draws, std::uint64_t mc_seed) {
  const int N = inst.num_samples();
  const int s = x.support.size();
  const double fx = value(inst, x.vector);
  const double rhs =
      fx - 0.5 * gamma * x.support.restrict(full_gradient(inst, x.vector)).squaredNorm();

  CheckReport r;
  r.name = "expected_descent";
  r.rhs = rhs;

  if (binomial(N, S_B) <= cap) {
    const auto batches = enumerate_batches(N, S_B, cap);
    double mean = 0.0;
    for (const auto& b : batches)
      mean += value(inst, siht_step(inst, x, b, gamma, s, rule).vector);
    mean /= static_cast<double>(batches.size());
    r.lhs = mean;
    r.trials = batches.size();
    r.tolerance = 1e-10 * (1.0 + std::abs(fx));
    r.status = mean <= rhs + r.tolerance ? CheckStatus::exact_pass : CheckStatus::fail;
  } else {
    Rng rng(mc_seed);
    double mean = 0.0, m2 = 0.0;
    for (int t = 0; t < mc_draws; ++t) {
      const BatchSample b = draw_batch(N, S_B, rng);
      const double f = value(inst, siht_step(inst, x, b, gamma, s, rule).vector);
      const double d = f - mean;
      mean += d / (t + 1);
      m2 += d * (f - mean);
    }
    const double stderr_mean = std::sqrt(m2 / (mc_draws - 1) / mc_draws);
    r.lhs = mean;
    r.trials = static_cast<std::uint64_t>(mc_draws);
    r.tolerance = 3.0 * stderr_mean;
    r.seed = mc_seed;
    r.status = mean <= rhs + r.tolerance ? CheckStatus::mc_pass : CheckStatus::fail;
  }
  r.gap = r.lhs - r.rhs;
  return r;
}

Theorem2Report check_theorem2_margin(const ProblemInstance& inst, const SparseIterate& x,
                                     double gamma, double L_s, int S_B, double c,
                                     TieRule rule, std::uint64_t cap) {
  const int N = inst.num_samples();
  if (S_B >= N) throw std::invalid_argument("check_theorem2_margin: require S_B < N (zeta > 0)");
  const int s = x.support.size();
  const double z = zeta(N, S_B);
  const double ratio = (1.0 - L_s * gamma) / (1.0 + L_s * gamma);
  const double side = 1.0 - c / N + ratio / z;

  const auto batches = enumerate_batches(N, S_B, cap);
  const DenseVector grad = full_gradient(inst, x.vector);
  double mean_f = 0.0, mean_grad_y = 0.0;
  for (const auto& b : batches) {
    const SparseIterate y = siht_step(inst, x, b, gamma, s, rule);
    mean_f += value(inst, y.vector);
    mean_grad_y += y.support.restrict(grad).squaredNorm();
  }
  mean_f /= static_cast<double>(batches.size());
  mean_grad_y /= static_cast<double>(batches.size());

  const double fx = value(inst, x.vector);
  const double rhs = fx - 0.5 * gamma * x.support.restrict(grad).squaredNorm() -
                     0.5 * gamma * (1.0 + L_s * gamma) * z * side * mean_grad_y;

  Theorem2Report rep;
  rep.side_condition = side;
  rep.side_condition_nonneg = side >= 0.0;
  rep.inequality.name = "theorem2_margin";
  rep.inequality.lhs = mean_f;
  rep.inequality.rhs = rhs;
  rep.inequality.gap = mean_f - rhs;
  rep.inequality.tolerance = 1e-10 * (1.0 + std::abs(fx));
  rep.inequality.trials = batches.size();
  rep.inequality.status = (mean_f <= rhs + rep.inequality.tolerance && rep.side_condition_nonneg)
                              ? CheckStatus::exact_pass
                              : CheckStatus::fail;
  return rep;
}

double batch_induced_c(const ProblemInstance& inst, const std::vector<SparseIterate>& xs,
                       double gamma, int S_B, TieRule rule, std::uint64_t cap, int mc_draws,
                       std::uint64_t mc_seed) {
  const int N = inst.num_samples();
  double worst = 0.0;
  for (const auto& x : xs) {
    const int s = x.support.size();
    const DenseVector grad = full_gradient(inst, x.vector);
    const Matrix G = gradient_matrix(inst, x.vector);

    double num = 0.0, den = 0.0;
    auto accumulate = [&](const BatchSample& b) {
      const SparseIterate y = siht_step(inst, x, b, gamma, s, rule);
      for (int i = 0; i < N; ++i) num += y.support.restrict(G.col(i)).squaredNorm();
      den += y.support.restrict(grad).squaredNorm();
    };
    if (binomial(N, S_B) <= cap) {
      for (const auto& b : enumerate_batches(N, S_B, cap)) accumulate(b);
    } else {
      Rng rng(mc_seed);
      for (int t = 0; t < mc_draws; ++t) {
        const BatchSample b = draw_batch(N, S_B, rng);
        accumulate(b);
      }
    }
    if (den > 1e-14) worst = std::max(worst, num / den);
  }
  if (worst == 0.0)
    throw std::runtime_error("batch_induced_c: all restricted gradients degenerate");
  return worst;
}

SupermartingaleReport check_supermartingale(const ProblemInstance& inst,
                                            const SolverConfig& config,
                                            const std::vector<TrajectoryRecord>& trajectories,
                                            int min_converged, double tail_tol,
                                            int probe_iterates, int mc_draws) {
  if (trajectories.empty())
    throw std::invalid_argument("check_supermartingale: require at least one trajectory");

  SupermartingaleReport rep;
  rep.total_seeds = static_cast<int>(trajectories.size());

  // (b) per-trajectory tail criterion: a suffix of f with range <= tail_tol.
  // A one-element suffix qualifies vacuously, so the settled stretch must
  // cover at least `min_tail` recorded values.
  for (const auto& traj : trajectories) {
    const auto& rows = traj.rows;
    const std::size_t min_tail = std::min<std::size_t>(200, rows.size() / 2 + 1);
    double suffix_min = rows.back().f, suffix_max = rows.back().f;
    std::size_t tail_len = 0;
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      suffix_min = std::min(suffix_min, it->f);
      suffix_max = std::max(suffix_max, it->f);
      if (suffix_max - suffix_min <= tail_tol) ++tail_len;
      else break;
    }
    if (tail_len >= min_tail) ++rep.converged_seeds;
  }
  rep.tail_convergence.name = "supermartingale_tail";
  rep.tail_convergence.lhs = rep.converged_seeds;
  rep.tail_convergence.rhs = min_converged;
  rep.tail_convergence.gap = static_cast<double>(min_converged - rep.converged_seeds);
  rep.tail_convergence.tolerance = 0.0;
  rep.tail_convergence.trials = trajectories.size();
  rep.tail_convergence.status =
      rep.converged_seeds >= min_converged ? CheckStatus::mc_pass : CheckStatus::fail;

  // (a) conditional decrease along a re-run of the reference (first) trajectory.
  const int ref_len = static_cast<int>(trajectories.front().rows.size()) - 1;
  std::vector<int> probes;
  for (int j = 0; j < probe_iterates; ++j)
    probes.push_back(static_cast<int>(static_cast<long long>(j) * std::max(ref_len, 1) /
                                      probe_iterates));
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());

  std::vector<DenseVector> snaps;
  SolveOptions opts;
  opts.snapshot_at = probes;
  opts.snapshots = &snaps;
  opts.window = config.max_iters + 1;  // disable early stop so indices line up
  SolverConfig ref_config = config;
  ref_config.seed = trajectories.front().seed;
  ref_config.max_iters = ref_len;
  siht_run(inst, ref_config, opts);

  Rng mc_rng = Rng(config.seed).substream("supermartingale_mc");
  double worst_gap = -1e300;
  CheckReport worst;
  worst.name = "supermartingale_conditional_decrease";
  worst.status = CheckStatus::mc_pass;
  for (std::size_t j = 0; j < snaps.size(); ++j) {
    const SparseIterate xk = hard_threshold(snaps[j], config.s, config.tie_rule);
    const double fk = value(inst, xk.vector);
    double mean = 0.0, m2 = 0.0;
    for (int t = 0; t < mc_draws; ++t) {
      const BatchSample b = draw_batch(inst.num_samples(), config.batch_size, mc_rng);
      const double f =
          value(inst, siht_step(inst, xk, b, config.gamma, config.s, config.tie_rule).vector);
      const double d = f - mean;
      mean += d / (t + 1);
      m2 += d * (f - mean);
    }
    const double se = std::sqrt(m2 / (mc_draws - 1) / mc_draws);
    const double gap = mean - fk - 3.0 * se;
    if (gap > worst_gap) {
      worst_gap = gap;
      worst.lhs = mean;
      worst.rhs = fk;
      worst.gap = mean - fk;
      worst.tolerance = 3.0 * se;
      worst.trials = static_cast<std::uint64_t>(mc_draws);
      worst.status = gap <= 0.0 ? CheckStatus::mc_pass : CheckStatus::fail;
    }
  }
  rep.conditional_decrease = worst;
  return rep;
}

}  // namespace siht
