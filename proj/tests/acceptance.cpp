// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line; the process exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "siht/csv.hpp"
#include "siht/hardthreshold.hpp"
#include "siht/objectives.hpp"
#include "siht/rng.hpp"
#include "siht/sampling.hpp"
#include "siht/solver.hpp"
#include "siht/synth.hpp"
#include "siht/types.hpp"
#include "siht/verify.hpp"

using namespace siht;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(int index, const std::string& what, bool pass, Clock::time_point started,
            const std::string& detail = "") {
  const double secs =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count() /
      1000.0;
  std::printf("%s %2d: %s (%.1fs)%s%s\n", pass ? "PASS" : "FAIL", index, what.c_str(), secs,
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++g_failures;
}

DenseVector random_vector(int n, Rng& rng) {
  DenseVector x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.normal();
  return x;
}

SparseIterate random_feasible(int n, int s, Rng& rng) {
  return hard_threshold(random_vector(n, rng), s, TieRule::lowest_index);
}

Matrix random_gradient_matrix(int rows, int N, Rng& rng) {
  Matrix G(rows, N);
  for (int c = 0; c < N; ++c)
    for (int r = 0; r < rows; ++r) G(r, c) = rng.normal();
  return G;
}

ProblemInstance random_ls_instance(int N, int n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix V(N, n);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < n; ++c) V(r, c) = rng.normal();
  DenseVector y(N);
  for (int i = 0; i < N; ++i) y[i] = rng.normal();
  return ProblemInstance(V, y, LossKind::least_squares);
}

double exhaustive_ht_distance_sq(const DenseVector& x, int s) {
  const int n = static_cast<int>(x.size());
  std::vector<int> comb(s);
  std::iota(comb.begin(), comb.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    double d = 0.0;
    int pos = 0;
    for (int i = 0; i < n; ++i) {
      if (pos < s && comb[pos] == i) ++pos;
      else d += x[i] * x[i];
    }
    best = std::min(best, d);
    int i = s - 1;
    while (i >= 0 && comb[i] == n - s + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < s; ++j) comb[j] = comb[j - 1] + 1;
  }
  return best;
}

// ---- criteria ----

void criterion_1() {
  const auto t0 = Clock::now();
  Rng rng(101);
  bool ok = true;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform_below(8));  // 3..10
    const DenseVector x = random_vector(n, rng);
    for (int s = 1; s < n; ++s) {
      const double got = (hard_threshold(x, s, TieRule::lowest_index).vector - x).squaredNorm();
      const double want = exhaustive_ht_distance_sq(x, s);
      if (std::abs(got - want) > 1e-12 * (1.0 + want)) {
        ok = false;
        break;
      }
    }
  }
  report(1, "hard thresholding matches exhaustive projection on 1000 random vectors", ok, t0);
}

void criterion_2() {
  const auto t0 = Clock::now();
  Rng rng(102);
  bool ok = true;
  for (int N = 2; N <= 7; ++N)
    for (int rep = 0; rep < 50; ++rep) {
      const Matrix G = random_gradient_matrix(4, N, rng);
      for (int S = 1; S <= N; ++S)
        if (!check_distance_identity(G, S).passed()) ok = false;
    }
  report(2, "mini-batch distance identity: enumeration vs both closed forms, rel 1e-10", ok,
         t0);
}

void criterion_3() {
  const auto t0 = Clock::now();
  Rng rng(103);
  bool ok = true;
  for (int N = 2; N <= 7; ++N)
    for (int rep = 0; rep < 50; ++rep) {
      const Matrix G = random_gradient_matrix(4, N, rng);
      for (int S = 1; S <= N; ++S)
        if (!check_sample_average_identity(G, S).passed()) ok = false;
    }
  report(3, "sample-average second-moment identity via the trace formula, rel 1e-10", ok, t0);
}

void criterion_4() {
  const auto t0 = Clock::now();
  bool ok = true;
  Rng rng(104);
  for (LossKind loss : {LossKind::least_squares, LossKind::logistic}) {
    const PlantedInstance p = make_planted_instance(6, 5, 2, 0.3, loss, 104);
    const ProblemInstance& inst = p.instance;
    for (int t = 0; t < 50; ++t) {
      const DenseVector x = random_vector(5, rng);
      auto fd = [&](auto&& f) {
        DenseVector g(5);
        for (int j = 0; j < 5; ++j) {
          const double h = 1e-5 * (1.0 + std::abs(x[j]));
          DenseVector xp = x, xm = x;
          xp[j] += h;
          xm[j] -= h;
          g[j] = (f(xp) - f(xm)) / (2.0 * h);
        }
        return g;
      };
      for (int i = 0; i < 6; ++i) {
        const DenseVector g = sample_gradient(inst, i, x);
        const DenseVector ref = fd([&](const DenseVector& p_) { return sample_value(inst, i, p_); });
        if ((g - ref).norm() > 1e-6 * std::max(1e-300, ref.norm())) ok = false;
      }
      const DenseVector g = full_gradient(inst, x);
      const DenseVector ref = fd([&](const DenseVector& p_) { return value(inst, p_); });
      if ((g - ref).norm() > 1e-6 * std::max(1e-300, ref.norm())) ok = false;
    }
  }
  report(4, "per-sample and full gradients match central finite differences, rel 1e-6", ok, t0);
}

// Shared setup for criteria 5-7 and 10.
const std::uint64_t kInstanceSeed = 105;

void criterion_5() {
  const auto t0 = Clock::now();
  const ProblemInstance inst =
      make_planted_instance(10, 8, 3, 0.1, LossKind::least_squares, kInstanceSeed).instance;
  const int s = 3;
  const double L = smoothness_modulus(inst, s, SmoothnessMethod::spectral_upper_bound).L_s;
  const double gamma = 0.9 / L;
  Rng crng = Rng(105).substream("empirical_c");
  const double c = empirical_c(inst, s, 300, crng).value;
  const int S_B = batch_size_lower_bound(10, L, gamma, c).s_b_min;

  bool ok = true;
  Rng rng(1050);
  for (int t = 0; t < 50; ++t) {
    const SparseIterate x = random_feasible(8, s, rng);
    if (!check_expected_descent(inst, x, gamma, S_B, TieRule::lowest_index).passed()) ok = false;
  }
  std::ostringstream detail;
  detail << "c=" << c << ", S_B=" << S_B;
  report(5, "expected one-step descent by batch enumeration at 50 feasible points", ok, t0,
         detail.str());
}

void criterion_6() {
  const auto t0 = Clock::now();
  // The pointwise gradient-proportionality constant blows up on generic
  // data, which forces the admissible batch size to N and makes the variance
  // margin vacuous. The margin inequality ties the expectation over index
  // sets to the support distribution the algorithm itself induces, so it is
  // exercised on a low-dispersion design where a moderate c exists and a
  // strict mini-batch is admissible.
  const ProblemInstance inst = make_low_dispersion_instance(10, 8, 3, 0.05, kInstanceSeed);
  const int s = 3;
  const double L = smoothness_modulus(inst, s, SmoothnessMethod::spectral_upper_bound).L_s;
  const double gamma = 0.9 / L;

  Rng rng(1060);
  std::vector<SparseIterate> probes;
  for (int t = 0; t < 20; ++t) probes.push_back(random_feasible(8, s, rng));

  // One fixed-point refinement: estimate c under a provisional batch size,
  // derive the admissible S_B, then re-estimate c under that S_B.
  int S_B = 5;
  double c = 0.0;
  for (int round = 0; round < 2; ++round) {
    c = batch_induced_c(inst, probes, gamma, S_B, TieRule::lowest_index);
    S_B = batch_size_lower_bound(10, L, gamma, c).s_b_min;
  }

  bool ok = S_B < 10;
  std::ostringstream detail;
  detail << "c=" << c << ", S_B=" << S_B;
  if (ok) {
    double worst_side = std::numeric_limits<double>::infinity();
    for (const SparseIterate& x : probes) {
      const Theorem2Report r =
          check_theorem2_margin(inst, x, gamma, L, S_B, c, TieRule::lowest_index);
      if (!r.inequality.passed() || !r.side_condition_nonneg) ok = false;
      worst_side = std::min(worst_side, r.side_condition);
    }
    detail << ", min side condition=" << worst_side;
  } else {
    detail << " (no strict mini-batch admissible)";
  }
  report(6, "variance-margin descent inequality with side condition at 20 feasible points", ok,
         t0, detail.str());
}

void criterion_7() {
  const auto t0 = Clock::now();
  const ProblemInstance inst =
      make_planted_instance(10, 8, 3, 0.1, LossKind::least_squares, kInstanceSeed).instance;
  const int s = 3;
  const double L = smoothness_modulus(inst, s, SmoothnessMethod::spectral_upper_bound).L_s;
  bool ok = true;
  for (double frac : {0.3, 0.6, 0.9}) {
    SolverConfig cfg;
    cfg.s = s;
    cfg.gamma = frac / L;
    cfg.batch_size = 10;
    cfg.max_iters = 2000;
    SolveOptions opts;
    opts.window = 2001;  // run all 2000 iterations
    try {
      const SolveResult r = iht_run(inst, cfg, opts);
      if (r.trajectory.rows.size() != 2001) ok = false;
      for (std::size_t i = 1; i < r.trajectory.rows.size(); ++i)
        if (r.trajectory.rows[i].f >
            r.trajectory.rows[i - 1].f + 1e-12 * (1.0 + std::abs(r.trajectory.rows[i - 1].f)))
          ok = false;
    } catch (const std::exception&) {
      ok = false;
    }
  }
  report(7, "full-batch runs are monotone over 2000 iterations at three step sizes", ok, t0);
}

void criterion_8() {
  const auto t0 = Clock::now();
  const PlantedInstance p =
      make_planted_instance(50, 100, 5, 0.0, LossKind::least_squares, 12);
  const ProblemInstance& inst = p.instance;
  const int s = 5;
  const double L = smoothness_modulus(inst, s, SmoothnessMethod::spectral_upper_bound).L_s;
  const double gamma = 0.9 / L;

  Rng rng(1080);
  std::vector<SparseIterate> probes;
  for (int t = 0; t < 20; ++t) probes.push_back(random_feasible(100, s, rng));
  int S_B = 25;
  for (int round = 0; round < 2; ++round) {
    const double c =
        batch_induced_c(inst, probes, gamma, S_B, TieRule::lowest_index, 1000000, 2000, 108);
    S_B = batch_size_lower_bound(50, L, gamma, c).s_b_min;
  }

  SolverConfig cfg;
  cfg.s = s;
  cfg.gamma = gamma;
  cfg.batch_size = S_B;
  cfg.max_iters = 20000;
  std::vector<TrajectoryRecord> trajectories;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    trajectories.push_back(siht_run(inst, cfg).trajectory);
  }
  cfg.seed = 0;
  const SupermartingaleReport r =
      check_supermartingale(inst, cfg, trajectories, 18, 1e-6, 10, 10000);
  const bool ok = r.tail_convergence.passed() && r.conditional_decrease.passed();
  std::ostringstream detail;
  detail << "S_B=" << S_B << ", converged " << r.converged_seeds << "/20";
  report(8, "20-seed reference run: f tails settle and conditional decrease holds at 3 sigma",
         ok, t0, detail.str());
}

void criterion_9() {
  const auto t0 = Clock::now();
  // Provable regime for the per-sample-vs-full gradient energy bound: the
  // restricted column block must have full row rank, i.e. |J| >= N.
  const int N = 5, n = 12, J_size = 5;
  Rng rng(109);
  bool ok = true;
  int checked = 0;
  for (int inst_id = 0; inst_id < 10; ++inst_id) {
    const ProblemInstance inst = random_ls_instance(N, n, 1090 + inst_id);
    for (int t = 0; t < 20; ++t) {
      const BatchSample j = draw_batch(n, J_size, rng);
      const SupportSet J(j.indices, n);
      const auto bound = claim_c_bound(inst, J);
      if (!bound) continue;
      const DenseVector x = random_vector(n, rng);
      const double den = J.restrict(full_gradient(inst, x)).squaredNorm();
      if (den < 1e-14) continue;
      double num = 0.0;
      for (int i = 0; i < N; ++i) num += J.restrict(sample_gradient(inst, i, x)).squaredNorm();
      ++checked;
      if (num / den > *bound * (1.0 + 1e-10)) ok = false;
    }
  }

  // Informational sweep in the rank-deficient regime |J| < N, where the
  // restricted full gradient can sit in the null space of the per-sample
  // directions and no finite pointwise constant is provable.
  int small_violations = 0, small_checked = 0;
  for (int inst_id = 0; inst_id < 10; ++inst_id) {
    const ProblemInstance inst = random_ls_instance(8, 12, 2090 + inst_id);
    for (int t = 0; t < 20; ++t) {
      const BatchSample j = draw_batch(12, 2, rng);
      const SupportSet J(j.indices, 12);
      const auto bound = claim_c_bound(inst, J);
      if (!bound) continue;
      const DenseVector x = random_vector(12, rng);
      const double den = J.restrict(full_gradient(inst, x)).squaredNorm();
      if (den < 1e-14) continue;
      double num = 0.0;
      for (int i = 0; i < 8; ++i) num += J.restrict(sample_gradient(inst, i, x)).squaredNorm();
      ++small_checked;
      if (num / den > *bound * (1.0 + 1e-10)) ++small_violations;
    }
  }
  std::ostringstream detail;
  detail << checked << " full-rank cases; rank-deficient diagnostic: " << small_violations << "/"
         << small_checked << " exceed the bound (informational, not gated)";
  report(9, "gradient energy ratio bound holds on 200 random (x, J) in the full-rank regime",
         ok, t0, detail.str());
}

void criterion_10() {
  const auto t0 = Clock::now();
  bool ok = true;

  // Trajectory CSV bytes across two independent runs of the same config.
  const ProblemInstance inst =
      make_planted_instance(10, 8, 3, 0.1, LossKind::least_squares, kInstanceSeed).instance;
  const double L = smoothness_modulus(inst, 3, SmoothnessMethod::spectral_upper_bound).L_s;
  SolverConfig cfg;
  cfg.s = 3;
  cfg.gamma = 0.5 / L;
  cfg.batch_size = 4;
  cfg.max_iters = 300;
  cfg.seed = 110;
  std::string traj_bytes[2];
  for (int run = 0; run < 2; ++run) {
    const SolveResult r = siht_run(inst, cfg);
    const std::string path = "/tmp/siht_acceptance_traj_" + std::to_string(run) + ".csv";
    write_trajectory_csv(path, r.trajectory);
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    traj_bytes[run] = os.str();
  }
  if (traj_bytes[0].empty() || traj_bytes[0] != traj_bytes[1]) ok = false;

  // Report CSV bytes from two independent evaluations of seeded checks,
  // including a Monte Carlo path.
  std::string report_bytes[2];
  for (int run = 0; run < 2; ++run) {
    Rng grng(1100);
    const Matrix G = random_gradient_matrix(4, 6, grng);
    Rng xrng(1101);
    const SparseIterate x = random_feasible(8, 3, xrng);
    std::vector<CheckReport> reports;
    reports.push_back(check_sample_average_identity(G, 3));
    reports.push_back(check_distance_identity(G, 3));
    reports.push_back(
        check_expected_descent(inst, x, cfg.gamma, 4, TieRule::lowest_index, 1, 5000, 1102));
    std::ostringstream os;
    write_reports_csv(os, reports);
    report_bytes[run] = os.str();
  }
  if (report_bytes[0].empty() || report_bytes[0] != report_bytes[1]) ok = false;

  report(10, "identical config and seed reproduce trajectory and report CSV bytes", ok, t0);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  return g_failures;
}
