#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "siht/objectives.hpp"
#include "siht/rng.hpp"
#include "siht/sampling.hpp"
#include "siht/types.hpp"

namespace siht {

enum class CheckStatus { exact_pass, mc_pass, fail };

const char* to_string(CheckStatus s);

struct CheckReport {
  std::string name;
  CheckStatus status = CheckStatus::fail;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // lhs - rhs (positive gap above tolerance means failure)
  double tolerance = 0.0;
  std::uint64_t trials = 0;  // enumerated batch count or MC draws
  std::uint64_t seed = 0;

  bool passed() const { return status != CheckStatus::fail; }
};

// Writes reports as CSV with header: name,status,lhs,rhs,gap,tol,trials,seed.
void write_reports_csv(std::ostream& os, const std::vector<CheckReport>& reports);

// ---- Identity checkers (exact enumeration) ----

// E||G(B)||^2 == (1/|B|^2) trace(G^T G Cov(Z(B))) + ||gbar||^2, with the
// left side enumerated over all C(N,S_B) batches. G has per-sample vectors
// as columns. Relative tolerance 1e-10.
CheckReport check_sample_average_identity(const Matrix& G, int S_B,
                                          std::uint64_t cap = 1000000);

// Three-way agreement of E||G(B) - gbar||^2: enumeration, the
// (sum ||g_i||^2 - N||gbar||^2) closed form, and the centered-sum closed
// form. Relative tolerance 1e-10; the reported lhs/rhs are the worst pair.
CheckReport check_distance_identity(const Matrix& G, int S_B,
                                    std::uint64_t cap = 1000000);

// ---- Descent checkers ----

// Sparse descent inequality for an arbitrary direction g at a feasible x:
//   f(y) <= f(x) - (g/2)(1 - L_s g)||g_{I_y}||^2 - (g/2)||g_{I_x}||^2
//           + g<delta_{I_y}, g_{I_y}> + g<delta_{I\I_y}, x_{I\I_y}>
// with y = H_s(x - gamma g), delta = g - grad f(x), I = I_x union I_y.
// The final term is evaluated against the iterate x, as stated; when that
// form fails, `g_variant` carries the same check with the final term taken
// against g instead, so both readings are visible.
struct DescentLemmaReport {
  CheckReport as_written;
  CheckReport g_variant;  // only meaningful when as_written failed
  bool as_written_failed = false;
};
DescentLemmaReport check_descent_lemma(const ProblemInstance& inst, const SparseIterate& x,
                                       const DenseVector& g, double gamma, double L_s,
                                       TieRule rule);

// Expected descent under the batch-size bound:
//   E_B[f(Y(B)) | x] <= f(x) - (gamma/2)||grad_{I_x} f(x)||^2.
// Exact enumeration when C(N,S_B) <= cap, otherwise Monte Carlo with
// >= mc_draws draws and a 3*stderr tolerance.
CheckReport check_expected_descent(const ProblemInstance& inst, const SparseIterate& x,
                                   double gamma, int S_B, TieRule rule,
                                   std::uint64_t cap = 1000000, int mc_draws = 10000,
                                   std::uint64_t mc_seed = 0);

// Full inequality with the variance margin term:
//   E_B[f(Y(B))] <= f(x) - (g/2)||grad_{I_x} f||^2
//                   - (g/2)(1+L_s g) zeta (1 - c/N + ((1-L_s g)/(1+L_s g))/zeta)
//                     * E_B ||grad_{I_{Y(B)}} f||^2
// by exact enumeration, plus the nonnegativity side condition on the
// coefficient. Requires S_B < N (zeta > 0). The expectation over the
// thresholded support is the batch-induced one: enumerate batches, take the
// support of each Y(B).
struct Theorem2Report {
  CheckReport inequality;
  double side_condition = 0.0;  // 1 - c/N + ((1-Lg)/(1+Lg))/zeta
  bool side_condition_nonneg = false;
};
Theorem2Report check_theorem2_margin(const ProblemInstance& inst, const SparseIterate& x,
                                     double gamma, double L_s, int S_B, double c,
                                     TieRule rule, std::uint64_t cap = 1000000);

// The constant c realized by the batch-induced support distribution at the
// given points: max over xs of
//   E_B[sum_i ||grad_{I_{Y(B)}} f^(i)(x)||^2] / E_B[||grad_{I_{Y(B)}} f(x)||^2]
// with B enumerated (or sampled when C(N,S_B) > cap). This is the
// expectation form of the proportionality assumption with the index-set
// distribution bound to the one the algorithm induces.
double batch_induced_c(const ProblemInstance& inst, const std::vector<SparseIterate>& xs,
                       double gamma, int S_B, TieRule rule, std::uint64_t cap = 1000000,
                       int mc_draws = 2000, std::uint64_t mc_seed = 0);

// ---- Trajectory checkers ----

// (a) conditional-decrease proxy: at sampled iterates of the reference
// trajectory, MC estimate of E[f(X^{k+1}) | X^k] <= f(X^k) + 3*stderr.
// (b) a.s.-convergence proxy: per trajectory, some suffix of the f sequence
// has range <= tail_tol. Passes when (a) holds at every sampled iterate and
// (b) holds on at least `min_converged` trajectories.
struct SupermartingaleReport {
  CheckReport conditional_decrease;  // worst sampled iterate
  CheckReport tail_convergence;      // lhs = #converged, rhs = min required
  int converged_seeds = 0;
  int total_seeds = 0;
};
SupermartingaleReport check_supermartingale(const ProblemInstance& inst,
                                            const SolverConfig& config,
                                            const std::vector<TrajectoryRecord>& trajectories,
                                            int min_converged, double tail_tol = 1e-6,
                                            int probe_iterates = 10, int mc_draws = 10000);

}  // namespace siht
