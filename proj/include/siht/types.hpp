#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace siht {

using DenseVector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Throws std::invalid_argument if v contains NaN or Inf.
void require_finite(const DenseVector& v, const std::string& what);
void require_finite(const Matrix& m, const std::string& what);

enum class TieRule { lowest_index, highest_index };

enum class LossKind { least_squares, logistic };

// Strictly increasing index set in [0, n), at most `capacity` entries.
// Indices are 0-based everywhere in the library; 1-based conversion happens
// only at display time, if ever.
class SupportSet {
 public:
  SupportSet() = default;
  // `indices` need not be sorted; duplicates are rejected.
  SupportSet(std::vector<int> indices, int dimension);

  const std::vector<int>& indices() const { return indices_; }
  int size() const { return static_cast<int>(indices_.size()); }
  int dimension() const { return dimension_; }
  bool contains(int i) const;

  SupportSet set_union(const SupportSet& other) const;
  SupportSet set_difference(const SupportSet& other) const;

  // Entries of v at this set's indices, in increasing index order.
  DenseVector restrict(const DenseVector& v) const;

  bool operator==(const SupportSet& other) const {
    return indices_ == other.indices_ && dimension_ == other.dimension_;
  }

 private:
  std::vector<int> indices_;
  int dimension_ = 0;
};

// s-sparse iterate: dense vector whose off-support entries are exactly zero.
struct SparseIterate {
  DenseVector vector;
  SupportSet support;

  // Zeroes every entry of `dense` outside `support` (bitwise zero).
  SparseIterate(const DenseVector& dense, SupportSet support_in);
};

struct ProblemInstance {
  Matrix V;             // N x n design matrix; row i is the i-th sample
  DenseVector targets;  // length N
  LossKind loss_kind = LossKind::least_squares;

  ProblemInstance(Matrix V_in, DenseVector targets_in, LossKind kind);

  int num_samples() const { return static_cast<int>(V.rows()); }
  int dimension() const { return static_cast<int>(V.cols()); }
};

struct SolverConfig {
  int s = 1;                  // sparsity level, 1 <= s < n
  double gamma = 0.0;         // step size, > 0
  int batch_size = 1;         // S_B in [1, N]
  int max_iters = 1000;
  std::uint64_t seed = 0;
  double c_constant = 0.0;    // > 0 when set; 0 means "not supplied"
  TieRule tie_rule = TieRule::lowest_index;

  // Validates against an instance (dimension and batch range).
  void validate(const ProblemInstance& inst) const;
};

struct TrajectoryRow {
  int k = 0;
  double f = 0.0;
  std::vector<int> support;
  double grad_norm_sq_restricted = 0.0;  // ||grad_{I_s^x} f(x)||^2
  std::vector<int> batch;                // empty for the x^0 row
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::vector<TrajectoryRow> rows;  // rows.size() == iterations executed + 1
};

}  // namespace siht
