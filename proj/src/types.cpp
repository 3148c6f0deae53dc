#include "siht/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace siht {

void require_finite(const DenseVector& v, const std::string& what) {
  if (!v.allFinite()) throw std::invalid_argument(what + ": non-finite entry");
}

void require_finite(const Matrix& m, const std::string& what) {
  if (!m.allFinite()) throw std::invalid_argument(what + ": non-finite entry");
}

SupportSet::SupportSet(std::vector<int> indices, int dimension)
    : indices_(std::move(indices)), dimension_(dimension) {
  std::sort(indices_.begin(), indices_.end());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0 || indices_[i] >= dimension_)
      throw std::invalid_argument("SupportSet: index out of range");
    if (i > 0 && indices_[i] == indices_[i - 1])
      throw std::invalid_argument("SupportSet: duplicate index");
  }
}

bool SupportSet::contains(int i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

SupportSet SupportSet::set_union(const SupportSet& other) const {
  std::vector<int> out;
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(),
                 other.indices_.end(), std::back_inserter(out));
  return SupportSet(std::move(out), std::max(dimension_, other.dimension_));
}

SupportSet SupportSet::set_difference(const SupportSet& other) const {
  std::vector<int> out;
  std::set_difference(indices_.begin(), indices_.end(), other.indices_.begin(),
                      other.indices_.end(), std::back_inserter(out));
  return SupportSet(std::move(out), dimension_);
}

DenseVector SupportSet::restrict(const DenseVector& v) const {
  DenseVector out(indices_.size());
  for (std::size_t i = 0; i < indices_.size(); ++i) out[i] = v[indices_[i]];
  return out;
}

SparseIterate::SparseIterate(const DenseVector& dense, SupportSet support_in)
    : vector(DenseVector::Zero(dense.size())), support(std::move(support_in)) {
  require_finite(dense, "SparseIterate");
  for (int i : support.indices()) vector[i] = dense[i];
}

ProblemInstance::ProblemInstance(Matrix V_in, DenseVector targets_in, LossKind kind)
    : V(std::move(V_in)), targets(std::move(targets_in)), loss_kind(kind) {
  require_finite(V, "ProblemInstance.V");
  require_finite(targets, "ProblemInstance.targets");
  // N = 1 is accepted here so single-sample degenerate cases stay usable;
  // everything involving zeta (which needs N >= 2) checks its own range.
  if (V.rows() < 1) throw std::invalid_argument("ProblemInstance: N >= 1 required");
  if (targets.size() != V.rows())
    throw std::invalid_argument("ProblemInstance: targets length must equal N");
  if (loss_kind == LossKind::logistic) {
    for (int i = 0; i < targets.size(); ++i)
      if (targets[i] != 0.0 && targets[i] != 1.0)
        throw std::invalid_argument("ProblemInstance: logistic targets must be 0 or 1");
  }
}

void SolverConfig::validate(const ProblemInstance& inst) const {
  const int n = inst.dimension();
  const int N = inst.num_samples();
  if (s < 1 || s >= n) throw std::invalid_argument("SolverConfig: require 1 <= s < n");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("SolverConfig: gamma must be positive and finite");
  if (batch_size < 1 || batch_size > N)
    throw std::invalid_argument("SolverConfig: batch_size must be in [1, N]");
  if (max_iters < 0) throw std::invalid_argument("SolverConfig: max_iters must be >= 0");
  if (c_constant < 0.0) throw std::invalid_argument("SolverConfig: c_constant must be >= 0");
}

}  // namespace siht
