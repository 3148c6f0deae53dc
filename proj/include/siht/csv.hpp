#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "siht/types.hpp"

namespace siht {

// CSV helpers. All floating-point output uses 17 significant digits so a
// write/read round trip is bit-exact.

std::string format_double(double v);

void write_matrix_csv(const std::string& path, const Matrix& m);
void write_vector_csv(const std::string& path, const DenseVector& v);

// Throws std::runtime_error naming the path when the file cannot be read.
Matrix read_matrix_csv(const std::string& path);
DenseVector read_vector_csv(const std::string& path);

// Semicolon-joined integers, e.g. "0;3;7". Empty vector gives "".
std::string join_indices(const std::vector<int>& idx);

// Trajectory CSV with header
//   k,f,support,grad_norm_sq_restricted,batch
// where support and batch are semicolon-joined 0-based indices.
void write_trajectory_csv(const std::string& path, const TrajectoryRecord& record);

}  // namespace siht
