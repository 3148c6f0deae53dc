#include "siht/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace siht {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (c) os << ',';
      os << format_double(m(r, c));
    }
    os << '\n';
  }
}

void write_vector_csv(const std::string& path, const DenseVector& v) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  for (int i = 0; i < v.size(); ++i) os << format_double(v[i]) << '\n';
}

namespace {

std::vector<std::vector<double>> read_rows(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t pos = 0;
      const double v = std::stod(cell, &pos);
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Matrix read_matrix_csv(const std::string& path) {
  const auto rows = read_rows(path);
  if (rows.empty()) throw std::runtime_error("empty matrix file: " + path);
  const std::size_t cols = rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::runtime_error("ragged matrix file: " + path);
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

DenseVector read_vector_csv(const std::string& path) {
  const auto rows = read_rows(path);
  DenseVector v(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != 1) throw std::runtime_error("expected one value per line: " + path);
    v[r] = rows[r][0];
  }
  return v;
}

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& record) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << "k,f,support,grad_norm_sq_restricted,batch\n";
  for (const auto& row : record.rows) {
    os << row.k << ',' << format_double(row.f) << ',' << join_indices(row.support) << ','
       << format_double(row.grad_norm_sq_restricted) << ',' << join_indices(row.batch)
       << '\n';
  }
}

std::string join_indices(const std::vector<int>& idx) {
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(idx[i]);
  }
  return out;
}

}  // namespace siht
