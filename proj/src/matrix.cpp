#include "nfold/matrix.hpp"

#include <algorithm>
#include <string>

namespace nfold {

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw DimensionError("ragged matrix: row " + std::to_string(i) +
                           " has " + std::to_string(rows[i].size()) +
                           " entries, expected " + std::to_string(cols));
    }
    std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * cols);
  }
  return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntVector IntMatrix::column(std::size_t j) const {
  IntVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

Int IntMatrix::max_abs() const {
  Int best = 0;
  for (Int x : data_) best = std::max(best, checked_abs(x));
  return best;
}

IntVector IntMatrix::multiply(std::span<const Int> v) const {
  if (v.size() != cols_) {
    throw DimensionError("matrix-vector product: matrix has " +
                         std::to_string(cols_) + " columns, vector has " +
                         std::to_string(v.size()) + " entries");
  }
  IntVector out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = dot(row(i), v);
  return out;
}

std::vector<IntVector> IntMatrix::to_rows() const {
  std::vector<IntVector> out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    auto r = row(i);
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

}  // namespace nfold
