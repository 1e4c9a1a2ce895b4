#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nfold/arith.hpp"

namespace nfold {

// Dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static IntMatrix from_rows(const std::vector<IntVector>& rows);
  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Int operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const Int> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  IntVector column(std::size_t j) const;

  // max |a_ij|, 0 for an empty matrix
  Int max_abs() const;

  IntVector multiply(std::span<const Int> v) const;

  std::vector<IntVector> to_rows() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  IntVector data_;
};

}  // namespace nfold
