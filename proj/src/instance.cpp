#include "nfold/instance.hpp"

#include <algorithm>

namespace nfold {

namespace {

void expect_length(const IntVector& v, std::size_t n, const char* name) {
  if (v.size() != n) {
    throw DimensionError(std::string(name) + " has length " +
                         std::to_string(v.size()) + ", expected " +
                         std::to_string(n));
  }
}

void expect_dimension(const NFoldInstance& inst, std::span<const Int> v) {
  if (v.size() != inst.dimension()) {
    throw DimensionError("vector has length " + std::to_string(v.size()) +
                         ", instance dimension is " +
                         std::to_string(inst.dimension()));
  }
}

}  // namespace

Int NFoldInstance::max_coefficient() const {
  return std::max(e1.max_abs(), e2.max_abs());
}

void NFoldInstance::validate() const {
  if (bricks == 0) throw DimensionError("N must be positive");
  if (e1.cols() != e2.cols()) {
    throw DimensionError("E1 has " + std::to_string(e1.cols()) +
                         " columns but E2 has " + std::to_string(e2.cols()));
  }
  if (t() == 0) throw DimensionError("t must be positive");
  expect_length(b, row_count(), "b");
  expect_length(lower, dimension(), "l");
  expect_length(upper, dimension(), "u");
  expect_length(weights, dimension(), "w");
  for (std::size_t j = 0; j < dimension(); ++j) {
    if (lower[j] > upper[j]) {
      throw FormatError("l > u at coordinate " + std::to_string(j));
    }
  }
  if (start) expect_length(*start, dimension(), "x0");
}

std::span<const Int> brick_of(const NFoldInstance& inst,
                              std::span<const Int> v, std::size_t i) {
  return v.subspan(i * inst.t(), inst.t());
}

IntVector apply_nfold(const NFoldInstance& inst, std::span<const Int> v) {
  expect_dimension(inst, v);
  const std::size_t r = inst.r(), s = inst.s(), t = inst.t();
  IntVector out(inst.row_count(), 0);
  IntVector brick_sum(t, 0);
  for (std::size_t i = 0; i < inst.bricks; ++i) {
    auto brick = brick_of(inst, v, i);
    for (std::size_t j = 0; j < t; ++j) {
      brick_sum[j] = checked_add(brick_sum[j], brick[j]);
    }
    for (std::size_t k = 0; k < s; ++k) {
      out[r + i * s + k] = dot(inst.e2.row(k), brick);
    }
  }
  for (std::size_t k = 0; k < r; ++k) out[k] = dot(inst.e1.row(k), brick_sum);
  return out;
}

bool within_bounds(const NFoldInstance& inst, std::span<const Int> x) {
  expect_dimension(inst, x);
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < inst.lower[j] || x[j] > inst.upper[j]) return false;
  }
  return true;
}

bool is_feasible(const NFoldInstance& inst, std::span<const Int> x) {
  if (!within_bounds(inst, x)) return false;
  return apply_nfold(inst, x) == inst.b;
}

Int objective(const NFoldInstance& inst, std::span<const Int> x) {
  expect_dimension(inst, x);
  return dot(inst.weights, x);
}

IntMatrix materialize(const NFoldInstance& inst) {
  const std::size_t r = inst.r(), s = inst.s(), t = inst.t();
  IntMatrix a(inst.row_count(), inst.dimension());
  for (std::size_t i = 0; i < inst.bricks; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      for (std::size_t k = 0; k < r; ++k) a(k, i * t + j) = inst.e1(k, j);
      for (std::size_t k = 0; k < s; ++k) {
        a(r + i * s + k, i * t + j) = inst.e2(k, j);
      }
    }
  }
  return a;
}

}  // namespace nfold
