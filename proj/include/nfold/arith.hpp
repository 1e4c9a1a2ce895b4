#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfold {

using Int = std::int64_t;
using IntVector = std::vector<Int>;

class NFoldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public NFoldError {
 public:
  using NFoldError::NFoldError;
};

class OverflowError : public NFoldError {
 public:
  using NFoldError::NFoldError;
};

class FormatError : public NFoldError {
 public:
  using NFoldError::NFoldError;
};

// Checked 64-bit arithmetic. Every operation that feeds an objective value or
// a lattice vector goes through these; overflow throws OverflowError.
Int checked_add(Int a, Int b);
Int checked_sub(Int a, Int b);
Int checked_mul(Int a, Int b);
Int checked_abs(Int a);
Int checked_neg(Int a);

Int dot(std::span<const Int> a, std::span<const Int> b);
Int l1_norm(std::span<const Int> v);
Int linf_norm(std::span<const Int> v);

// Floor/ceil division with a positive divisor.
Int floor_div(Int a, Int b);
Int ceil_div(Int a, Int b);

// a and b lie in the same orthant.
bool sign_compatible(std::span<const Int> a, std::span<const Int> b);
// y ⊑ x: sign compatible and |y_i| <= |x_i| everywhere.
bool conformal_leq(std::span<const Int> y, std::span<const Int> x);

bool is_zero(std::span<const Int> v);

std::string to_string(std::span<const Int> v);

}  // namespace nfold
