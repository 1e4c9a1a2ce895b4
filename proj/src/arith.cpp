#include "nfold/arith.hpp"

#include <algorithm>
#include <limits>

namespace nfold {

Int checked_add(Int a, Int b) {
  Int out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError("integer overflow in addition");
  }
  return out;
}

Int checked_sub(Int a, Int b) {
  Int out;
  if (__builtin_sub_overflow(a, b, &out)) {
    throw OverflowError("integer overflow in subtraction");
  }
  return out;
}

Int checked_mul(Int a, Int b) {
  Int out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError("integer overflow in multiplication");
  }
  return out;
}

Int checked_abs(Int a) {
  if (a == std::numeric_limits<Int>::min()) {
    throw OverflowError("integer overflow in abs");
  }
  return a < 0 ? -a : a;
}

Int checked_neg(Int a) {
  if (a == std::numeric_limits<Int>::min()) {
    throw OverflowError("integer overflow in negation");
  }
  return -a;
}

Int dot(std::span<const Int> a, std::span<const Int> b) {
  if (a.size() != b.size()) {
    throw DimensionError("dot: length mismatch " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
  }
  Int sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum = checked_add(sum, checked_mul(a[i], b[i]));
  }
  return sum;
}

Int l1_norm(std::span<const Int> v) {
  Int sum = 0;
  for (Int x : v) sum = checked_add(sum, checked_abs(x));
  return sum;
}

Int linf_norm(std::span<const Int> v) {
  Int best = 0;
  for (Int x : v) best = std::max(best, checked_abs(x));
  return best;
}

Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Int ceil_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

bool sign_compatible(std::span<const Int> a, std::span<const Int> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] < 0 && b[i] > 0) || (a[i] > 0 && b[i] < 0)) return false;
  }
  return true;
}

bool conformal_leq(std::span<const Int> y, std::span<const Int> x) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0) continue;
    if (y[i] > 0 ? (x[i] < y[i]) : (x[i] > y[i])) return false;
  }
  return true;
}

bool is_zero(std::span<const Int> v) {
  return std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; });
}

std::string to_string(std::span<const Int> v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out + ")";
}

}  // namespace nfold
