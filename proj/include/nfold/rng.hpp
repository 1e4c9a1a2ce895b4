#pragma once

#include <cstdint>
#include <random>

#include "nfold/arith.hpp"

namespace nfold {

/// Portable seeded generator used by every instance generator.
///
/// The bit stream is std::mt19937_64 (its output sequence is fixed by the C++
/// standard), seeded with the raw 64-bit seed. Standard distributions are not
/// portable across library implementations, so the mappings below are
/// spelled out here:
///
///   uniform_int(lo, hi): span = hi - lo + 1; draw v until
///                        v < 2^64 - (2^64 mod span); return lo + v mod span.
///   uniform_real():      (v >> 11) * 2^-53, in [0, 1).
///
/// Any implementation reproducing these three rules reproduces every
/// generated instance bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  Int uniform_int(Int lo, Int hi);
  double uniform_real();

 private:
  std::mt19937_64 engine_;
};

}  // namespace nfold
