#include "nfold/rng.hpp"

namespace nfold {

Int Rng::uniform_int(Int lo, Int hi) {
  if (lo > hi) throw NFoldError("uniform_int: empty range");
  const std::uint64_t span =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) return static_cast<Int>(next_u64());  // full 64-bit range
  // largest multiple of span representable, as 2^64 - (2^64 mod span)
  const std::uint64_t limit = -((-span) % span);
  std::uint64_t v = next_u64();
  if (limit != 0) {
    while (v >= limit) v = next_u64();
  }
  return static_cast<Int>(static_cast<std::uint64_t>(lo) + v % span);
}

double Rng::uniform_real() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

}  // namespace nfold
