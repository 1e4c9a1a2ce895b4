#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "nfold/arith.hpp"
#include "nfold/matrix.hpp"

namespace nfold {

/// An N-fold integer program
///
///   min { w x : E^(N) x = b, l <= x <= u, x integer }
///
/// where E^(N) stacks one row block of N copies of E1 (the global rows) over
/// a block diagonal of N copies of E2 (the brick rows). The vector b keeps the
/// r global right-hand sides first, followed by s entries per brick.
/// E^(N) itself is never stored.
struct NFoldInstance {
  IntMatrix e1;  // r x t
  IntMatrix e2;  // s x t
  std::size_t bricks = 0;
  IntVector b;      // r + N*s
  IntVector lower;  // N*t
  IntVector upper;  // N*t
  IntVector weights;  // N*t
  std::string id;
  nlohmann::json meta = nlohmann::json::object();
  std::optional<IntVector> start;  // known feasible point, if any

  std::size_t r() const { return e1.rows(); }
  std::size_t s() const { return e2.rows(); }
  std::size_t t() const { return e1.cols(); }
  std::size_t dimension() const { return bricks * t(); }
  std::size_t row_count() const { return r() + bricks * s(); }

  // Largest absolute coefficient of E1 and E2.
  Int max_coefficient() const;
  // 1 + max(||E1||_inf, ||E2||_inf)
  Int delta() const { return 1 + max_coefficient(); }

  std::span<const Int> global_rhs() const { return {b.data(), r()}; }
  std::span<const Int> brick_rhs(std::size_t i) const {
    return {b.data() + r() + i * s(), s()};
  }

  // Throws DimensionError / FormatError when the shape or bounds are broken.
  void validate() const;
};

std::span<const Int> brick_of(const NFoldInstance& inst,
                              std::span<const Int> v, std::size_t i);

/// (E1 * sum_i v^i, E2 v^1, ..., E2 v^N), computed brick by brick.
IntVector apply_nfold(const NFoldInstance& inst, std::span<const Int> v);

bool within_bounds(const NFoldInstance& inst, std::span<const Int> x);
bool is_feasible(const NFoldInstance& inst, std::span<const Int> x);
Int objective(const NFoldInstance& inst, std::span<const Int> x);

/// Explicit (r + N s) x (N t) matrix. Test oracles and Graver computations
/// on tiny instances only.
IntMatrix materialize(const NFoldInstance& inst);

}  // namespace nfold
