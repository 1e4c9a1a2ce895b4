#pragma once

#include <variant>

#include "nfold/instance.hpp"

namespace nfold {

/// Auxiliary instance whose optimum-0 solutions are feasible for the
/// original. Column layout per brick of the extended instance:
///
///   [0, t)              original columns
///   [t, t+s)            brick slacks, +residual
///   [t+s, t+2s)         brick slacks, -residual
///   [t+2s, t+2s+r)      global slacks, +residual (nonzero in brick 0 only)
///   [t+2s+r, t+2s+2r)   global slacks, -residual (nonzero in brick 0 only)
struct Phase1Instance {
  NFoldInstance original;
  NFoldInstance extended;
  IntVector anchor;
  std::size_t original_t = 0;
  Int slack_bound = 0;

  std::size_t pos_brick_slack(std::size_t k) const { return original_t + k; }
  std::size_t neg_brick_slack(std::size_t k) const;
  std::size_t pos_global_slack(std::size_t k) const;
  std::size_t neg_global_slack(std::size_t k) const;
};

struct Phase1Build {
  Phase1Instance p1;
  IntVector start;
};

Phase1Build build_phase1(const NFoldInstance& inst);

struct Phase1Found {
  IntVector x;
};

/// Slack left at the end of phase 1. Only an infeasibility proof when the
/// augmentation ran with gc >= g1 of the extended matrix.
struct Phase1NotFound {
  Int residual = 0;
};

using Phase1Outcome = std::variant<Phase1Found, Phase1NotFound>;

Phase1Outcome extract_feasible(const Phase1Instance& p1,
                               std::span<const Int> x_ext);

}  // namespace nfold
