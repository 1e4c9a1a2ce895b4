#pragma once

#include <optional>

#include "nfold/augip.hpp"
#include "nfold/instance.hpp"

namespace nfold {

struct OracleBudget {
  std::size_t max_points = 10'000'000;
};

class OracleCapExceeded : public NFoldError {
 public:
  using NFoldError::NFoldError;
};

enum class OracleStatus { optimal, infeasible };

struct OracleResult {
  OracleStatus status = OracleStatus::infeasible;
  IntVector x;  // lexicographically smallest minimizer
  Int value = 0;
};

/// Exhaustive search of the box, brick by brick: per brick only points
/// satisfying its own rows are combined. Throws OracleCapExceeded once more
/// than budget.max_points points have been visited.
OracleResult brute_force_optimum(const NFoldInstance& inst,
                                 OracleBudget budget = {});

/// Exhaustive search of the l1 ball of radius gc, with the same tie-breaking
/// as solve_augip. Throws OracleCapExceeded after budget.max_points visited
/// vectors.
std::optional<StepCandidate> brute_force_augip(const AugQuery& q,
                                               OracleBudget budget = {});

}  // namespace nfold
