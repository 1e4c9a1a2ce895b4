#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "nfold/arith.hpp"
#include "nfold/instance.hpp"

namespace nfold {

/// One augmentation subproblem
///
///   min { w h : E^(N) h = 0, l <= x + lambda h <= u, ||h||_1 <= gc }.
struct AugQuery {
  const NFoldInstance* inst = nullptr;
  IntVector x;
  Int lambda = 1;
  Int gc = 1;
  std::optional<std::int64_t> time_budget_ms;
  std::size_t state_cap = 50'000'000;  // per DP layer
};

/// A direction h with its (possibly exhausted) step length.
struct StepCandidate {
  IntVector h;
  Int lambda = 1;
  Int cost_per_unit = 0;  // w h
  Int total_cost = 0;     // w (lambda h)
  Int l1 = 0;             // ||h||_1
};

/// Raised when the wall-clock budget of a query runs out. Carries the best
/// candidate available at that point, which for a single DP solve is none.
class BudgetExceeded : public NFoldError {
 public:
  explicit BudgetExceeded(std::optional<StepCandidate> best = std::nullopt)
      : NFoldError("augmentation time budget exceeded"),
        best_(std::move(best)) {}
  const std::optional<StepCandidate>& best() const { return best_; }

 private:
  std::optional<StepCandidate> best_;
};

class StateCapExceeded : public NFoldError {
 public:
  using NFoldError::NFoldError;
};

/// Range of h_j allowed by the box at step length lambda:
/// [ceil((l_j - x_j)/lambda), floor((u_j - x_j)/lambda)].
std::pair<Int, Int> step_range(const NFoldInstance& inst,
                               std::span<const Int> x, Int lambda,
                               std::size_t j);

/// Exact minimizer of the augmentation subproblem by dynamic programming
/// over coordinates in brick-major order. The state after a coordinate is
/// (running E1 sum, running E2 sum inside the current brick, remaining l1
/// budget). Among minimizers, the one with smallest ||h||_1 and then the
/// lexicographically smallest h is returned. Returns nullopt iff the optimum
/// is >= 0.
std::optional<StepCandidate> solve_augip(const AugQuery& q);

/// Largest lambda' >= lambda with x + lambda' h still inside the box.
Int exhaust_direction(const NFoldInstance& inst, std::span<const Int> x,
                      std::span<const Int> h, Int lambda);

/// Checks kernel membership, box feasibility at candidate.lambda and the
/// l1 budget; throws NFoldError describing the first violated invariant.
void check_candidate(const NFoldInstance& inst, std::span<const Int> x,
                     const StepCandidate& c, Int gc);

/// LP text model of the query. Every h_j is split into h_i_j_p - h_i_j_n
/// with bounds derived from the box, so the model has r + N s equality rows
/// and one l1 budget row.
std::string augip_lp_text(const AugQuery& q);
std::string augip_lp_filename(const AugQuery& q);
void export_augip_lp(const AugQuery& q, const std::filesystem::path& path);

}  // namespace nfold
