#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nfold/augip.hpp"
#include "nfold/instance.hpp"

namespace nfold {

enum class Strategy { any, best, c_apx };

struct SolverConfig {
  Int gc = 4;
  Strategy strategy = Strategy::c_apx;
  Int c = 2;  // base of the step-length powers, c_apx only
  std::optional<std::int64_t> inner_time_budget_ms;
  std::optional<std::size_t> max_outer_iters;
  std::uint64_t seed = 0;  // logged only; the solver is deterministic
  // Query every lambda of the schedule instead of stopping at the first one
  // without an augmenting step.
  bool scan_full_schedule = false;
  std::size_t state_cap = 50'000'000;

  void validate() const;
};

/// "unit" -> any, "best" -> best, "logC" -> c_apx with base C.
SolverConfig config_for_gamma(const std::string& gamma, Int gc);
std::string gamma_name(const SolverConfig& cfg);

struct InnerRecord {
  std::size_t outer_iter = 0;  // 1-based outer iteration this query belongs to
  std::size_t inner_iter = 0;  // 1-based, counted over the whole run
  Int lambda = 0;              // step length queried
  Int lambda_exhausted = 0;    // 0 when the query found no augmenting step
  Int step_cost = 0;           // w (lambda' h), 0 when nothing was found
  Int objective = 0;           // objective if this step were applied
  bool chosen = false;
  double elapsed_ms = 0;  // since the start of the run
  bool early_terminated = false;

  friend bool operator==(const InnerRecord&, const InnerRecord&) = default;
};

struct OuterRecord {
  std::size_t outer_iter = 0;
  Int objective_after = 0;

  friend bool operator==(const OuterRecord&, const OuterRecord&) = default;
};

enum class StopReason { no_augmenting_step, outer_limit, time_budget };

struct RunSummary {
  Int start_objective = 0;
  Int final_objective = 0;
  std::size_t outer_iters = 0;
  std::size_t inner_iters = 0;
  double total_ms = 0;
  StopReason stop = StopReason::no_augmenting_step;
};

struct RunLog {
  std::vector<InnerRecord> inner;
  std::vector<OuterRecord> outer;
  RunSummary summary;
};

std::string to_string(StopReason reason);

/// Raised when a solver error interrupts the outer loop; the log holds every
/// iteration completed before the failure.
class AugmentAborted : public NFoldError {
 public:
  AugmentAborted(const std::string& what, RunLog partial)
      : NFoldError(what), partial_(std::move(partial)) {}
  const RunLog& partial_log() const { return partial_; }

 private:
  RunLog partial_;
};

/// max_j (u_j - l_j), at least 1: no nonzero step pair can be longer.
Int max_step_length(const NFoldInstance& inst);

/// any -> [1]; c_apx -> [1, c, c^2, ..., c^K] with c^K <= lambda_max;
/// best -> [1, 2, ..., lambda_max].
std::vector<Int> schedule_lambdas(const SolverConfig& cfg,
                                  const NFoldInstance& inst,
                                  std::span<const Int> x);

/// The inner loop: query the step lengths of the schedule in order, exhaust
/// every direction found, and return the candidate with the smallest total
/// cost (the smallest lambda wins ties). Stops at the first lambda without an
/// augmenting step unless cfg.scan_full_schedule is set. Appends one record
/// per query to `records` when given (outer_iter/inner_iter left 0).
std::optional<StepCandidate> approx_best_step(
    const SolverConfig& cfg, const NFoldInstance& inst,
    std::span<const Int> x, std::vector<InnerRecord>* records = nullptr);

struct AugmentResult {
  IntVector x;
  RunLog log;
};

/// The outer loop: apply inner-loop steps until none is found.
AugmentResult augment_to_optimum(const SolverConfig& cfg,
                                 const NFoldInstance& inst,
                                 std::span<const Int> x0);

}  // namespace nfold
