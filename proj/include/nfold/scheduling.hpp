#pragma once

#include <cstdint>

#include "nfold/instance.hpp"
#include "nfold/rng.hpp"

namespace nfold {

/// Q||Cmax viewed as bin packing with m bins of given capacities and k item
/// types. The N-fold model has N = m + 1 bricks; brick 0 is a penalty
/// machine large enough to hold every job. Per brick the columns are the k
/// job counts followed by one capacity slack. The objective counts jobs left
/// on the penalty machine.
struct SchedulingParams {
  std::size_t m = 10;
  Int min_capacity = 100;  // S
  Int max_capacity = 300;  // L
  IntVector sizes;         // p, distinct, ascending
  IntVector weights;       // draw weights, positive
  double sigma = 0.6;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SchedModel {
  NFoldInstance inst;
  IntVector start;
};

/// Builds the model for explicit capacities (length m) and multiplicities
/// (length k). The start point puts every job on the penalty machine.
SchedModel build_sched_model(const SchedulingParams& params,
                             std::span<const Int> capacities,
                             std::span<const Int> multiplicities);

/// Draws m capacities uniformly from [S, L], then item types with
/// probability w_j / W until the total size exceeds sigma * C (the item that
/// crosses the threshold is kept).
SchedModel gen_sched_instance(const SchedulingParams& params);

std::vector<Int> first_primes(std::size_t count);

struct PrimeSizes {
  IntVector sizes;    // ascending
  IntVector weights;  // sizes reversed
};

/// A random k-subset of the first `ell` primes.
PrimeSizes pick_prime_sizes(std::size_t ell, std::size_t k,
                            std::uint64_t seed);

struct Schedule {
  std::vector<IntVector> counts;  // per machine, per item type
  IntVector unscheduled;          // left on the penalty machine
  IntVector loads;
  IntVector capacities;
};

/// Reads an assignment off a feasible solution of a scheduling model and
/// checks every machine load against its capacity.
Schedule decode_schedule(const NFoldInstance& inst, std::span<const Int> x);

/// Exact minimum number of unscheduled jobs, by a reachability DP over
/// job-usage vectors (bins filled one after another). Throws
/// std::length_error when prod (n_j + 1) exceeds max_states.
Int sched_packing_optimum(std::span<const Int> sizes,
                          std::span<const Int> capacities,
                          std::span<const Int> multiplicities,
                          std::size_t max_states = 20'000'000);

}  // namespace nfold
