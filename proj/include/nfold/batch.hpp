#pragma once

#include <cstdint>
#include <vector>

#include "nfold/instance.hpp"

namespace nfold {

/// Cartesian product of scheduling generator parameters. Every instance gets
/// its own seed: base seed plus its position in the batch.
struct SchedBatch {
  std::vector<std::size_t> machines{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::vector<std::size_t> number_job_types{4};
  std::vector<double> slacks{0.6, 0.7, 0.8};
  std::vector<std::size_t> p_s{5, 6, 7, 8, 9, 10, 11, 12, 13};
  std::size_t count_for_each_p = 3;
  Int min_capacity = 100;
  Int max_capacity = 300;
  std::uint64_t seed = 1;
};

struct CsBatch {
  std::vector<std::size_t> str_len{500, 1000, 2000, 4000, 8000, 16000};
  std::vector<std::size_t> str_num{3, 4, 5, 6};
  std::vector<Int> ratio{2, 3, 4, 7, 10, 15};
  std::vector<std::size_t> sigma{2, 3, 4, 5};
  std::vector<double> distance_factor{0.1, 0.15, 0.2, 0.25, 0.3, 0.5, 0.7};
  std::uint64_t seed = 1;
};

std::vector<NFoldInstance> generate_sched_batch(const SchedBatch& batch);
std::vector<NFoldInstance> generate_cs_batch(const CsBatch& batch);

}  // namespace nfold
