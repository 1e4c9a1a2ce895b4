#include "nfold/batch.hpp"

#include <algorithm>

#include "nfold/closest_string.hpp"
#include "nfold/scheduling.hpp"

namespace nfold {

std::vector<NFoldInstance> generate_sched_batch(const SchedBatch& batch) {
  for (std::size_t k : batch.number_job_types) {
    for (std::size_t ell : batch.p_s) {
      if (k > ell) {
        throw FormatError("max number_job_types must not exceed min p_s");
      }
    }
  }
  std::vector<NFoldInstance> out;
  std::uint64_t seed = batch.seed;
  for (std::size_t m : batch.machines) {
    for (std::size_t k : batch.number_job_types) {
      for (double sigma : batch.slacks) {
        for (std::size_t ell : batch.p_s) {
          for (std::size_t rep = 0; rep < batch.count_for_each_p; ++rep) {
            const PrimeSizes ps = pick_prime_sizes(ell, k, seed);
            SchedulingParams params;
            params.m = m;
            params.min_capacity = batch.min_capacity;
            params.max_capacity = batch.max_capacity;
            params.sizes = ps.sizes;
            params.weights = ps.weights;
            params.sigma = sigma;
            params.seed = seed;
            SchedModel model = gen_sched_instance(params);
            model.inst.meta["p_s"] = ell;
            out.push_back(std::move(model.inst));
            ++seed;
          }
        }
      }
    }
  }
  return out;
}

std::vector<NFoldInstance> generate_cs_batch(const CsBatch& batch) {
  std::vector<NFoldInstance> out;
  std::uint64_t seed = batch.seed;
  for (std::size_t len : batch.str_len) {
    for (std::size_t k : batch.str_num) {
      for (Int r : batch.ratio) {
        for (std::size_t sigma : batch.sigma) {
          for (double delta : batch.distance_factor) {
            ClosestStringParams params;
            params.k = k;
            params.length = len;
            params.alphabet_size = sigma;
            params.ratio = r;
            params.distance_factor = delta;
            params.seed = seed++;
            out.push_back(gen_cs_instance(params).model.inst);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace nfold
