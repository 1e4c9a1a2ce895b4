#include "nfold/scheduling.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace nfold {

void SchedulingParams::validate() const {
  if (m == 0) throw FormatError("scheduling needs at least one machine");
  if (sizes.empty()) throw FormatError("scheduling needs at least one size");
  if (weights.size() != sizes.size()) {
    throw DimensionError("sizes and weights differ in length");
  }
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    if (sizes[j] <= 0) throw FormatError("item sizes must be positive");
    if (weights[j] <= 0) throw FormatError("item weights must be positive");
    if (j > 0 && sizes[j] <= sizes[j - 1]) {
      throw FormatError("item sizes must be distinct and ascending");
    }
  }
  if (min_capacity < 0 || min_capacity > max_capacity) {
    throw FormatError("capacity range must satisfy 0 <= S <= L");
  }
  if (!(sigma > 0.0 && sigma <= 1.0)) {
    throw FormatError("slack ratio must lie in (0, 1]");
  }
}

SchedModel build_sched_model(const SchedulingParams& params,
                             std::span<const Int> capacities,
                             std::span<const Int> multiplicities) {
  params.validate();
  const std::size_t k = params.sizes.size();
  const std::size_t m = params.m;
  if (capacities.size() != m) {
    throw DimensionError("expected " + std::to_string(m) + " capacities");
  }
  if (multiplicities.size() != k) {
    throw DimensionError("expected " + std::to_string(k) + " multiplicities");
  }
  for (Int c : capacities) {
    if (c < 0) throw FormatError("capacities must be nonnegative");
  }
  Int n = 0;
  for (Int v : multiplicities) {
    if (v < 0) throw FormatError("multiplicities must be nonnegative");
    n = checked_add(n, v);
  }
  const Int pmax = params.sizes.back();
  const Int penalty_cap = checked_mul(n, pmax);

  const std::size_t t = k + 1;
  NFoldInstance inst;
  inst.e1 = IntMatrix(k, t);
  inst.e2 = IntMatrix(1, t);
  for (std::size_t j = 0; j < k; ++j) {
    inst.e1(j, j) = 1;
    inst.e2(0, j) = params.sizes[j];
  }
  inst.e2(0, k) = 1;
  inst.bricks = m + 1;
  inst.b.assign(multiplicities.begin(), multiplicities.end());
  inst.b.push_back(penalty_cap);
  inst.b.insert(inst.b.end(), capacities.begin(), capacities.end());
  inst.lower.assign(inst.bricks * t, 0);
  inst.upper.assign(inst.bricks * t, 0);
  inst.weights.assign(inst.bricks * t, 0);
  for (std::size_t i = 0; i < inst.bricks; ++i) {
    for (std::size_t j = 0; j < k; ++j) inst.upper[i * t + j] = multiplicities[j];
    inst.upper[i * t + k] = inst.b[k + i];
  }
  for (std::size_t j = 0; j < k; ++j) inst.weights[j] = 1;

  SchedModel out;
  out.start.assign(inst.bricks * t, 0);
  Int load = 0;
  for (std::size_t j = 0; j < k; ++j) {
    out.start[j] = multiplicities[j];
    load = checked_add(load, checked_mul(multiplicities[j], params.sizes[j]));
  }
  out.start[k] = penalty_cap - load;
  for (std::size_t i = 1; i < inst.bricks; ++i) {
    out.start[i * t + k] = capacities[i - 1];
  }

  inst.id = "sched_m" + std::to_string(m) + "_k" + std::to_string(k) +
            "_seed" + std::to_string(params.seed);
  inst.meta = {{"generator", "sched"},
               {"m", m},
               {"S", params.min_capacity},
               {"L", params.max_capacity},
               {"sizes", params.sizes},
               {"weights", params.weights},
               {"sigma", params.sigma},
               {"seed", params.seed},
               {"capacities", IntVector(capacities.begin(), capacities.end())},
               {"multiplicities",
                IntVector(multiplicities.begin(), multiplicities.end())}};
  inst.start = out.start;
  inst.validate();
  if (!is_feasible(inst, out.start)) {
    throw NFoldError("scheduling start point is infeasible");
  }
  out.inst = std::move(inst);
  return out;
}

SchedModel gen_sched_instance(const SchedulingParams& params) {
  params.validate();
  Rng rng(params.seed);
  IntVector caps(params.m);
  Int total_cap = 0;
  for (Int& c : caps) {
    c = rng.uniform_int(params.min_capacity, params.max_capacity);
    total_cap = checked_add(total_cap, c);
  }
  const std::size_t k = params.sizes.size();
  Int weight_sum = 0;
  for (Int w : params.weights) weight_sum = checked_add(weight_sum, w);
  const double target = params.sigma * static_cast<double>(total_cap);

  IntVector counts(k, 0);
  Int total = 0;
  do {
    Int pick = rng.uniform_int(1, weight_sum);
    std::size_t j = 0;
    while (pick > params.weights[j]) pick -= params.weights[j++];
    ++counts[j];
    total = checked_add(total, params.sizes[j]);
  } while (static_cast<double>(total) <= target);
  return build_sched_model(params, caps, counts);
}

std::vector<Int> first_primes(std::size_t count) {
  std::vector<Int> primes;
  for (Int c = 2; primes.size() < count; ++c) {
    bool prime = true;
    for (Int p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

PrimeSizes pick_prime_sizes(std::size_t ell, std::size_t k,
                            std::uint64_t seed) {
  if (k > ell) {
    throw FormatError("cannot pick " + std::to_string(k) +
                      " sizes from the first " + std::to_string(ell) +
                      " primes");
  }
  if (k == 0) throw FormatError("need at least one job type");
  std::vector<Int> pool = first_primes(ell);
  Rng rng(seed);
  // partial Fisher-Yates: the first k slots end up a uniform k-subset
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(static_cast<Int>(i), static_cast<Int>(ell - 1)));
    std::swap(pool[i], pool[j]);
  }
  PrimeSizes out;
  out.sizes.assign(pool.begin(), pool.begin() + static_cast<long>(k));
  std::sort(out.sizes.begin(), out.sizes.end());
  out.weights.assign(out.sizes.rbegin(), out.sizes.rend());
  return out;
}

Schedule decode_schedule(const NFoldInstance& inst, std::span<const Int> x) {
  const std::size_t t = inst.t();
  if (t < 2 || inst.s() != 1 || inst.r() != t - 1 || inst.bricks < 1) {
    throw DimensionError("not a scheduling model");
  }
  if (!is_feasible(inst, x)) {
    throw NFoldError("cannot decode an infeasible schedule");
  }
  const std::size_t k = t - 1;
  Schedule out;
  out.unscheduled.assign(x.begin(), x.begin() + static_cast<long>(k));
  for (std::size_t i = 1; i < inst.bricks; ++i) {
    IntVector counts(x.begin() + static_cast<long>(i * t),
                     x.begin() + static_cast<long>(i * t + k));
    Int load = 0;
    for (std::size_t j = 0; j < k; ++j) {
      load = checked_add(load, checked_mul(counts[j], inst.e2(0, j)));
    }
    const Int cap = inst.brick_rhs(i)[0];
    if (load > cap) {
      throw NFoldError("machine " + std::to_string(i) + " load " +
                       std::to_string(load) + " exceeds capacity " +
                       std::to_string(cap));
    }
    out.counts.push_back(std::move(counts));
    out.loads.push_back(load);
    out.capacities.push_back(cap);
  }
  return out;
}

Int sched_packing_optimum(std::span<const Int> sizes,
                          std::span<const Int> capacities,
                          std::span<const Int> multiplicities,
                          std::size_t max_states) {
  const std::size_t k = sizes.size();
  if (multiplicities.size() != k) {
    throw DimensionError("sizes and multiplicities differ in length");
  }
  std::vector<std::size_t> stride(k);
  std::size_t states = 1;
  for (std::size_t j = 0; j < k; ++j) {
    stride[j] = states;
    const auto radix = static_cast<std::size_t>(multiplicities[j]) + 1;
    if (states > max_states / radix) {
      throw std::length_error("packing oracle state space too large");
    }
    states *= radix;
  }
  // best[u]: largest capacity left in the current bin over all ways to have
  // packed usage vector u so far; -1 when u is unreachable.
  std::vector<Int> best(states, -1);
  std::vector<char> reach(states, 0);
  reach[0] = 1;
  IntVector usage(k, 0);
  for (Int cap : capacities) {
    for (std::size_t code = 0; code < states; ++code) {
      best[code] = reach[code] ? cap : -1;
    }
    std::fill(usage.begin(), usage.end(), 0);
    for (std::size_t code = 0; code < states; ++code) {
      for (std::size_t j = 0; j < k; ++j) {
        if (usage[j] == 0) continue;
        const Int prev = best[code - stride[j]];
        if (prev >= sizes[j]) best[code] = std::max(best[code], prev - sizes[j]);
      }
      // advance the mixed-radix counter
      for (std::size_t j = 0; j < k; ++j) {
        if (usage[j] < multiplicities[j]) {
          ++usage[j];
          break;
        }
        usage[j] = 0;
      }
    }
    for (std::size_t code = 0; code < states; ++code) {
      reach[code] = best[code] >= 0;
    }
  }
  Int total = 0;
  for (Int v : multiplicities) total += v;
  Int packed = 0;
  std::fill(usage.begin(), usage.end(), 0);
  for (std::size_t code = 0; code < states; ++code) {
    if (reach[code]) {
      packed = std::max(packed, std::accumulate(usage.begin(), usage.end(),
                                                Int{0}));
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (usage[j] < multiplicities[j]) {
        ++usage[j];
        break;
      }
      usage[j] = 0;
    }
  }
  return total - packed;
}

}  // namespace nfold
