#include "nfold/augment.hpp"

#include <algorithm>
#include <chrono>

namespace nfold {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

}  // namespace

void SolverConfig::validate() const {
  if (gc < 1) throw NFoldError("gc must be >= 1");
  if (strategy == Strategy::c_apx && c < 2) {
    throw NFoldError("c-approximate strategy needs c >= 2");
  }
}

SolverConfig config_for_gamma(const std::string& gamma, Int gc) {
  SolverConfig cfg;
  cfg.gc = gc;
  if (gamma == "unit") {
    cfg.strategy = Strategy::any;
  } else if (gamma == "best") {
    cfg.strategy = Strategy::best;
  } else if (gamma.starts_with("log") && gamma.size() > 3) {
    cfg.strategy = Strategy::c_apx;
    try {
      std::size_t used = 0;
      cfg.c = std::stoll(gamma.substr(3), &used);
      if (used != gamma.size() - 3) throw std::invalid_argument(gamma);
    } catch (const std::exception&) {
      throw NFoldError("unknown gamma \"" + gamma + "\"");
    }
  } else {
    throw NFoldError("unknown gamma \"" + gamma + "\"");
  }
  cfg.validate();
  return cfg;
}

std::string gamma_name(const SolverConfig& cfg) {
  switch (cfg.strategy) {
    case Strategy::any:
      return "unit";
    case Strategy::best:
      return "best";
    case Strategy::c_apx:
      return "log" + std::to_string(cfg.c);
  }
  return "?";
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::no_augmenting_step:
      return "no_augmenting_step";
    case StopReason::outer_limit:
      return "outer_limit";
    case StopReason::time_budget:
      return "time_budget";
  }
  return "?";
}

Int max_step_length(const NFoldInstance& inst) {
  Int widest = 1;
  for (std::size_t j = 0; j < inst.dimension(); ++j) {
    widest = std::max(widest, checked_sub(inst.upper[j], inst.lower[j]));
  }
  return widest;
}

std::vector<Int> schedule_lambdas(const SolverConfig& cfg,
                                  const NFoldInstance& inst,
                                  std::span<const Int> /*x*/) {
  cfg.validate();
  const Int lambda_max = max_step_length(inst);
  std::vector<Int> out;
  switch (cfg.strategy) {
    case Strategy::any:
      out.push_back(1);
      break;
    case Strategy::best:
      for (Int l = 1; l <= lambda_max; ++l) out.push_back(l);
      break;
    case Strategy::c_apx:
      for (Int l = 1; l <= lambda_max;) {
        out.push_back(l);
        if (l > lambda_max / cfg.c) break;
        l *= cfg.c;
      }
      break;
  }
  return out;
}

std::optional<StepCandidate> approx_best_step(const SolverConfig& cfg,
                                              const NFoldInstance& inst,
                                              std::span<const Int> x,
                                              std::vector<InnerRecord>* records) {
  const auto start = Clock::now();
  const Int current = objective(inst, x);
  const std::size_t first_record = records ? records->size() : 0;
  std::optional<StepCandidate> best;
  std::size_t best_record = 0;

  auto record = [&](Int lambda, const StepCandidate* c, bool early) {
    if (!records) return;
    InnerRecord rec;
    rec.lambda = lambda;
    if (c) {
      rec.lambda_exhausted = c->lambda;
      rec.step_cost = c->total_cost;
    }
    rec.objective = checked_add(current, rec.step_cost);
    rec.elapsed_ms = ms_since(start);
    rec.early_terminated = early;
    records->push_back(rec);
  };

  AugQuery q;
  q.inst = &inst;
  q.x.assign(x.begin(), x.end());
  q.gc = cfg.gc;
  q.state_cap = cfg.state_cap;

  for (Int lambda : schedule_lambdas(cfg, inst, x)) {
    q.lambda = lambda;
    if (cfg.inner_time_budget_ms) {
      const auto left =
          *cfg.inner_time_budget_ms - static_cast<std::int64_t>(ms_since(start));
      if (left <= 0 && best) {
        if (records) records->back().early_terminated = true;
        break;
      }
      q.time_budget_ms = std::max<std::int64_t>(left, 0);
    }

    std::optional<StepCandidate> found;
    try {
      found = solve_augip(q);
    } catch (const BudgetExceeded&) {
      record(lambda, nullptr, true);
      if (!best) throw;
      break;
    }
    if (!found) {
      record(lambda, nullptr, false);
      if (!cfg.scan_full_schedule) break;
      continue;
    }
    found->lambda = exhaust_direction(inst, x, found->h, lambda);
    found->total_cost = checked_mul(found->lambda, found->cost_per_unit);
    record(lambda, &*found, false);
    if (!best || found->total_cost < best->total_cost) {
      best = std::move(found);
      best_record = records ? records->size() - 1 : 0;
    }
  }

  if (best && records && best_record >= first_record) {
    (*records)[best_record].chosen = true;
  }
  return best;
}

AugmentResult augment_to_optimum(const SolverConfig& cfg,
                                 const NFoldInstance& inst,
                                 std::span<const Int> x0) {
  cfg.validate();
  if (!is_feasible(inst, x0)) {
    throw NFoldError("augment_to_optimum: start point is not feasible");
  }
  const auto start = Clock::now();
  AugmentResult res;
  res.x.assign(x0.begin(), x0.end());
  RunLog& log = res.log;
  Int value = objective(inst, res.x);
  log.summary.start_objective = value;

  auto finish = [&](StopReason reason) {
    log.summary.final_objective = value;
    log.summary.outer_iters = log.outer.size();
    log.summary.inner_iters = log.inner.size();
    log.summary.total_ms = ms_since(start);
    log.summary.stop = reason;
  };

  while (true) {
    if (cfg.max_outer_iters && log.outer.size() >= *cfg.max_outer_iters) {
      finish(StopReason::outer_limit);
      break;
    }
    const std::size_t outer_iter = log.outer.size() + 1;
    const double offset = ms_since(start);
    std::vector<InnerRecord> records;
    std::optional<StepCandidate> step;
    bool out_of_time = false;
    try {
      step = approx_best_step(cfg, inst, res.x, &records);
    } catch (const BudgetExceeded&) {
      out_of_time = true;
    } catch (const NFoldError& e) {
      finish(StopReason::no_augmenting_step);
      throw AugmentAborted(e.what(), log);
    }
    for (InnerRecord& rec : records) {
      rec.outer_iter = outer_iter;
      rec.inner_iter = log.inner.size() + 1;
      rec.elapsed_ms += offset;
      log.inner.push_back(rec);
    }
    if (out_of_time) {
      finish(StopReason::time_budget);
      break;
    }
    if (!step) {
      finish(StopReason::no_augmenting_step);
      break;
    }

    check_candidate(inst, res.x, *step, cfg.gc);
    for (std::size_t j = 0; j < res.x.size(); ++j) {
      res.x[j] = checked_add(res.x[j], checked_mul(step->lambda, step->h[j]));
    }
    const Int next = objective(inst, res.x);
    if (!is_feasible(inst, res.x) || next >= value) {
      finish(StopReason::no_augmenting_step);
      throw AugmentAborted("applied step broke feasibility or did not improve",
                           log);
    }
    value = next;
    log.outer.push_back({outer_iter, value});
  }
  return res;
}

}  // namespace nfold
