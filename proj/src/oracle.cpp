#include "nfold/oracle.hpp"

#include <limits>

namespace nfold {

namespace {

// Enumerates the box brick by brick. Each brick contributes only points that
// already satisfy its own E2 rows; the global rows are checked at the leaves.
class BoxSearch {
 public:
  BoxSearch(const NFoldInstance& inst, OracleBudget budget)
      : inst_(inst), budget_(budget) {}

  OracleResult run() {
    for (std::size_t i = 0; i < inst_.bricks; ++i) bricks_.push_back(brick_points(i));
    cur_.assign(inst_.dimension(), 0);
    dfs(0, IntVector(inst_.r(), 0), 0);
    OracleResult out;
    if (found_) {
      out.status = OracleStatus::optimal;
      out.x = best_x_;
      out.value = best_;
    }
    return out;
  }

 private:
  std::vector<IntVector> brick_points(std::size_t i) {
    const std::size_t t = inst_.t();
    std::vector<IntVector> pts;
    IntVector v(t);
    for (std::size_t j = 0; j < t; ++j) v[j] = inst_.lower[i * t + j];
    const auto rhs = inst_.brick_rhs(i);
    while (true) {
      count();
      bool ok = true;
      for (std::size_t k = 0; k < inst_.s() && ok; ++k) {
        ok = dot(inst_.e2.row(k), v) == rhs[k];
      }
      if (ok) pts.push_back(v);
      // lexicographic successor, last coordinate fastest
      std::size_t j = t;
      while (j > 0) {
        --j;
        if (v[j] < inst_.upper[i * t + j]) {
          ++v[j];
          break;
        }
        v[j] = inst_.lower[i * t + j];
        if (j == 0) return pts;
      }
      if (t == 0) return pts;
    }
  }

  void count() {
    if (++visited_ > budget_.max_points) {
      throw OracleCapExceeded("box enumeration exceeded " +
                              std::to_string(budget_.max_points) + " points");
    }
  }

  void dfs(std::size_t brick, IntVector rho, Int cost) {
    const std::size_t t = inst_.t();
    count();
    if (brick == inst_.bricks) {
      for (std::size_t k = 0; k < inst_.r(); ++k) {
        if (rho[k] != inst_.b[k]) return;
      }
      if (!found_ || cost < best_) {
        found_ = true;
        best_ = cost;
        best_x_ = cur_;
      }
      return;
    }
    for (const IntVector& p : bricks_[brick]) {
      IntVector next = rho;
      for (std::size_t k = 0; k < inst_.r(); ++k) {
        next[k] = checked_add(next[k], dot(inst_.e1.row(k), p));
      }
      Int c = cost;
      for (std::size_t j = 0; j < t; ++j) {
        cur_[brick * t + j] = p[j];
        c = checked_add(c, checked_mul(inst_.weights[brick * t + j], p[j]));
      }
      dfs(brick + 1, std::move(next), c);
    }
  }

  const NFoldInstance& inst_;
  OracleBudget budget_;
  std::size_t visited_ = 0;
  std::vector<std::vector<IntVector>> bricks_;
  IntVector cur_;
  bool found_ = false;
  Int best_ = 0;
  IntVector best_x_;
};

class BallSearch {
 public:
  BallSearch(const AugQuery& q, OracleBudget budget)
      : q_(q), inst_(*q.inst), budget_(budget) {}

  std::optional<StepCandidate> run() {
    const std::size_t n = inst_.dimension();
    lo_.resize(n);
    hi_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      std::tie(lo_[j], hi_[j]) = step_range(inst_, q_.x, q_.lambda, j);
    }
    h_.assign(n, 0);
    rec(0, q_.gc);
    if (!best_) return std::nullopt;
    StepCandidate out;
    out.h = *best_;
    out.lambda = q_.lambda;
    out.cost_per_unit = dot(inst_.weights, out.h);
    out.total_cost = checked_mul(out.lambda, out.cost_per_unit);
    out.l1 = l1_norm(out.h);
    return out;
  }

 private:
  void rec(std::size_t j, Int budget) {
    if (j == h_.size()) {
      if (++visited_ > budget_.max_points) {
        throw OracleCapExceeded("l1-ball enumeration exceeded the point cap");
      }
      consider();
      return;
    }
    // ascending values give lexicographic order of the enumeration
    const Int a = std::max(lo_[j], -budget);
    const Int b = std::min(hi_[j], budget);
    for (Int v = a; v <= b; ++v) {
      h_[j] = v;
      rec(j + 1, budget - (v < 0 ? -v : v));
    }
    h_[j] = 0;
  }

  void consider() {
    const Int cost = dot(inst_.weights, h_);
    if (cost >= 0) return;
    if (!is_zero(apply_nfold(inst_, h_))) return;
    const Int l1 = l1_norm(h_);
    // strict improvement only: the first vector seen wins lexicographic ties
    if (!best_ || cost < best_cost_ || (cost == best_cost_ && l1 < best_l1_)) {
      best_ = h_;
      best_cost_ = cost;
      best_l1_ = l1;
    }
  }

  const AugQuery& q_;
  const NFoldInstance& inst_;
  OracleBudget budget_;
  IntVector lo_, hi_, h_;
  std::size_t visited_ = 0;
  std::optional<IntVector> best_;
  Int best_cost_ = 0;
  Int best_l1_ = 0;
};

}  // namespace

OracleResult brute_force_optimum(const NFoldInstance& inst,
                                 OracleBudget budget) {
  inst.validate();
  return BoxSearch(inst, budget).run();
}

std::optional<StepCandidate> brute_force_augip(const AugQuery& q,
                                               OracleBudget budget) {
  if (q.inst == nullptr) throw NFoldError("query without instance");
  if (q.lambda < 1) throw NFoldError("step length must be positive");
  if (!is_feasible(*q.inst, q.x)) throw NFoldError("query point is infeasible");
  if (q.gc <= 0) return std::nullopt;
  return BallSearch(q, budget).run();
}

}  // namespace nfold
