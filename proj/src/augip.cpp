#include "nfold/augip.hpp"

#include <algorithm>
#include <limits>

namespace nfold {

namespace {

using Clock = std::chrono::steady_clock;
using Key = std::uint64_t;

constexpr Int kUnreachable = std::numeric_limits<Int>::max();

// Mixed-radix packing of (rho, sigma, beta) into one 64-bit key. beta is the
// least significant digit so that states sharing (rho, sigma) are adjacent
// after sorting, ordered by remaining budget.
class StateCodec {
 public:
  StateCodec(std::vector<Int> lo, std::vector<Int> hi)
      : lo_(std::move(lo)), hi_(std::move(hi)), mult_(lo_.size()) {
    unsigned __int128 span = 1;
    for (std::size_t d = lo_.size(); d-- > 0;) {
      mult_[d] = static_cast<Key>(span);
      span *= static_cast<unsigned __int128>(hi_[d] - lo_[d] + 1);
      if (span > std::numeric_limits<Key>::max()) {
        throw StateCapExceeded(
            "DP state space too wide to index; lower gc");
      }
    }
  }

  std::size_t width() const { return lo_.size(); }
  Int lo(std::size_t d) const { return lo_[d]; }
  Int hi(std::size_t d) const { return hi_[d]; }
  Key mult(std::size_t d) const { return mult_[d]; }

  bool in_range(std::span<const Int> v) const {
    for (std::size_t d = 0; d < v.size(); ++d) {
      if (v[d] < lo_[d] || v[d] > hi_[d]) return false;
    }
    return true;
  }

  Key encode(std::span<const Int> v) const {
    Key k = 0;
    for (std::size_t d = 0; d < v.size(); ++d) {
      k += static_cast<Key>(v[d] - lo_[d]) * mult_[d];
    }
    return k;
  }

  void decode(Key k, std::span<Int> v) const {
    for (std::size_t d = 0; d < v.size(); ++d) {
      v[d] = static_cast<Int>(k / mult_[d]) + lo_[d];
      k %= mult_[d];
    }
  }

  // key with the least significant (budget) digit dropped
  Key group(Key k) const { return k / static_cast<Key>(hi_.back() + 1); }

 private:
  std::vector<Int> lo_, hi_;
  std::vector<Key> mult_;
};

struct ActiveCoord {
  std::size_t index;  // global coordinate
  std::size_t brick;
  std::size_t column;  // within the brick
  Int lo, hi;
  Int weight;
};

// Bounds on what the coordinates after a given position can still add to
// each global row and to each row of the current brick.
struct Reach {
  std::vector<Int> rho_min, rho_max, rho_coef;        // r each
  std::vector<Int> sigma_min, sigma_max, sigma_coef;  // s each
  // largest l1 norm of a remaining column of E1 (of E2 within the brick)
  Int rho_col = 0, sigma_col = 0;
  // lower bounds on the cost still to come: sum of per-coordinate minima,
  // and the largest |w_j| (one unit of budget buys at most that much)
  Int cost_floor = 0, weight_max = 0;
};

inline Int ceil_pos(Int a, Int b) { return (a + b - 1) / b; }

inline Int div_floor(Int a, Int b) {
  const Int q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}
inline Int div_ceil(Int a, Int b) {
  const Int q = a / b;
  return (a % b != 0 && ((a < 0) == (b < 0))) ? q + 1 : q;
}

// Transitions out of one layer: for source state i, entries
// [offset[i], offset[i+1]) list the target state and the value of h.
struct Transitions {
  std::vector<std::uint32_t> offset;
  std::vector<std::uint32_t> child;
  std::vector<std::int32_t> h;
};

class AugDp {
 public:
  // Only steps with w h <= threshold are searched for; threshold must be
  // negative.
  AugDp(const AugQuery& q, std::optional<Clock::time_point> deadline,
        Int threshold)
      : q_(q), inst_(*q.inst), deadline_(deadline), threshold_(threshold) {}

  std::optional<StepCandidate> run() {
    collect_active();
    if (active_.empty()) return std::nullopt;
    build_reach();
    build_codec();
    forward();
    backward();
    return reconstruct();
  }

 private:
  const AugQuery& q_;
  const NFoldInstance& inst_;
  std::optional<Clock::time_point> deadline_;
  Int threshold_;
  std::vector<ActiveCoord> active_;
  std::vector<Reach> reach_;  // reach_[p]: after processing position p
  std::optional<StateCodec> codec_;
  std::vector<std::vector<Key>> layers_;
  std::vector<Transitions> trans_;
  std::vector<std::vector<Int>> to_go_cost_;
  std::vector<std::vector<Int>> to_go_l1_;
  std::size_t work_ = 0;

  std::size_t r() const { return inst_.r(); }
  std::size_t s() const { return inst_.s(); }

  void tick() {
    if (deadline_ && (work_++ & 0xfff) == 0 && Clock::now() >= *deadline_) {
      throw BudgetExceeded();
    }
  }

  void collect_active() {
    const std::size_t t = inst_.t();
    for (std::size_t j = 0; j < inst_.dimension(); ++j) {
      auto [lo, hi] = step_range(inst_, q_.x, q_.lambda, j);
      lo = std::max(lo, -q_.gc);
      hi = std::min(hi, q_.gc);
      if (lo == hi) continue;  // only h_j = 0 fits
      active_.push_back({j, j / t, j % t, lo, hi, inst_.weights[j]});
    }
  }

  static Int col_norm(const IntMatrix& m, std::size_t j) {
    Int n = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) n += m(i, j) < 0 ? -m(i, j) : m(i, j);
    return n;
  }

  void build_reach() {
    const std::size_t count = active_.size();
    reach_.assign(count, Reach{std::vector<Int>(r(), 0), std::vector<Int>(r(), 0),
                               std::vector<Int>(r(), 0), std::vector<Int>(s(), 0),
                               std::vector<Int>(s(), 0), std::vector<Int>(s(), 0)});
    for (std::size_t p = count - 1; p-- > 0;) {
      const ActiveCoord& next = active_[p + 1];
      Reach& cur = reach_[p];
      const Reach& later = reach_[p + 1];
      for (std::size_t i = 0; i < r(); ++i) {
        const Int a = inst_.e1(i, next.column);
        const Int x = checked_mul(a, next.lo), y = checked_mul(a, next.hi);
        cur.rho_min[i] = checked_add(later.rho_min[i], std::min(x, y));
        cur.rho_max[i] = checked_add(later.rho_max[i], std::max(x, y));
        cur.rho_coef[i] = std::max(later.rho_coef[i], checked_abs(a));
      }
      cur.rho_col = std::max(later.rho_col, col_norm(inst_.e1, next.column));
      const Int wl = checked_mul(next.weight, next.lo);
      const Int wh = checked_mul(next.weight, next.hi);
      cur.cost_floor = checked_add(later.cost_floor, std::min({Int{0}, wl, wh}));
      cur.weight_max = std::max(later.weight_max, checked_abs(next.weight));
      if (next.brick == active_[p].brick) {
        for (std::size_t k = 0; k < s(); ++k) {
          const Int a = inst_.e2(k, next.column);
          const Int x = checked_mul(a, next.lo), y = checked_mul(a, next.hi);
          cur.sigma_min[k] = checked_add(later.sigma_min[k], std::min(x, y));
          cur.sigma_max[k] = checked_add(later.sigma_max[k], std::max(x, y));
          cur.sigma_coef[k] = std::max(later.sigma_coef[k], checked_abs(a));
        }
        cur.sigma_col = std::max(later.sigma_col, col_norm(inst_.e2, next.column));
      }
    }
  }

  void build_codec() {
    std::vector<Int> lo, hi;
    for (std::size_t i = 0; i < r(); ++i) {
      Int bound = 0;
      for (std::size_t j = 0; j < inst_.t(); ++j) {
        bound = std::max(bound, checked_abs(inst_.e1(i, j)));
      }
      bound = checked_mul(bound, q_.gc);
      lo.push_back(-bound);
      hi.push_back(bound);
    }
    for (std::size_t k = 0; k < s(); ++k) {
      Int bound = 0;
      for (std::size_t j = 0; j < inst_.t(); ++j) {
        bound = std::max(bound, checked_abs(inst_.e2(k, j)));
      }
      bound = checked_mul(bound, q_.gc);
      lo.push_back(-bound);
      hi.push_back(bound);
    }
    lo.push_back(0);
    hi.push_back(q_.gc);
    codec_.emplace(std::move(lo), std::move(hi));
  }

  // Forward pass. Every layer keeps its states sorted by key, plus the
  // transitions from the previous layer grouped by source state in
  // increasing h.
  void forward() {
    const StateCodec& codec = *codec_;
    const std::size_t width = codec.width();
    const std::size_t bdig = width - 1;
    std::vector<Int> start(width, 0);
    start.back() = q_.gc;
    layers_.push_back({codec.encode(start)});
    std::vector<Int> forward_cost{0};

    struct Gen {
      Key key;
      Int cost;
      std::uint32_t order;  // generation index
    };
    std::vector<Int> cur(width);
    std::vector<Gen> gen;
    std::vector<std::int32_t> gen_h;
    for (std::size_t p = 0; p < active_.size(); ++p) {
      const ActiveCoord& c = active_[p];
      const std::vector<Key>& layer = layers_.back();
      // digits touched by this column and the key offset of one unit of h
      std::vector<std::pair<std::size_t, Int>> touched;
      for (std::size_t i = 0; i < r(); ++i) {
        if (inst_.e1(i, c.column) != 0) touched.emplace_back(i, inst_.e1(i, c.column));
      }
      for (std::size_t k = 0; k < s(); ++k) {
        if (inst_.e2(k, c.column) != 0) touched.emplace_back(r() + k, inst_.e2(k, c.column));
      }
      // values a touched digit may take after this column: inside the codec
      // range and still able to return to 0
      const Reach& here = reach_[p];
      std::vector<std::pair<Int, Int>> window;
      for (const auto& [d, a] : touched) {
        if (d < r()) {
          window.emplace_back(std::max(codec.lo(d), -here.rho_max[d]),
                              std::min(codec.hi(d), -here.rho_min[d]));
        } else {
          window.emplace_back(std::max(codec.lo(d), -here.sigma_max[d - r()]),
                              std::min(codec.hi(d), -here.sigma_min[d - r()]));
        }
      }
      std::vector<char> is_touched(bdig, 0);
      std::vector<Key> step;
      for (const auto& [d, a] : touched) {
        is_touched[d] = 1;
        step.push_back(codec.mult(d));
      }
      std::vector<Int> coef(bdig);
      for (std::size_t d = 0; d < bdig; ++d) {
        coef[d] = d < r() ? here.rho_coef[d] : here.sigma_coef[d - r()];
      }
      gen.clear();
      gen_h.clear();
      Transitions tr;
      tr.offset.assign(layer.size() + 1, 0);
      for (std::size_t idx = 0; idx < layer.size(); ++idx) {
        tick();
        tr.offset[idx] = static_cast<std::uint32_t>(gen.size());
        codec.decode(layer[idx], cur);
        const Int budget = cur[bdig];
        Int lo = std::max(c.lo, -budget), hi = std::min(c.hi, budget);
        // each touched digit must stay inside its window
        for (std::size_t m = 0; m < touched.size(); ++m) {
          const auto [d, a] = touched[m];
          const Int below = window[m].first - cur[d], above = window[m].second - cur[d];
          if (a > 0) {
            lo = std::max(lo, div_ceil(below, a));
            hi = std::min(hi, div_floor(above, a));
          } else {
            lo = std::max(lo, div_ceil(above, a));
            hi = std::min(hi, div_floor(below, a));
          }
        }
        // digits this column leaves alone fix a minimum remaining budget
        Int need = 0, rho_l1 = 0, sigma_l1 = 0;
        bool alive = true;
        for (std::size_t d = 0; d < bdig && alive; ++d) {
          if (is_touched[d]) continue;
          const Int x = cur[d] < 0 ? -cur[d] : cur[d];
          if (x == 0) continue;
          if (coef[d] == 0) {
            alive = false;
          } else {
            need = std::max(need, ceil_pos(x, coef[d]));
          }
          (d < r() ? rho_l1 : sigma_l1) += x;
        }
        if (!alive || need > budget) continue;
        lo = std::max(lo, need - budget);
        hi = std::min(hi, budget - need);
        const Key base = layer[idx];
        for (Int h = lo; h <= hi; ++h) {
          const Int left = budget - (h < 0 ? -h : h);
          Int rl = rho_l1, sl = sigma_l1;
          Key key = base - static_cast<Key>(budget - left);
          bool ok = true;
          for (std::size_t m = 0; m < touched.size(); ++m) {
            const auto [d, a] = touched[m];
            const Int v = cur[d] + h * a;
            const Int x = v < 0 ? -v : v;
            if (x > left * coef[d]) {
              ok = false;
              break;
            }
            (d < r() ? rl : sl) += x;
            key += static_cast<Key>(h * a) * step[m];
          }
          // one unit of h moves ||rho||_1 by at most the largest column norm
          if (!ok || rl > left * here.rho_col || sl > left * here.sigma_col) continue;
          // drop states that cannot end at or below the threshold
          const Int cost = forward_cost[idx] + c.weight * h;
          const Int floor = std::max(here.cost_floor, -left * here.weight_max);
          if (cost + floor > threshold_) continue;
          gen.push_back({key, cost, static_cast<std::uint32_t>(gen.size())});
          gen_h.push_back(static_cast<std::int32_t>(h));
        }
        if (gen.size() > 4 * q_.state_cap || gen.size() > 0xfffffff0u) {
          throw StateCapExceeded("DP layer exceeds state cap " +
                                 std::to_string(q_.state_cap) +
                                 "; use a smaller gc");
        }
      }
      tr.offset[layer.size()] = static_cast<std::uint32_t>(gen.size());
      std::sort(gen.begin(), gen.end(), [](const Gen& a, const Gen& b) {
        return a.key != b.key ? a.key < b.key : a.cost < b.cost;
      });

      // Per (rho, sigma) group, sorted by budget: keep a key only if its
      // cheapest cost is strictly below that of every key with more budget.
      constexpr std::uint32_t kDropped = 0xffffffffu;
      std::vector<std::uint32_t> child(gen.size(), kDropped);
      std::vector<Key> keys;
      std::vector<Int> costs;
      std::vector<std::pair<std::size_t, std::size_t>> runs;  // [begin, end) per key
      for (std::size_t i = 0; i < gen.size();) {
        const Key g = codec.group(gen[i].key);
        runs.clear();
        std::size_t e = i;
        while (e < gen.size() && codec.group(gen[e].key) == g) {
          std::size_t f = e;
          while (f < gen.size() && gen[f].key == gen[e].key) ++f;
          runs.emplace_back(e, f);
          e = f;
        }
        Int best = kUnreachable;
        std::vector<char> keep(runs.size(), 0);
        for (std::size_t k = runs.size(); k-- > 0;) {
          if (gen[runs[k].first].cost < best) {
            best = gen[runs[k].first].cost;
            keep[k] = 1;
          }
        }
        for (std::size_t k = 0; k < runs.size(); ++k) {
          if (!keep[k]) continue;
          const auto id = static_cast<std::uint32_t>(keys.size());
          keys.push_back(gen[runs[k].first].key);
          costs.push_back(gen[runs[k].first].cost);
          for (std::size_t m = runs[k].first; m < runs[k].second; ++m) {
            child[gen[m].order] = id;
          }
        }
        i = e;
      }
      if (keys.size() > q_.state_cap) {
        throw StateCapExceeded("DP layer has " + std::to_string(keys.size()) +
                               " states, above cap " +
                               std::to_string(q_.state_cap) +
                               "; use a smaller gc");
      }
      // compact the transitions, dropping those into pruned states
      std::uint32_t out = 0;
      for (std::size_t idx = 0; idx < layer.size(); ++idx) {
        const std::uint32_t b = tr.offset[idx], e = tr.offset[idx + 1];
        tr.offset[idx] = out;
        for (std::uint32_t m = b; m < e; ++m) {
          if (child[m] == kDropped) continue;
          tr.child.push_back(child[m]);
          tr.h.push_back(gen_h[m]);
          ++out;
        }
      }
      tr.offset[layer.size()] = out;
      trans_.push_back(std::move(tr));
      layers_.push_back(std::move(keys));
      forward_cost = std::move(costs);
    }
  }

  void backward() {
    const std::size_t count = active_.size();
    to_go_cost_.resize(count + 1);
    to_go_l1_.resize(count + 1);
    to_go_cost_[count].assign(layers_[count].size(), 0);
    to_go_l1_[count].assign(layers_[count].size(), 0);
    layers_.clear();
    for (std::size_t p = count; p-- > 0;) {
      const ActiveCoord& c = active_[p];
      const Transitions& tr = trans_[p];
      const std::vector<Int>& nc = to_go_cost_[p + 1];
      const std::vector<Int>& nl = to_go_l1_[p + 1];
      std::vector<Int>& vc = to_go_cost_[p];
      std::vector<Int>& vl = to_go_l1_[p];
      const std::size_t size = tr.offset.size() - 1;
      vc.assign(size, kUnreachable);
      vl.assign(size, kUnreachable);
      for (std::size_t idx = 0; idx < size; ++idx) {
        tick();
        for (std::uint32_t m = tr.offset[idx]; m < tr.offset[idx + 1]; ++m) {
          const std::uint32_t to = tr.child[m];
          if (nc[to] == kUnreachable) continue;
          const Int h = tr.h[m];
          const Int cost = c.weight * h + nc[to];
          const Int l1 = (h < 0 ? -h : h) + nl[to];
          if (cost < vc[idx] || (cost == vc[idx] && l1 < vl[idx])) {
            vc[idx] = cost;
            vl[idx] = l1;
          }
        }
      }
    }
  }

  // Walks forward taking, at every position, the smallest h that stays on
  // an optimal (cost, l1) path.
  std::optional<StepCandidate> reconstruct() const {
    if (to_go_cost_[0][0] >= 0) return std::nullopt;
    IntVector h(inst_.dimension(), 0);
    std::size_t idx = 0;
    for (std::size_t p = 0; p < active_.size(); ++p) {
      const ActiveCoord& c = active_[p];
      const Transitions& tr = trans_[p];
      const Int want_cost = to_go_cost_[p][idx];
      const Int want_l1 = to_go_l1_[p][idx];
      bool moved = false;
      for (std::uint32_t m = tr.offset[idx]; m < tr.offset[idx + 1]; ++m) {
        const std::uint32_t to = tr.child[m];
        if (to_go_cost_[p + 1][to] == kUnreachable) continue;
        const Int v = tr.h[m];
        if (c.weight * v + to_go_cost_[p + 1][to] == want_cost &&
            (v < 0 ? -v : v) + to_go_l1_[p + 1][to] == want_l1) {
          h[c.index] = v;
          idx = to;
          moved = true;
          break;
        }
      }
      if (!moved) throw NFoldError("augip: DP reconstruction failed");
    }

    StepCandidate out;
    out.h = std::move(h);
    out.lambda = q_.lambda;
    out.cost_per_unit = dot(inst_.weights, out.h);
    out.total_cost = checked_mul(out.lambda, out.cost_per_unit);
    out.l1 = l1_norm(out.h);
    return out;
  }
};

// Any step within gc / 2 is admissible at gc, so its cost bounds the
// optimum from above and lets the full search drop every state that cannot
// match it. Ties at that cost survive, so the tie-breaking is unchanged.
constexpr Int kWarmStartGc = 8;

std::optional<StepCandidate> solve_warm(const AugQuery& q, Int gc,
                                        std::optional<Clock::time_point> deadline) {
  Int threshold = -1;
  if (gc >= kWarmStartGc) {
    if (auto warm = solve_warm(q, gc / 2, deadline)) threshold = warm->cost_per_unit;
  }
  AugQuery sub = q;
  sub.gc = gc;
  return AugDp(sub, deadline, threshold).run();
}

}  // namespace

std::pair<Int, Int> step_range(const NFoldInstance& inst,
                               std::span<const Int> x, Int lambda,
                               std::size_t j) {
  return {ceil_div(checked_sub(inst.lower[j], x[j]), lambda),
          floor_div(checked_sub(inst.upper[j], x[j]), lambda)};
}

std::optional<StepCandidate> solve_augip(const AugQuery& q) {
  if (q.inst == nullptr) throw NFoldError("augip: query without instance");
  const NFoldInstance& inst = *q.inst;
  if (q.lambda < 1) throw NFoldError("augip: lambda must be >= 1");
  if (q.gc < 0) throw NFoldError("augip: gc must be >= 0");
  if (!is_feasible(inst, q.x)) {
    throw NFoldError("augip: query point is not feasible");
  }
  if (q.gc == 0) return std::nullopt;
  std::optional<Clock::time_point> deadline;
  if (q.time_budget_ms) {
    deadline = Clock::now() + std::chrono::milliseconds(*q.time_budget_ms);
  }
  auto out = solve_warm(q, q.gc, deadline);
  if (out) check_candidate(inst, q.x, *out, q.gc);
  return out;
}

Int exhaust_direction(const NFoldInstance& inst, std::span<const Int> x,
                      std::span<const Int> h, Int lambda) {
  if (h.size() != inst.dimension() || x.size() != inst.dimension()) {
    throw DimensionError("exhaust_direction: dimension mismatch");
  }
  Int best = std::numeric_limits<Int>::max();
  bool any = false;
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j] == 0) continue;
    any = true;
    const Int room = h[j] > 0 ? checked_sub(inst.upper[j], x[j])
                              : checked_sub(x[j], inst.lower[j]);
    best = std::min(best, floor_div(room, checked_abs(h[j])));
  }
  if (!any) throw NFoldError("exhaust_direction: zero direction");
  if (best < lambda) {
    throw NFoldError("exhaust_direction: (lambda, h) is not x-feasible");
  }
  return best;
}

void check_candidate(const NFoldInstance& inst, std::span<const Int> x,
                     const StepCandidate& c, Int gc) {
  if (!is_zero(apply_nfold(inst, c.h))) {
    throw NFoldError("step " + to_string(c.h) + " is not in the kernel");
  }
  for (std::size_t j = 0; j < c.h.size(); ++j) {
    const Int v = checked_add(x[j], checked_mul(c.lambda, c.h[j]));
    if (v < inst.lower[j] || v > inst.upper[j]) {
      throw NFoldError("step leaves the box at coordinate " +
                       std::to_string(j));
    }
  }
  if (l1_norm(c.h) > gc) {
    throw NFoldError("step has l1 norm " + std::to_string(l1_norm(c.h)) +
                     " above budget " + std::to_string(gc));
  }
}

}  // namespace nfold
