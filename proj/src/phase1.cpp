#include "nfold/phase1.hpp"

namespace nfold {

std::size_t Phase1Instance::neg_brick_slack(std::size_t k) const {
  return original_t + extended.s() + k;
}
std::size_t Phase1Instance::pos_global_slack(std::size_t k) const {
  return original_t + 2 * extended.s() + k;
}
std::size_t Phase1Instance::neg_global_slack(std::size_t k) const {
  return original_t + 2 * extended.s() + extended.r() + k;
}

Phase1Build build_phase1(const NFoldInstance& inst) {
  inst.validate();
  const std::size_t r = inst.r(), s = inst.s(), t = inst.t(), n = inst.bricks;
  const std::size_t t2 = t + 2 * s + 2 * r;

  IntMatrix e1(r, t2), e2(s, t2);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < t; ++j) e1(i, j) = inst.e1(i, j);
    e1(i, t + 2 * s + i) = 1;
    e1(i, t + 2 * s + r + i) = -1;
  }
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < t; ++j) e2(i, j) = inst.e2(i, j);
    e2(i, t + i) = 1;
    e2(i, t + s + i) = -1;
  }

  Int widest = 0;
  for (std::size_t j = 0; j < inst.dimension(); ++j) {
    widest = std::max(widest, checked_add(checked_abs(inst.lower[j]),
                                          checked_abs(inst.upper[j])));
  }
  const Int bslack = checked_add(
      l1_norm(inst.b),
      checked_mul(checked_mul(static_cast<Int>(inst.dimension()),
                              inst.delta()),
                  widest));

  Phase1Build out;
  Phase1Instance& p1 = out.p1;
  p1.original = inst;
  p1.original_t = t;
  p1.slack_bound = bslack;
  p1.anchor = inst.lower;
  NFoldInstance& ext = p1.extended;
  ext.e1 = std::move(e1);
  ext.e2 = std::move(e2);
  ext.bricks = n;
  ext.b = inst.b;
  ext.lower.assign(n * t2, 0);
  ext.upper.assign(n * t2, 0);
  ext.weights.assign(n * t2, 0);
  ext.id = (inst.id.empty() ? std::string("instance") : inst.id) + "_phase1";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      ext.lower[i * t2 + j] = inst.lower[i * t + j];
      ext.upper[i * t2 + j] = inst.upper[i * t + j];
    }
    for (std::size_t j = t; j < t + 2 * s; ++j) {
      ext.upper[i * t2 + j] = bslack;
      ext.weights[i * t2 + j] = 1;
    }
    for (std::size_t j = t + 2 * s; j < t2; ++j) {
      if (i == 0) ext.upper[i * t2 + j] = bslack;
      ext.weights[i * t2 + j] = 1;
    }
  }

  // Start: original columns at the anchor, residuals absorbed by slacks.
  IntVector& x = out.start;
  x.assign(n * t2, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < t; ++j) x[i * t2 + j] = p1.anchor[i * t + j];
  }
  const IntVector ax = apply_nfold(inst, p1.anchor);
  for (std::size_t k = 0; k < r; ++k) {
    const Int res = checked_sub(inst.b[k], ax[k]);
    x[(res >= 0 ? p1.pos_global_slack(k) : p1.neg_global_slack(k))] =
        checked_abs(res);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < s; ++k) {
      const std::size_t row = r + i * s + k;
      const Int res = checked_sub(inst.b[row], ax[row]);
      x[i * t2 + (res >= 0 ? p1.pos_brick_slack(k) : p1.neg_brick_slack(k))] =
          checked_abs(res);
    }
  }

  ext.meta = {{"phase1", true},
              {"original_id", inst.id},
              {"original_t", t},
              {"slack_bound", bslack},
              {"anchor", "lower"},
              {"columns",
               {{"original", {0, t}},
                {"brick_slack_pos", {t, t + s}},
                {"brick_slack_neg", {t + s, t + 2 * s}},
                {"global_slack_pos", {t + 2 * s, t + 2 * s + r}},
                {"global_slack_neg", {t + 2 * s + r, t2}},
                {"global_slack_brick", 0}}}};
  ext.start = x;
  ext.validate();
  if (!is_feasible(ext, x)) {
    throw NFoldError("phase-1 start point is infeasible");
  }
  return out;
}

Phase1Outcome extract_feasible(const Phase1Instance& p1,
                               std::span<const Int> x_ext) {
  const NFoldInstance& ext = p1.extended;
  if (x_ext.size() != ext.dimension()) {
    throw DimensionError("phase-1 solution has wrong length");
  }
  const Int residual = objective(ext, x_ext);
  if (residual != 0) return Phase1NotFound{residual};
  const std::size_t t2 = ext.t();
  Phase1Found found;
  found.x.reserve(ext.bricks * p1.original_t);
  for (std::size_t i = 0; i < ext.bricks; ++i) {
    for (std::size_t j = 0; j < p1.original_t; ++j) {
      found.x.push_back(x_ext[i * t2 + j]);
    }
  }
  if (!is_feasible(p1.original, found.x)) {
    throw NFoldError("phase-1 projection is infeasible for the original");
  }
  return found;
}

}  // namespace nfold
