#include "nfold/graver.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace nfold {

namespace {

IntVector negated(std::span<const Int> v) {
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = checked_neg(v[i]);
  return out;
}

IntVector sum(std::span<const Int> a, std::span<const Int> b) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = checked_add(a[i], b[i]);
  return out;
}

// col_j -= q * col_k over all entries
void column_axpy(std::vector<IntVector>& cols, std::size_t j, std::size_t k,
                 Int q) {
  for (std::size_t e = 0; e < cols[j].size(); ++e) {
    cols[j][e] = checked_sub(cols[j][e], checked_mul(q, cols[k][e]));
  }
}

// Pairwise l1 reduction of a lattice basis; keeps the lattice unchanged.
void reduce_basis(std::vector<IntVector>& basis) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        if (i == j) continue;
        for (Int sign : {Int{1}, Int{-1}}) {
          IntVector cand(basis[i].size());
          for (std::size_t e = 0; e < cand.size(); ++e) {
            cand[e] = checked_add(basis[i][e], checked_mul(sign, basis[j][e]));
          }
          if (l1_norm(cand) < l1_norm(basis[i])) {
            basis[i] = std::move(cand);
            changed = true;
          }
        }
      }
    }
  }
}

// Largest alpha with alpha * g ⊑ x, assuming g ⊑ x and g != 0.
Int max_multiplier(std::span<const Int> g, std::span<const Int> x) {
  Int best = -1;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == 0) continue;
    const Int q = x[i] / g[i];
    best = best < 0 ? q : std::min(best, q);
  }
  return best;
}

IntVector normal_form(IntVector s, const std::vector<IntVector>& reducers) {
  bool reduced = true;
  while (reduced && !is_zero(s)) {
    reduced = false;
    for (const IntVector& g : reducers) {
      if (conformal_leq(g, s)) {
        const Int alpha = max_multiplier(g, s);
        for (std::size_t i = 0; i < s.size(); ++i) {
          s[i] = checked_sub(s[i], checked_mul(alpha, g[i]));
        }
        reduced = true;
        if (is_zero(s)) break;
      }
    }
  }
  return s;
}

struct ByNormThenLex {
  bool operator()(const IntVector& a, const IntVector& b) const {
    const Int na = l1_norm(a), nb = l1_norm(b);
    if (na != nb) return na < nb;
    return a < b;
  }
};

}  // namespace

bool GraverBasis::contains(const IntVector& g) const {
  return std::binary_search(elements.begin(), elements.end(), g);
}

std::vector<IntVector> kernel_basis(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  // column j of [A; I_n]
  std::vector<IntVector> cols(n, IntVector(m + n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) cols[j][i] = a(i, j);
    cols[j][m + j] = 1;
  }

  std::size_t pivot = 0;
  for (std::size_t row = 0; row < m && pivot < n; ++row) {
    while (true) {
      // smallest nonzero |entry| in this row among the unpivoted columns
      std::size_t best = n;
      for (std::size_t j = pivot; j < n; ++j) {
        if (cols[j][row] == 0) continue;
        if (best == n ||
            checked_abs(cols[j][row]) < checked_abs(cols[best][row])) {
          best = j;
        }
      }
      if (best == n) break;
      std::swap(cols[pivot], cols[best]);
      bool done = true;
      for (std::size_t j = pivot + 1; j < n; ++j) {
        if (cols[j][row] == 0) continue;
        column_axpy(cols, j, pivot, cols[j][row] / cols[pivot][row]);
        if (cols[j][row] != 0) done = false;
      }
      if (done) {
        ++pivot;
        break;
      }
    }
  }

  std::vector<IntVector> basis;
  for (std::size_t j = pivot; j < n; ++j) {
    basis.emplace_back(cols[j].begin() + static_cast<std::ptrdiff_t>(m),
                       cols[j].end());
  }
  reduce_basis(basis);
  return basis;
}

GraverBasis graver_basis(const IntMatrix& a, Int norm_cap) {
  if (norm_cap < 1) throw NFoldError("graver_basis: norm_cap must be >= 1");
  std::vector<IntVector> generated;
  std::set<IntVector> seen;
  auto check_cap = [&](const IntVector& v) {
    if (linf_norm(v) > norm_cap) {
      throw GraverCapExceeded("Graver completion produced " + to_string(v) +
                              " with infinity norm above cap " +
                              std::to_string(norm_cap));
    }
  };

  for (const IntVector& v : kernel_basis(a)) {
    for (IntVector g : {v, negated(v)}) {
      check_cap(g);
      if (seen.insert(g).second) generated.push_back(std::move(g));
    }
  }

  std::set<IntVector, ByNormThenLex> pending;
  auto enqueue_sums = [&](const IntVector& f, std::size_t upto) {
    for (std::size_t i = 0; i < upto; ++i) {
      // f ⊑ f + g when f and g are sign compatible, so the sum reduces to 0
      if (sign_compatible(f, generated[i])) continue;
      IntVector s = sum(f, generated[i]);
      if (!is_zero(s)) pending.insert(std::move(s));
    }
  };
  for (std::size_t i = 0; i < generated.size(); ++i) {
    enqueue_sums(generated[i], i);
  }

  while (!pending.empty()) {
    IntVector s = *pending.begin();
    pending.erase(pending.begin());
    IntVector f = normal_form(std::move(s), generated);
    if (is_zero(f) || seen.contains(f)) continue;
    check_cap(f);
    enqueue_sums(f, generated.size());
    seen.insert(f);
    generated.push_back(std::move(f));
  }

  GraverBasis out;
  out.matrix = a;
  for (std::size_t i = 0; i < generated.size(); ++i) {
    bool minimal = true;
    for (std::size_t j = 0; j < generated.size() && minimal; ++j) {
      if (i != j && conformal_leq(generated[j], generated[i])) minimal = false;
    }
    if (minimal) out.elements.push_back(generated[i]);
  }
  std::sort(out.elements.begin(), out.elements.end());
  return out;
}

Int g1_norm(const GraverBasis& g) {
  Int best = 0;
  for (const IntVector& e : g.elements) best = std::max(best, l1_norm(e));
  return best;
}

Int ginf_norm(const GraverBasis& g) {
  Int best = 0;
  for (const IntVector& e : g.elements) best = std::max(best, linf_norm(e));
  return best;
}

std::vector<ConformalTerm> conformal_decompose(const IntMatrix& a,
                                               std::span<const Int> x,
                                               const GraverBasis& basis) {
  if (x.size() != a.cols()) {
    throw DimensionError("conformal_decompose: vector length " +
                         std::to_string(x.size()) + " vs " +
                         std::to_string(a.cols()) + " columns");
  }
  if (is_zero(x)) throw NFoldError("conformal_decompose: x must be nonzero");
  if (!is_zero(a.multiply(x))) {
    throw NFoldError("conformal_decompose: " + to_string(x) +
                     " is not in the kernel");
  }
  const std::size_t limit = std::max<std::size_t>(1, 2 * a.cols() - 2);

  // Only elements conformally below x can take part.
  std::vector<IntVector> below;
  for (const IntVector& g : basis.elements) {
    if (conformal_leq(g, x)) below.push_back(g);
  }

  auto merge = [](std::map<IntVector, Int>& acc, const IntVector& g, Int k) {
    acc[g] = checked_add(acc[g], k);
  };
  auto to_terms = [](const std::map<IntVector, Int>& acc) {
    std::vector<ConformalTerm> out;
    for (const auto& [g, k] : acc) out.push_back({k, g});
    return out;
  };

  {
    std::map<IntVector, Int> acc;
    IntVector rest(x.begin(), x.end());
    while (!is_zero(rest)) {
      const IntVector* pick = nullptr;
      Int pick_alpha = 0;
      for (const IntVector& g : below) {
        if (!conformal_leq(g, rest)) continue;
        const Int alpha = max_multiplier(g, rest);
        if (alpha > pick_alpha) {
          pick = &g;
          pick_alpha = alpha;
        }
      }
      if (pick == nullptr) {
        throw DecompositionError("no Graver element below remainder " +
                                 to_string(rest) + "; basis is incomplete");
      }
      for (std::size_t i = 0; i < rest.size(); ++i) {
        rest[i] = checked_sub(rest[i], checked_mul(pick_alpha, (*pick)[i]));
      }
      merge(acc, *pick, pick_alpha);
    }
    if (acc.size() <= limit) return to_terms(acc);
  }

  // Greedy used too many distinct elements; search for a short one.
  std::size_t nodes = 0;
  constexpr std::size_t kNodeBudget = 5'000'000;
  std::map<IntVector, Int> acc;
  std::function<bool(const IntVector&, std::size_t)> search =
      [&](const IntVector& rest, std::size_t first) -> bool {
    if (is_zero(rest)) return true;
    if (++nodes > kNodeBudget) return false;
    for (std::size_t idx = first; idx < below.size(); ++idx) {
      const IntVector& g = below[idx];
      if (!conformal_leq(g, rest)) continue;
      if (acc.size() >= limit) return false;
      for (Int alpha = max_multiplier(g, rest); alpha >= 1; --alpha) {
        IntVector next(rest);
        for (std::size_t i = 0; i < next.size(); ++i) {
          next[i] = checked_sub(next[i], checked_mul(alpha, g[i]));
        }
        acc[g] = alpha;
        if (search(next, idx + 1)) return true;
        acc.erase(g);
      }
    }
    return false;
  };
  if (!search(IntVector(x.begin(), x.end()), 0)) {
    throw DecompositionError("no decomposition of " + to_string(x) +
                             " with at most " + std::to_string(limit) +
                             " distinct Graver elements found");
  }
  return to_terms(acc);
}

std::vector<ConformalTerm> conformal_decompose(const IntMatrix& a,
                                               std::span<const Int> x) {
  const Int cap = std::max<Int>(linf_norm(x), 1) * 64 + 1024;
  return conformal_decompose(a, x, graver_basis(a, cap));
}

}  // namespace nfold
