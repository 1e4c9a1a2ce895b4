#pragma once

// Shared generators and oracles for the unit and acceptance tests.

#include <algorithm>
#include <optional>
#include <set>

#include "nfold/augment.hpp"
#include "nfold/graver.hpp"
#include "nfold/instance.hpp"
#include "nfold/rng.hpp"

namespace nfold::testing {

struct TinyShape {
  std::size_t max_r = 2, max_s = 2, max_t = 3, max_bricks = 4;
  Int coef = 2;        // entries of E1, E2 in [-coef, coef]
  Int max_width = 5;   // u_j - l_j in [0, max_width]
  Int weight = 3;      // w_j in [-weight, weight]
  std::size_t max_dimension = 64;
};

inline IntMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols,
                               Int coef) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform_int(-coef, coef);
  }
  return m;
}

// Exact determinant of a small square matrix (Bareiss elimination).
inline Int small_det(std::vector<IntVector> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

inline Int submatrix_det(const IntMatrix& a, const std::vector<std::size_t>& rows,
                         const std::vector<std::size_t>& cols) {
  std::vector<IntVector> m(rows.size(), IntVector(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) m[i][j] = a(rows[i], cols[j]);
  }
  return small_det(std::move(m));
}

inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    std::vector<std::size_t> s;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (1u << j)) s.push_back(j);
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Graver basis of a small matrix (at most ~4 columns) without the
/// completion procedure. Every Graver element is a conformal combination of
/// at most n - rank circuits with coefficients in [0, 1), and circuit
/// entries are minors of A, so ||g||_inf <= (n - rank) * max |minor|. All
/// kernel vectors in that box are enumerated over the free coordinates of a
/// pivot basis and filtered for conformal minimality.
inline std::set<IntVector> graver_by_enumeration(const IntMatrix& a) {
  const std::size_t n = a.cols();
  std::vector<std::size_t> rows;  // a maximal independent row set
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::vector<std::size_t> trial = rows;
    trial.push_back(i);
    for (const auto& cols : subsets(n, trial.size())) {
      if (submatrix_det(a, trial, cols) != 0) {
        rows = trial;
        break;
      }
    }
  }
  const std::size_t r = rows.size();
  if (r == n) return {};
  Int max_minor = 1;
  std::vector<std::size_t> pivots;
  for (std::size_t k = 1; k <= r; ++k) {
    for (const auto& rs : subsets(a.rows(), k)) {
      for (const auto& cs : subsets(n, k)) {
        max_minor = std::max(max_minor, std::abs(submatrix_det(a, rs, cs)));
      }
    }
  }
  Int det = 1;
  for (const auto& cs : subsets(n, r)) {
    det = submatrix_det(a, rows, cs);
    if (det != 0) {
      pivots = cs;
      break;
    }
  }
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::find(pivots.begin(), pivots.end(), j) == pivots.end()) free.push_back(j);
  }
  const Int box = static_cast<Int>(n - r) * max_minor;

  std::vector<IntVector> kernel;
  IntVector f(free.size(), -box);
  while (true) {
    IntVector x(n, 0);
    for (std::size_t k = 0; k < free.size(); ++k) x[free[k]] = f[k];
    IntVector rhs(r, 0);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t k = 0; k < free.size(); ++k) rhs[i] -= a(rows[i], free[k]) * f[k];
    }
    bool ok = true;
    for (std::size_t p = 0; p < r && ok; ++p) {
      // Cramer's rule
      std::vector<IntVector> m(r, IntVector(r));
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
          m[i][j] = j == p ? rhs[i] : a(rows[i], pivots[j]);
        }
      }
      const Int num = small_det(std::move(m));
      if (num % det != 0) {
        ok = false;
      } else {
        x[pivots[p]] = num / det;
        ok = std::abs(x[pivots[p]]) <= box;
      }
    }
    if (ok && !is_zero(x)) kernel.push_back(x);
    std::size_t k = 0;
    while (k < f.size() && f[k] == box) f[k++] = -box;
    if (k == f.size()) break;
    ++f[k];
  }
  std::sort(kernel.begin(), kernel.end(), [](const IntVector& u, const IntVector& v) {
    return l1_norm(u) < l1_norm(v);
  });
  std::set<IntVector> out;
  std::vector<const IntVector*> minimal;
  for (const IntVector& x : kernel) {
    bool is_min = true;
    for (const IntVector* y : minimal) {
      if (conformal_leq(*y, x)) {
        is_min = false;
        break;
      }
    }
    if (is_min) {
      minimal.push_back(&x);
      out.insert(x);
    }
  }
  return out;
}

/// Random instance with a planted feasible start x0 (b = E^(N) x0).
inline NFoldInstance random_instance(Rng& rng, const TinyShape& shape) {
  NFoldInstance inst;
  std::size_t t = 0, bricks = 0;
  do {
    t = static_cast<std::size_t>(rng.uniform_int(1, static_cast<Int>(shape.max_t)));
    bricks = static_cast<std::size_t>(
        rng.uniform_int(1, static_cast<Int>(shape.max_bricks)));
  } while (t * bricks > shape.max_dimension);
  const auto r = static_cast<std::size_t>(rng.uniform_int(1, static_cast<Int>(shape.max_r)));
  const auto s = static_cast<std::size_t>(rng.uniform_int(1, static_cast<Int>(shape.max_s)));
  inst.e1 = random_matrix(rng, r, t, shape.coef);
  inst.e2 = random_matrix(rng, s, t, shape.coef);
  inst.bricks = bricks;
  const std::size_t n = t * bricks;
  IntVector x0(n);
  inst.lower.resize(n);
  inst.upper.resize(n);
  inst.weights.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    inst.lower[j] = rng.uniform_int(-2, 2);
    inst.upper[j] = inst.lower[j] + rng.uniform_int(0, shape.max_width);
    x0[j] = rng.uniform_int(inst.lower[j], inst.upper[j]);
    inst.weights[j] = rng.uniform_int(-shape.weight, shape.weight);
  }
  inst.b.assign(r + bricks * s, 0);
  inst.b = apply_nfold(inst, x0);
  inst.start = x0;
  inst.id = "tiny";
  inst.validate();
  return inst;
}

/// Random feasible point of a tiny instance: start plus a few random kernel
/// moves is overkill; the planted start is enough as a query point.
inline AugQuery random_query(Rng& rng, const NFoldInstance& inst, Int max_gc) {
  AugQuery q;
  q.inst = &inst;
  q.x = *inst.start;
  q.lambda = rng.uniform_int(1, 3);
  q.gc = rng.uniform_int(1, max_gc);
  return q;
}

}  // namespace nfold::testing
