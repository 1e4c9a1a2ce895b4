#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "nfold/arith.hpp"
#include "nfold/matrix.hpp"

namespace nfold {

class GraverCapExceeded : public NFoldError {
 public:
  using NFoldError::NFoldError;
};

class DecompositionError : public NFoldError {
 public:
  using NFoldError::NFoldError;
};

/// The Graver basis of a matrix: the conformally minimal nonzero elements of
/// its integer kernel. Elements are kept sorted lexicographically; the set is
/// closed under negation.
struct GraverBasis {
  IntMatrix matrix;
  std::vector<IntVector> elements;

  bool empty() const { return elements.empty(); }
  std::size_t size() const { return elements.size(); }
  bool contains(const IntVector& g) const;
};

/// Lattice basis of ker_Z(A), obtained from a unimodular column reduction of
/// A. Empty when the kernel is trivial.
std::vector<IntVector> kernel_basis(const IntMatrix& a);

/// Completion procedure: start from the symmetric kernel basis, add normal
/// forms of pairwise sums until every sum reduces to zero, then keep the
/// conformally minimal elements. Throws GraverCapExceeded when an element
/// with ||.||_inf > norm_cap is produced.
GraverBasis graver_basis(const IntMatrix& a, Int norm_cap);

Int g1_norm(const GraverBasis& g);
Int ginf_norm(const GraverBasis& g);

struct ConformalTerm {
  Int multiplier;
  IntVector element;

  friend bool operator==(const ConformalTerm&, const ConformalTerm&) = default;
};

/// Writes a kernel vector x as a sign-compatible sum of Graver elements,
/// each conformally below x, with at most max(1, 2n-2) distinct elements.
/// Greedy: repeatedly subtract the element with the largest admissible
/// multiplier (lexicographically smallest on ties); if that uses too many
/// distinct elements, a bounded depth-first search takes over.
std::vector<ConformalTerm> conformal_decompose(const IntMatrix& a,
                                               std::span<const Int> x,
                                               const GraverBasis& basis);
std::vector<ConformalTerm> conformal_decompose(const IntMatrix& a,
                                               std::span<const Int> x);

}  // namespace nfold
