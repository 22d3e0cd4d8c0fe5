#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "addbasis/ambient.hpp"

namespace addbasis {

// Degree-truncated sets in the polynomial group F_p[t].
//
// The additive group of F_p[t] has infinite rank, so it falls outside the
// PeriodicSet engine; this module represents its subsets directly as unions
// of coordinate blocks in the truncation F_p^D (a polynomial of degree < D
// is its coefficient vector, index i holding the coefficient of t^i).
// Because p * x = 0 for every x, subgroups of F_p[t] are exactly F_p-linear
// subspaces, so subgroup questions reduce to linear algebra over F_p.

// One block of a GradedSet: the set { t^shift * f : deg f < width }, i.e.
// all vectors supported on the coordinate range [shift, shift + width).
struct GradedBlock {
  int64_t shift{0};
  int64_t width{0};
};

// A union of coordinate blocks inside F_p^D, adjusted by finite exception
// lists.  Vectors are coefficient vectors of length `degree` with entries
// in [0, p).  Membership: v belongs to the set when v appears in `added`,
// or lies in some block and does not appear in `removed`.
struct GradedSet {
  int64_t p{2};
  int64_t degree{0};
  std::vector<GradedBlock> blocks;
  std::vector<std::vector<int64_t>> added;
  std::vector<std::vector<int64_t>> removed;

  // True when v (length `degree`, entries reduced mod p) lies in the set.
  bool member(const std::vector<int64_t>& v) const;

  std::string to_string() const;
};

// Builds the layered basis of order h for the truncation F_p^D:
//
//   A = G_r u t^r G_r u ... u t^{r(h-2)} G_r u t^{r(h-1)} G,
//
// where G_r is the subspace of polynomials of degree < r and the final
// block is all of G truncated at degree D.  Every vector f splits as its
// h-1 coefficient slices on [jr, (j+1)r) plus its tail above (h-1)r, so A
// is a basis of order (at most) h; the constructor re-verifies that
// decomposition on 500 seeded random vectors, and on every vector of
// F_p^D when p^D <= 2^20, throwing InternalError on any mismatch.
//
// Preconditions: p prime, r >= 1, h >= 1, D >= r*h + 2, and p^r <= 2^20
// so that block enumeration stays tractable (PreconditionError otherwise).
GradedSet build_remark_basis(int64_t p, int64_t r, int64_t h, int64_t degree);

// Counts the verified essential subsets of A = build_remark_basis(p, r, h,
// degree) arising as hyperplane complements.  For each non-final block
// t^{jr} G_r (j <= h-2) and each affine hyperplane H of that block, the
// candidate is E = block \ H, of size k = p^r - p^{r-1}.  E is counted
// only after verifying the subgroup criterion for essentiality: the
// F_p-span of (A \ E) - (A \ E) within degree < D must be a proper
// subspace, and adding back any single element of E must complete it to
// the whole space.  Complements of the hyperplanes through 0 pass (the
// span misses the directions E removes); complements of the other affine
// hyperplanes fail, because the surviving coset spans the full block once
// differences against the other blocks are available.  The count is
// therefore (h-1) * (p^r - 1)/(p - 1), and it is invariant under raising
// the truncation degree.
//
// Throws VerificationError if a span verdict rests on the top two
// coordinates of the truncation (a truncation artifact; re-run with a
// larger degree).  All span questions of the construction are determined
// below degree r*h <= degree - 2, so this does not fire for valid inputs.
int64_t essential_hyperplane_count(int64_t p, int64_t r, int64_t h,
                                   int64_t degree);

}  // namespace addbasis
