#pragma once
// Subgroups of C (+) Z via integer lattices in Z^{r+1}: normal forms,
// membership, indices, quotient invariants, sums/intersections, and the
// re-coordinatization of finite-index subgroups as C' (+) Z.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "addbasis/ambient.hpp"
#include "addbasis/perset.hpp"

namespace addbasis {

using Mat = std::vector<std::vector<int64_t>>;  // row-major integer matrix

/// A subgroup H <= C (+) Z, stored as the canonical Hermite normal form of
/// the lattice L_H <= Z^{r+1} spanned by lifted generators together with the
/// relation lattice d_1 Z x ... x d_r Z x {0}.  Columns are ordered
/// (c_1, ..., c_r, z).  Equality of subgroups is equality of the stored form.
class Subgroup {
 public:
  static Subgroup from_generators(const AmbientGroup& amb, const std::vector<GroupElement>& gens);
  static Subgroup whole(const AmbientGroup& amb);
  static Subgroup trivial(const AmbientGroup& amb);
  /// Construct directly from lattice rows (lifted coordinates); the relation
  /// lattice is adjoined automatically.
  static Subgroup from_rows(const AmbientGroup& amb, const Mat& rows);

  const AmbientGroup& ambient() const { return amb_; }
  /// Canonical HNF rows of the lattice L_H (full column count r+1).
  const Mat& basis() const { return basis_; }

  bool contains(const GroupElement& g) const;
  /// True when every generator of o lies in *this.
  bool contains(const Subgroup& o) const;

  bool finite_index() const;
  /// [G : H]; infinite index is a first-class value (nullopt).
  std::optional<int64_t> index() const;

  bool operator==(const Subgroup& o) const { return amb_ == o.amb_ && basis_ == o.basis_; }
  bool operator!=(const Subgroup& o) const { return !(*this == o); }

  /// The subgroup as an eventually periodic set (purely periodic, or a finite
  /// set of torsion points when the lattice has no z-component).
  PeriodicSet as_periodic() const;

  std::string to_string() const;

 private:
  Subgroup(AmbientGroup amb, Mat basis) : amb_(std::move(amb)), basis_(std::move(basis)) {}
  AmbientGroup amb_;
  Mat basis_;
};

Subgroup sum(const Subgroup& a, const Subgroup& b);
Subgroup intersect(const Subgroup& a, const Subgroup& b);

/// The subgroup generated by the elements of a nonempty PeriodicSet D.
/// Generators extracted: every window element, the least element of each
/// occupied right-tail residue class, the greatest element of each occupied
/// left-tail class, and the pure period vector (0,...,0,p) whenever a tail is
/// nonempty.
///
/// These generate <D>: each extracted generator lies in D (so the generated
/// subgroup is contained in <D> and in any subgroup containing D), and
/// conversely every element of D is reachable — a window element is itself a
/// generator, and an element x of a tail class with representative a equals
/// a + k(0,...,0,p) for some integer k, where both a and the period vector
/// belong to the generated subgroup; the period vector in turn is the
/// difference (a+p) - a of two elements of D whenever some tail class is
/// occupied.  Hence the generated subgroup contains D, and being generated by
/// elements of <D> it equals <D>.
Subgroup subgroup_from_periodic(const PeriodicSet& D);

/// Invariants of G/H.
struct QuotientInfo {
  std::vector<int64_t> invariant_factors;  // the factors > 1, divisibility chain
  int64_t free_rank = 0;
  bool is_finite = false;
  bool is_cyclic = false;
  std::vector<GroupElement> coset_reps;  // populated when finite; lex-least
                                         // nonnegative representative per coset
};
QuotientInfo quotient(const Subgroup& H);

/// An isomorphism H ~= C' (+) Z for a finite-index subgroup H, with effective
/// coordinate maps both ways and exact transport of PeriodicSets contained in
/// H.  The image z-coordinate is the H z-coordinate divided by z_step, the
/// positive generator of the projection of H to Z.
class Reembedding {
 public:
  explicit Reembedding(const Subgroup& H);

  const AmbientGroup& image() const { return image_; }
  const Subgroup& domain() const { return H_; }
  int64_t z_step() const { return e_; }

  /// Coordinates of x in the image; x must lie in H.
  GroupElement forward(const GroupElement& x) const;
  /// The element of H with the given image coordinates.
  GroupElement backward(const GroupElement& y) const;

  /// Exact transport of S (which must satisfy S subseteq H) to the image.
  PeriodicSet transport(const PeriodicSet& S) const;

 private:
  Subgroup H_;
  AmbientGroup image_;
  Mat bprime_;                     // rows: adapted basis of L_H
  std::vector<size_t> tors_rows_;  // rows of bprime_ that carry torsion factors
  size_t free_row_ = 0;            // row of bprime_ generating the free part
  int64_t e_ = 1;                  // z(bprime_[free_row_]) > 0
  Mat v_;                          // basis-change: coords(B) -> coords(B')
};

Reembedding reembed(const Subgroup& H);

}  // namespace addbasis
