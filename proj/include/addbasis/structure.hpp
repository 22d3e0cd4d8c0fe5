#pragma once

#include <optional>
#include <string>
#include <vector>

#include "addbasis/abgroup.hpp"
#include "addbasis/perset.hpp"

namespace addbasis {

// An infinite, additively closed, eventually periodic subset of its ambient
// group, certified translatable: for every x in the subgroup it generates,
// T and x+T differ in finitely many elements.  Instances are only produced
// by validate_semigroup and t_cap_H, so holding one is holding the
// certificate.
class SemigroupT {
 public:
  const PeriodicSet& set() const { return set_; }
  const AmbientGroup& ambient() const { return set_.ambient(); }

 private:
  explicit SemigroupT(PeriodicSet s) : set_(std::move(s)) {}
  friend SemigroupT validate_semigroup(const PeriodicSet& s);
  friend SemigroupT t_cap_H(const SemigroupT& t, const Subgroup& h);

  PeriodicSet set_;
};

// Checks that s is infinite and exactly closed (s + s subset of s), then
// certifies translatability.
//
// Translatability is verified on a finite generator set: the window elements
// together with the first tail element of each occupied tail residue class.
// The reduction rests on the containment
//
//   T \ ((x+y)+T)  is a subset of  (T \ (x+T))  union  (x + (T \ (y+T))),
//
// so finiteness of T \ (g+T) for the named generators propagates to every
// sum of generators, and (g+T) \ T is empty outright because T is closed.
// Throws PreconditionError when s is finite, VerificationError with a named
// witness when closure or translatability fails.
SemigroupT validate_semigroup(const PeriodicSet& s);

// Classification of a translatable semigroup: either a group, or asymptotic
// to C + xN for the full torsion subgroup C of the ambient group.
struct StructureReport {
  enum class Kind { group, cofinite_to };
  Kind kind;

  // cofinite_to only.  C is the ambient torsion subgroup (invariant factors
  // in torsion), x an infinite-order element with T = R + xN exactly, R the
  // finite remainder set T \ (x+T), and sym_diff the finite symmetric
  // difference T against the normal form C + uN, where u is the unit step
  // (0,...,0,±1) pointing along T's infinite direction.
  std::vector<int64_t> torsion;
  std::optional<Subgroup> C;
  GroupElement x{{}, 0};
  std::vector<GroupElement> R;
  std::vector<GroupElement> sym_diff;

  std::string to_string() const;
};

// Decomposes T.  Group kind means T - T = T exactly.  Otherwise x is chosen
// as the least element of T \ (-T) in (direction-major, torsion-lex) order,
// R = T \ (x+T) is finite, and the identity T = R + xN is verified before
// the report is returned.  Throws VerificationError when a certified
// invariant fails to check out.
StructureReport structure_decompose(const SemigroupT& t);

// The subgroup generated by T - T.  Verifies that it is the whole ambient
// group (the ambient is the Grothendieck group by construction; a mismatch
// means the representation is wrong) and throws VerificationError otherwise.
Subgroup grothendieck(const SemigroupT& t);

// Intersects T with a finite-index subgroup H and reembeds the result into
// H's own coordinates.  The result is revalidated and its difference set
// generates all of the new ambient.  Throws PreconditionError when H has
// infinite index.
SemigroupT t_cap_H(const SemigroupT& t, const Subgroup& h);

// Some t with t + f in T for every f in a nonempty finite set.  Exists for
// every translatable T whose difference set generates the ambient group;
// throws VerificationError if the bounded search fails.
GroupElement translate_into(const SemigroupT& t, const std::vector<GroupElement>& f);

// The set C + uN: every torsion class, z-coordinates 0,1,2,... when dir is
// +1, or 0,-1,-2,... when dir is -1.
PeriodicSet torsion_half_line(const AmbientGroup& amb, int dir);

// The orbit xN = {0, x, 2x, ...} as a periodic set; x must have nonzero
// z-coordinate.
PeriodicSet orbit_ray(const AmbientGroup& amb, const GroupElement& x);

}  // namespace addbasis
