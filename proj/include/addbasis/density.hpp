#pragma once

#include <optional>
#include <string>
#include <vector>

#include "addbasis/structure.hpp"

namespace addbasis {

// Exact rational in lowest terms with positive denominator.  Densities live
// in [0,1]; the audit arithmetic never leaves the int64 range because every
// denominator divides twice the pattern size of a canonical set.
struct Rational {
  int64_t num{0};
  int64_t den{1};

  static Rational of(int64_t n, int64_t d);
  std::string to_string() const;
};

Rational operator+(Rational a, Rational b);
Rational operator-(Rational a, Rational b);
Rational operator*(Rational a, Rational b);
bool operator==(Rational a, Rational b);
bool operator<(Rational a, Rational b);
inline bool operator>(Rational a, Rational b) { return b < a; }
inline bool operator<=(Rational a, Rational b) { return !(b < a); }
inline bool operator>=(Rational a, Rational b) { return !(a < b); }

// The natural density of s relative to the carrier t: the asymptotic
// fraction of t's tail occupied by the intersection of s with t.  Following
// the extension convention, s need not lie inside t; only that intersection
// counts.
// One-sided carriers average over one tail, group carriers over both, so
// d(t) = 1 either way.  On this algebra of sets the result is an exact
// rational and satisfies finite additivity, translation invariance,
// normalization, and (on group carriers) inversion invariance.
Rational natural_density(const PeriodicSet& s, const SemigroupT& t);

// If d(A) + d(B) > 1 then T is contained in A - B.
struct PrehistoricReport {
  bool fired;  // d(A) + d(B) > 1
  bool holds;  // conclusion verified (vacuously true when not fired)
};
PrehistoricReport prehistoric_audit(const PeriodicSet& a, const PeriodicSet& b,
                                    const SemigroupT& t);

// Either d(B+C) >= 2 d(C) or B - B is contained in C - C.
struct IncrementReport {
  bool density_branch;
  bool containment_branch;
  bool ok() const { return density_branch || containment_branch; }
};
IncrementReport density_increment_audit(const PeriodicSet& b, const PeriodicSet& c,
                                        const SemigroupT& t);

// With s_i = 2^i r + 2^i - 1: either d(s_i A) >= 2^i d(rA), or i >= 1 and
// s_{i-1}(A-A) already equals the subgroup generated by A - A.
struct IterReport {
  int64_t s_i;
  bool density_branch;
  bool stabilized_branch;
  bool ok() const { return density_branch || stabilized_branch; }
};
IterReport iter_audit(const PeriodicSet& a, int64_t r, int64_t i, const SemigroupT& t);

// When alpha = d(hA) > 0, some s <= (h+1)/alpha - 1 has sA - sA equal to the
// subgroup generated by A - A.  The audit finds the least such s.
struct Increment2Report {
  Rational alpha;
  int64_t s_bound;
  std::optional<int64_t> s_found;
  bool ok() const { return s_found.has_value() && *s_found <= s_bound; }
};
Increment2Report density_increment2_audit(const PeriodicSet& a, int64_t h, const SemigroupT& t);

// If B - B generates the whole ambient group and T is covered, up to
// finitely many elements, by the union of x_i + hB, then B is a basis of
// order at most h + m^2 (h+1) - m, where m is the number of translates.
struct NathNashReport {
  bool hypothesis;
  int64_t order_bound;
  std::optional<int64_t> order_found;
  bool ok() const { return !hypothesis || (order_found.has_value() && *order_found <= order_bound); }
};
NathNashReport nath_nash_audit(const PeriodicSet& b, int64_t h,
                               const std::vector<GroupElement>& xs, const SemigroupT& t);

// If T is covered by hA up to finitely many elements and
// d(T \ h(A\{a})) < 1/h, then T is covered by 2h(A\{a}) the same way.
struct LowDensityReport {
  bool fired;
  bool holds;
  Rational defect;  // d(T \ h(A\{a}))
};
LowDensityReport low_density_audit(const PeriodicSet& a, const GroupElement& removed, int64_t h,
                                   const SemigroupT& t);

// Least o in [1, cap] with T contained in the o-fold sumset of b up to
// finitely many elements, or nullopt.  Shared by the audits; also a slow,
// independent cross-check for order computations elsewhere.
std::optional<int64_t> least_fold_covering(const PeriodicSet& b, const SemigroupT& t, int64_t cap);

}  // namespace addbasis
