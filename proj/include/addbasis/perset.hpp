#pragma once
// Eventually periodic subsets of C (+) Z in canonical form, with exact set
// algebra: Boolean operations, translation, negation, Minkowski sums and
// h-fold sums, and finite-difference comparisons.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "addbasis/ambient.hpp"
#include "addbasis/bitvec.hpp"

namespace addbasis {

/// An eventually periodic subset S of C (+) Z.
///
/// Representation: a period p >= 1, a window [lo, hi) (lo <= hi), a bit array
/// over C x [lo, hi) holding the exact membership inside the window, and two
/// pattern bit arrays over C x Z/p.  For n >= hi membership is read from the
/// right pattern at (c, n mod p); for n < lo from the left pattern.  The class
/// of such sets is closed under all operations provided here.
///
/// Every PeriodicSet is kept in canonical form:
///   * p is the least period under which both tail patterns are invariant;
///   * hi cannot be decreased (the top window row differs from the right
///     pattern, or the window is empty), and symmetrically for lo;
///   * when the window is empty, lo == hi, and this split point is the least
///     integer k such that the two patterns disagree on row k-1 (0 when the
///     patterns are identical, in which case the set is purely periodic).
/// Two PeriodicSets are equal as sets iff their canonical fields coincide, so
/// operator== is exact set equality.
class PeriodicSet {
 public:
  /// The empty subset.
  static PeriodicSet empty(const AmbientGroup& amb);

  /// All of C (+) Z.
  static PeriodicSet full(const AmbientGroup& amb);

  /// A finite set of points.
  static PeriodicSet from_points(const AmbientGroup& amb, const std::vector<GroupElement>& pts);

  /// General constructor from raw fields (window bits indexed by
  /// c * (hi - lo) + (n - lo), patterns by c * p + (n mod p)); the result is
  /// canonicalized, so the stored fields may differ from the arguments.
  static PeriodicSet make(const AmbientGroup& amb, int64_t p, int64_t lo, int64_t hi,
                          BitVec window, BitVec right, BitVec left);

  const AmbientGroup& ambient() const { return amb_; }
  int64_t period() const { return p_; }
  int64_t lo() const { return lo_; }
  int64_t hi() const { return hi_; }
  const BitVec& window_bits() const { return win_; }
  const BitVec& right_bits() const { return right_; }
  const BitVec& left_bits() const { return left_; }

  bool member(int64_t cflat, int64_t n) const {
    if (n >= hi_) return right_.test(size_t(cflat * p_ + floor_mod(n, p_)));
    if (n < lo_) return left_.test(size_t(cflat * p_ + floor_mod(n, p_)));
    return win_.test(size_t(cflat * (hi_ - lo_) + (n - lo_)));
  }
  bool member(const GroupElement& g) const { return member(amb_.flatten(g.torsion), g.n); }

  bool is_empty() const { return lo_ == hi_ && win_.none() && right_.none() && left_.none(); }

  /// True when the set has no infinite tails (both patterns empty); such a
  /// set is exactly its window points.
  bool is_finite() const { return right_.none() && left_.none(); }

  /// Number of elements of a finite set.
  int64_t finite_size() const;

  /// All window points (c, n), lo <= n < hi, sorted.  For a finite set this
  /// is the whole set.
  std::vector<GroupElement> window_points() const;

  /// True when the left tail is empty, i.e. the set is bounded below in z.
  bool bounded_below() const { return left_.none(); }
  /// True when the right tail is empty, i.e. the set is bounded above in z.
  bool bounded_above() const { return right_.none(); }

  /// Least z-coordinate carrying an element, for sets bounded below.
  int64_t min_n() const;
  /// Greatest z-coordinate carrying an element, for sets bounded above.
  int64_t max_n() const;

  /// Occupied right-pattern classes as pairs (cflat, residue mod period()).
  std::vector<std::pair<int64_t, int64_t>> right_classes() const;
  std::vector<std::pair<int64_t, int64_t>> left_classes() const;

  /// Exact set equality (canonical fields compared directly).
  bool operator==(const PeriodicSet& o) const {
    return amb_ == o.amb_ && p_ == o.p_ && lo_ == o.lo_ && hi_ == o.hi_ && win_ == o.win_ &&
           right_ == o.right_ && left_ == o.left_;
  }
  bool operator!=(const PeriodicSet& o) const { return !(*this == o); }

  /// Re-materialize at period q (a multiple of period()) and window
  /// [nlo, nhi] >= [lo, hi]; used to align operands.  Result fields are NOT
  /// canonical; internal helper exposed for the kernels and tests.
  void expand_to(int64_t q, int64_t nlo, int64_t nhi, BitVec& window, BitVec& right,
                 BitVec& left) const;

  std::string to_string() const;

 private:
  PeriodicSet(const AmbientGroup& amb, int64_t p, int64_t lo, int64_t hi, BitVec win, BitVec right,
              BitVec left)
      : amb_(amb),
        p_(p),
        lo_(lo),
        hi_(hi),
        win_(std::move(win)),
        right_(std::move(right)),
        left_(std::move(left)) {}

  void canonicalize();

  AmbientGroup amb_;
  int64_t p_ = 1;
  int64_t lo_ = 0, hi_ = 0;
  BitVec win_;    // C x [lo, hi)
  BitVec right_;  // C x Z/p
  BitVec left_;   // C x Z/p
};

// ---- Boolean algebra (exact) ----
PeriodicSet unite(const PeriodicSet& a, const PeriodicSet& b);
PeriodicSet intersect(const PeriodicSet& a, const PeriodicSet& b);
/// a \ b.
PeriodicSet subtract(const PeriodicSet& a, const PeriodicSet& b);
PeriodicSet complement(const PeriodicSet& a);

// ---- Geometry ----
/// a + g (translation by one element).
PeriodicSet translate(const PeriodicSet& a, const GroupElement& g);
/// -a (pointwise negation).
PeriodicSet negate_set(const PeriodicSet& a);
/// Minkowski sum a + b = {x + y : x in a, y in b}.
PeriodicSet minkowski_sum(const PeriodicSet& a, const PeriodicSet& b);
/// h-fold sum a + a + ... + a (h >= 1 copies), by doubling.
PeriodicSet h_fold(const PeriodicSet& a, int64_t h);
/// a - a.
PeriodicSet difference_set(const PeriodicSet& a);

// ---- Comparisons up to finitely many exceptions ----
/// True when a \ b is finite.
bool subeq_upto_finite(const PeriodicSet& a, const PeriodicSet& b);
/// True when the symmetric difference of a and b is finite.
bool eq_upto_finite(const PeriodicSet& a, const PeriodicSet& b);
/// The elements of a \ b, which must be finite (PreconditionError otherwise).
std::vector<GroupElement> exceptional_points(const PeriodicSet& a, const PeriodicSet& b);

/// True when a is an exact subset of b.
bool subset_of(const PeriodicSet& a, const PeriodicSet& b);

}  // namespace addbasis
