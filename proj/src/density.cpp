#include "addbasis/density.hpp"

#include <numeric>

namespace addbasis {

namespace {

void check_budget(bool ok) {
  if (!ok) throw PreconditionError("audit budget exceeded");
}

// Number of occupied pattern cells, right and left, of s at its canonical
// period.  Pattern sizes scale linearly under period refinement, so the
// ratio |pattern| / (period * |C|) is a set invariant.
int64_t right_cells(const PeriodicSet& s) { return int64_t(s.right_classes().size()); }
int64_t left_cells(const PeriodicSet& s) { return int64_t(s.left_classes().size()); }

PeriodicSet remove_point(const PeriodicSet& s, const GroupElement& g) {
  return subtract(s, PeriodicSet::from_points(s.ambient(), {g}));
}

}  // namespace

Rational Rational::of(int64_t n, int64_t d) {
  if (d == 0) throw PreconditionError("zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g == 0) return Rational{0, 1};
  return Rational{n / g, d / g};
}

std::string Rational::to_string() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(Rational a, Rational b) {
  return Rational::of(a.num * b.den + b.num * a.den, a.den * b.den);
}
Rational operator-(Rational a, Rational b) {
  return Rational::of(a.num * b.den - b.num * a.den, a.den * b.den);
}
Rational operator*(Rational a, Rational b) { return Rational::of(a.num * b.num, a.den * b.den); }
bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
bool operator<(Rational a, Rational b) {
  return (__int128)a.num * b.den < (__int128)b.num * a.den;
}

Rational natural_density(const PeriodicSet& s, const SemigroupT& t) {
  if (s.ambient() != t.ambient()) throw PreconditionError("ambient group mismatch");
  PeriodicSet i = intersect(s, t.set());
  int64_t cells = i.period() * i.ambient().torsion_size();
  bool below = t.set().bounded_below(), above = t.set().bounded_above();
  if (!below && !above)
    return Rational::of(right_cells(i) + left_cells(i), 2 * cells);
  if (below) return Rational::of(right_cells(i), cells);
  return Rational::of(left_cells(i), cells);
}

PrehistoricReport prehistoric_audit(const PeriodicSet& a, const PeriodicSet& b,
                                    const SemigroupT& t) {
  if (!subset_of(a, t.set()) || !subset_of(b, t.set()))
    throw PreconditionError("prehistoric audit expects subsets of the carrier");
  PrehistoricReport rep{};
  rep.fired = natural_density(a, t) + natural_density(b, t) > Rational{1, 1};
  rep.holds = !rep.fired || subset_of(t.set(), minkowski_sum(a, negate_set(b)));
  return rep;
}

IncrementReport density_increment_audit(const PeriodicSet& b, const PeriodicSet& c,
                                        const SemigroupT& t) {
  check_budget(b.period() <= 12 && c.period() <= 12);
  IncrementReport rep{};
  Rational two{2, 1};
  rep.density_branch = natural_density(minkowski_sum(b, c), t) >= two * natural_density(c, t);
  rep.containment_branch = subset_of(difference_set(b), difference_set(c));
  return rep;
}

IterReport iter_audit(const PeriodicSet& a, int64_t r, int64_t i, const SemigroupT& t) {
  check_budget(a.period() <= 12 && r >= 1 && r <= 5 && i >= 0 && i <= 4);
  IterReport rep{};
  rep.s_i = (int64_t(1) << i) * r + (int64_t(1) << i) - 1;
  Rational pow{int64_t(1) << i, 1};
  rep.density_branch =
      natural_density(h_fold(a, rep.s_i), t) >= pow * natural_density(h_fold(a, r), t);
  rep.stabilized_branch = false;
  if (i >= 1) {
    int64_t s_prev = (int64_t(1) << (i - 1)) * r + (int64_t(1) << (i - 1)) - 1;
    PeriodicSet diff = difference_set(a);
    PeriodicSet span = subgroup_from_periodic(diff).as_periodic();
    rep.stabilized_branch = h_fold(diff, s_prev) == span;
  }
  return rep;
}

Increment2Report density_increment2_audit(const PeriodicSet& a, int64_t h, const SemigroupT& t) {
  check_budget(a.period() <= 12 && h >= 1 && h <= 5);
  Increment2Report rep{};
  rep.alpha = natural_density(h_fold(a, h), t);
  if (!(rep.alpha > Rational{0, 1}))
    throw PreconditionError("density of the h-fold sumset must be positive");
  // floor((h+1)/alpha) - 1
  rep.s_bound = (h + 1) * rep.alpha.den / rep.alpha.num - 1;
  PeriodicSet diff = difference_set(a);
  PeriodicSet span = subgroup_from_periodic(diff).as_periodic();
  PeriodicSet cur = diff;
  for (int64_t s = 1; s <= rep.s_bound; ++s) {
    if (cur == span) {
      rep.s_found = s;
      break;
    }
    cur = minkowski_sum(cur, diff);
  }
  return rep;
}

std::optional<int64_t> least_fold_covering(const PeriodicSet& b, const SemigroupT& t,
                                           int64_t cap) {
  if (b.is_empty()) return std::nullopt;
  PeriodicSet cur = b;
  for (int64_t o = 1; o <= cap; ++o) {
    if (subeq_upto_finite(t.set(), cur)) return o;
    if (o < cap) cur = minkowski_sum(cur, b);
  }
  return std::nullopt;
}

NathNashReport nath_nash_audit(const PeriodicSet& b, int64_t h,
                               const std::vector<GroupElement>& xs, const SemigroupT& t) {
  check_budget(b.period() <= 12 && h >= 1 && h <= 5 && !xs.empty());
  NathNashReport rep{};
  int64_t m = int64_t(xs.size());
  rep.order_bound = h + m * m * (h + 1) - m;

  bool spans = subgroup_from_periodic(difference_set(b)) == Subgroup::whole(b.ambient());
  PeriodicSet hb = h_fold(b, h);
  PeriodicSet cover = PeriodicSet::empty(b.ambient());
  for (const auto& x : xs) cover = unite(cover, translate(hb, x));
  rep.hypothesis = spans && subeq_upto_finite(t.set(), cover);
  if (rep.hypothesis) rep.order_found = least_fold_covering(b, t, rep.order_bound);
  return rep;
}

LowDensityReport low_density_audit(const PeriodicSet& a, const GroupElement& removed, int64_t h,
                                   const SemigroupT& t) {
  check_budget(a.period() <= 12 && h >= 1 && h <= 5);
  if (!a.member(removed)) throw PreconditionError("removed element must belong to the set");
  LowDensityReport rep{};
  PeriodicSet rest = remove_point(a, removed);
  if (rest.is_empty()) {
    rep.defect = natural_density(t.set(), t);
    rep.fired = false;
    rep.holds = true;
    return rep;
  }
  rep.defect = natural_density(subtract(t.set(), h_fold(rest, h)), t);
  bool covered = subeq_upto_finite(t.set(), h_fold(a, h));
  rep.fired = covered && rep.defect < Rational{1, h};
  rep.holds = !rep.fired || subeq_upto_finite(t.set(), h_fold(rest, 2 * h));
  return rep;
}

}  // namespace addbasis
