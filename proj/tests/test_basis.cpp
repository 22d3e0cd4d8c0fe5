#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "addbasis/basis.hpp"
#include "addbasis/density.hpp"
#include "oracle.hpp"

using namespace addbasis;

namespace {

const AmbientGroup Z{};
const AmbientGroup C2({2});

GroupElement el(int64_t n) { return GroupElement{{}, n}; }
GroupElement ce(int64_t c, int64_t n) { return GroupElement{{c}, n}; }

PeriodicSet ray_up(const AmbientGroup& amb, int64_t cflat, int64_t a, int64_t p) {
  int64_t C = amb.torsion_size();
  BitVec right{size_t(C * p)}, left{size_t(C * p)};
  right.set(size_t(cflat * p + floor_mod(a, p)));
  return PeriodicSet::make(amb, p, a, a, BitVec(0), std::move(right), std::move(left));
}

PeriodicSet pts(const AmbientGroup& amb, std::vector<GroupElement> v) {
  return PeriodicSet::from_points(amb, std::move(v));
}

PeriodicSet nat() { return ray_up(Z, 0, 0, 1); }

// W u (a + pN) over Z.
PeriodicSet with_tail(std::vector<int64_t> w, int64_t a, int64_t p) {
  std::vector<GroupElement> v;
  for (int64_t n : w) v.push_back(el(n));
  return unite(pts(Z, v), ray_up(Z, 0, a, p));
}

// <3,5> = {0,3,5,6} u [8, inf).
PeriodicSet sg35() {
  BitVec win{size_t(8)}, right{size_t(1)}, left{size_t(1)};
  for (int64_t n : {0, 3, 5, 6}) win.set(size_t(n));
  right.set(0);
  return PeriodicSet::make(Z, 1, 0, 8, std::move(win), std::move(right), std::move(left));
}

PeriodicSet c2n() { return unite(ray_up(C2, 0, 0, 1), ray_up(C2, 1, 0, 1)); }

SemigroupT t_nat() { return validate_semigroup(nat()); }
SemigroupT t_int() { return validate_semigroup(PeriodicSet::full(Z)); }
SemigroupT t_35() { return validate_semigroup(sg35()); }
SemigroupT t_c2n() { return validate_semigroup(c2n()); }
SemigroupT t_c2z() { return validate_semigroup(PeriodicSet::full(C2)); }

}  // namespace

TEST_CASE("basis: orders of the running examples") {
  SemigroupT t = t_nat();

  BasisReport r1 = ord_star(nat(), t);
  CHECK(r1.is_basis);
  CHECK(r1.order == 1);
  CHECK(r1.exceptional_set.empty());

  BasisReport r2 = ord_star(with_tail({1}, 0, 2), t);  // {1} u 2N
  CHECK(r2.is_basis);
  CHECK(r2.order == 2);
  CHECK(r2.exceptional_set.empty());  // 2A is all of N

  BasisReport r3 = ord_star(with_tail({0, 1}, 0, 3), t);  // {0,1} u 3N
  CHECK(r3.is_basis);
  CHECK(r3.order == 3);

  // {1} u (2 + 2N): order 2, and 2A misses 0 and 1.
  BasisReport r4 = ord_star(with_tail({1}, 2, 2), t);
  CHECK(r4.is_basis);
  CHECK(r4.order == 2);
  CHECK(r4.exceptional_set == std::vector<GroupElement>{el(0), el(1)});

  // Z itself covers N in one fold.
  CHECK(ord_star(PeriodicSet::full(Z), t).order == 1);

  // The invariant: the reported order covers, the previous fold does not.
  PeriodicSet a = with_tail({0, 1}, 0, 3);
  CHECK(subeq_upto_finite(nat(), h_fold(a, 3)));
  CHECK(!subeq_upto_finite(nat(), h_fold(a, 2)));
}

TEST_CASE("basis: non-basis verdicts") {
  SemigroupT t = t_nat();

  // 2N: differences generate 2Z.
  BasisReport r = ord_star(ray_up(Z, 0, 0, 2), t);
  CHECK(!r.is_basis);
  CHECK(r.reason == BasisReport::Reason::proper_subgroup);
  REQUIRE(r.subgroup.has_value());
  CHECK(r.subgroup->index() == 2);

  // A finite set passes the subgroup screen but has no tail.
  BasisReport rf = ord_star(pts(Z, {el(0), el(1)}), t);
  CHECK(!rf.is_basis);
  CHECK(rf.reason == BasisReport::Reason::no_positive_tail);

  // -N is bounded above while N is not.
  BasisReport rn = ord_star(negate_set(nat()), t);
  CHECK(!rn.is_basis);
  CHECK(rn.reason == BasisReport::Reason::no_positive_tail);

  // Over the group Z, a one-sided set cannot be a basis; a two-sided one can.
  CHECK(!ord_star(nat(), t_int()).is_basis);
  CHECK(!ord_star(with_tail({1}, 0, 2), t_int()).is_basis);
  PeriodicSet both = unite(pts(Z, {el(1)}), Subgroup::from_generators(Z, {el(2)}).as_periodic());
  CHECK(ord_star(both, t_int()).order == 2);

  AmbientGroup other({2});
  CHECK_THROWS_AS(ord_star(PeriodicSet::full(other), t), PreconditionError);
}

TEST_CASE("basis: order agrees with the slow covering oracle") {
  std::mt19937_64 rng(0xB4515u);
  int checked = 0;
  while (checked < 60) {
    AmbientGroup amb = oracle::random_ambient(rng);
    SemigroupT t = rng() % 2 ? validate_semigroup(PeriodicSet::full(amb))
                             : validate_semigroup([&] {
                                 PeriodicSet h = ray_up(amb, 0, 0, 1);
                                 for (int64_t c = 1; c < amb.torsion_size(); ++c)
                                   h = unite(h, ray_up(amb, c, 0, 1));
                                 return h;
                               }());
    PeriodicSet a = oracle::random_perset(amb, rng, 5, 6);
    BasisReport r = ord_star(a, t);
    std::optional<int64_t> slow = least_fold_covering(a, t, r.is_basis ? r.order + 2 : 8);
    if (r.is_basis) {
      REQUIRE(slow.has_value());
      CHECK(*slow == r.order);
    } else {
      CHECK(!slow.has_value());
    }
    ++checked;
  }
}

TEST_CASE("basis: erdos_graham criterion") {
  SemigroupT t = t_nat();
  CHECK(!erdos_graham(with_tail({0, 1}, 0, 2), {el(1)}, t));  // leaves 2N
  CHECK(erdos_graham(with_tail({0, 1}, 0, 2), {el(0)}, t));
  CHECK(erdos_graham(nat(), {el(5)}, t));
  CHECK(!erdos_graham(with_tail({1}, 0, 2), {el(1)}, t));

  CHECK_THROWS_AS(erdos_graham(with_tail({1}, 0, 2), {el(5)}, t), PreconditionError);
  CHECK_THROWS_AS(erdos_graham(ray_up(Z, 0, 0, 2), {el(0)}, t), PreconditionError);

  // The criterion matches the removal experiment on random bases.
  std::mt19937_64 rng(0xE6u);
  int checked = 0;
  while (checked < 40) {
    PeriodicSet a = oracle::random_perset(Z, rng, 5, 6);
    if (!ord_star(a, t).is_basis) continue;
    std::vector<GroupElement> w = a.window_points();
    if (w.empty()) continue;
    std::vector<GroupElement> f = {w[rng() % w.size()]};
    if (rng() % 2 && w.size() > 1) {
      GroupElement g = w[rng() % w.size()];
      if (!(g == f[0])) f.push_back(g);
    }
    RemovalEntry e = removal_order(a, f, t);
    CHECK(erdos_graham(a, f, t) == e.regular);
    if (e.regular) CHECK(*e.order >= 1);
    ++checked;
  }
}

TEST_CASE("basis: reservoir of the running examples") {
  SemigroupT t = t_nat();

  Reservoir r1 = reservoir(with_tail({1}, 0, 2), t);  // {1} u 2N
  CHECK(r1.subgroup.contains(el(2)));
  CHECK(!r1.subgroup.contains(el(1)));
  CHECK(r1.subgroup.contains(r1.rep));  // the coset is 0 + 2Z
  CHECK(r1.elements == std::vector<GroupElement>{el(1)});

  Reservoir r2 = reservoir(nat(), t);  // K* = Z, nothing left over
  CHECK(r2.subgroup.index() == 1);
  CHECK(r2.elements.empty());

  // {0,1} u 4N u (2+4N) = {0,1} u 2N.
  PeriodicSet a3 = unite(with_tail({0, 1}, 0, 4), ray_up(Z, 0, 2, 4));
  Reservoir r3 = reservoir(a3, t);
  CHECK(r3.subgroup.contains(el(2)));
  CHECK(!r3.subgroup.contains(el(1)));
  CHECK(r3.subgroup.contains(r3.rep));
  CHECK(r3.elements == std::vector<GroupElement>{el(1)});

  CHECK_THROWS_AS(reservoir(ray_up(Z, 0, 0, 2), t), PreconditionError);

  // Minimality on random bases: the coset captures all but the reservoir,
  // and dropping any reservoir element from the complement breaks that.
  std::mt19937_64 rng(0x5EEDu);
  int checked = 0;
  while (checked < 30) {
    PeriodicSet a = oracle::random_perset(Z, rng, 5, 6);
    if (!ord_star(a, t_int()).is_basis) continue;
    Reservoir res = reservoir(a, t_int());
    PeriodicSet coset = translate(res.subgroup.as_periodic(), res.rep);
    PeriodicSet rem = subtract(a, coset);
    CHECK(rem.is_finite());
    CHECK(rem.window_points() == res.elements);
    for (const GroupElement& g : res.elements) CHECK(a.member(g));
    ++checked;
  }
}

TEST_CASE("basis: essential subsets") {
  SemigroupT t = t_nat();

  EssentialFamily f1 = essential_subsets(with_tail({1}, 0, 2), t, 1);
  CHECK(f1.essentials == std::vector<std::vector<GroupElement>>{{el(1)}});
  CHECK(f1.count_by_size == std::vector<int64_t>{0, 1});
  CHECK(f1.k_max == 1);

  // {1,2} u 5N: neither 1 nor 2 is essential alone, the pair is.
  EssentialFamily f2 = essential_subsets(with_tail({1, 2}, 0, 5), t, 2);
  CHECK(f2.count_by_size == std::vector<int64_t>{0, 0, 1});
  CHECK(f2.essentials == std::vector<std::vector<GroupElement>>{{el(1), el(2)}});

  // N has an empty reservoir and so no essential subsets.
  EssentialFamily f3 = essential_subsets(nat(), t, 3);
  CHECK(f3.essentials.empty());
  CHECK(f3.reservoir.elements.empty());

  CHECK_THROWS_AS(essential_subsets(nat(), t, 0), PreconditionError);

  // A basis of order h has at most h - 1 essential singletons; witnesses
  // exist that meet the cap at h = 2 and h = 3.
  CHECK(f1.count_by_size[1] == 1);  // h = 2
  SemigroupT tc = t_c2n();
  PeriodicSet w3 = unite(pts(C2, {ce(1, 0), ce(0, 1)}), ray_up(C2, 0, 0, 2));
  BasisReport rw = ord_star(w3, tc);
  CHECK(rw.order == 3);
  EssentialFamily fw = essential_subsets(w3, tc, 1);
  CHECK(fw.count_by_size[1] == 2);  // exactly h - 1
  CHECK(fw.essentials ==
        std::vector<std::vector<GroupElement>>{{ce(1, 0)}, {ce(0, 1)}});
}

TEST_CASE("basis: removal orders") {
  SemigroupT t = t_nat();

  RemovalEntry e0 = removal_order(nat(), {el(0)}, t);
  CHECK(e0.regular);
  CHECK(e0.order == 1);

  RemovalEntry e1 = removal_order(with_tail({0, 1}, 0, 2), {el(1)}, t);
  CHECK(!e1.regular);
  CHECK(!e1.order.has_value());

  RemovalEntry e2 = removal_order(with_tail({0, 1}, 0, 2), {el(0)}, t);
  CHECK(e2.regular);
  CHECK(e2.order == 2);

  // Pinned extremal instances: a basis of order 2 with a removal of order 4,
  // and a basis of order 3 with a removal of order 7.
  PeriodicSet a4tail = unite(ray_up(Z, 0, 15, 5), ray_up(Z, 0, 16, 5));
  PeriodicSet x2 = unite(pts(Z, {el(0), el(3)}), a4tail);
  CHECK(ord_star(x2, t).order == 2);
  RemovalEntry r4 = removal_order(x2, {el(3)}, t);
  CHECK(r4.regular);
  CHECK(r4.order == 4);

  PeriodicSet x3 = unite(pts(Z, {el(0), el(3)}),
                         unite(ray_up(Z, 0, 16, 8), ray_up(Z, 0, 17, 8)));
  CHECK(ord_star(x3, t).order == 3);
  RemovalEntry r7 = removal_order(x3, {el(3)}, t);
  CHECK(r7.regular);
  CHECK(r7.order == 7);

  CHECK_THROWS_AS(removal_order(nat(), {el(-5)}, t), PreconditionError);
}

TEST_CASE("basis: bound_audit caps hold") {
  // Group instance {1} u 2Z over Z, order 2.
  SemigroupT tz = t_int();
  PeriodicSet a = with_tail({1}, 0, 2);
  PeriodicSet azz = unite(pts(Z, {el(1)}), Subgroup::from_generators(Z, {el(2)}).as_periodic());
  CHECK(ord_star(azz, tz).order == 2);

  RemovalStudy s = bound_audit(azz, tz, 2, 2);
  CHECK(s.h == 2);
  CHECK(s.index_ok);
  CHECK(s.x1_ok);
  CHECK(s.x2_ok);
  CHECK(s.s1_ok);
  CHECK(s.s1_cap == 2);        // group cap 2(h-1)
  CHECK(s.s1_bad_count == 1);  // only the removal of 1 is irregular
  CHECK(s.s2_checked);
  CHECK(s.s2_ok);
  CHECK(s.max_singleton_order == 2);
  CHECK(!s.entries.empty());

  // Semigroup instance {0,1} u 3N over N, order 3.
  SemigroupT tn = t_nat();
  RemovalStudy sn = bound_audit(with_tail({0, 1}, 0, 3), tn, 3, 1, 6);
  CHECK(sn.index_ok);
  CHECK(sn.x1_ok);
  CHECK(sn.x2_ok);
  CHECK(sn.s1_ok);
  CHECK(sn.s1_cap == 6);  // h(h-1)
  CHECK(!sn.s2_checked);  // not a group carrier

  CHECK_THROWS_AS(bound_audit(with_tail({0, 1}, 0, 3), tn, 2, 1), PreconditionError);
}

TEST_CASE("basis: twobases sandwich") {
  SemigroupT t = t_nat();

  TwoBasesReport r1 = twobases_audit({el(1)}, ray_up(Z, 0, 0, 2), el(0), t);
  CHECK(r1.h1 == 1);
  CHECK(r1.h2 == 1);
  CHECK(r1.h == 2);
  CHECK(r1.ok);

  TwoBasesReport r2 = twobases_audit({el(1)}, ray_up(Z, 0, 0, 3), el(0), t);
  CHECK(r2.h1 == 2);
  CHECK(r2.h2 == 1);
  CHECK(r2.h == 3);
  CHECK(r2.ok);

  TwoBasesReport r3 = twobases_audit({el(3)}, ray_up(Z, 0, 0, 2), el(0), t);
  CHECK(r3.h1 == 1);
  CHECK(r3.h2 == 1);
  CHECK(r3.h == 2);
  CHECK(r3.ok);

  // Torsion carrier: F = {(1,0)}, B = the even class of C2 + N.
  TwoBasesReport r4 = twobases_audit({ce(1, 0)}, ray_up(C2, 0, 0, 1), ce(0, 0), t_c2n());
  CHECK(r4.h1 == 1);
  CHECK(r4.h2 == 1);
  CHECK(r4.h == 2);
  CHECK(r4.ok);

  CHECK_THROWS_AS(twobases_audit({el(1)}, PeriodicSet::empty(Z), el(0), t), PreconditionError);
  CHECK_THROWS_AS(twobases_audit({el(1)}, ray_up(Z, 0, 0, 2), el(1), t), PreconditionError);
  CHECK_THROWS_AS(twobases_audit({el(2)}, ray_up(Z, 0, 0, 2), el(0), t), PreconditionError);
  CHECK_THROWS_AS(twobases_audit({el(2)}, unite(pts(Z, {el(6)}), ray_up(Z, 0, 0, 4)), el(0), t),
                  PreconditionError);  // <F - b + H> = 2Z
}

TEST_CASE("basis: inheritance audit inside the difference subgroup") {
  SemigroupT t = t_nat();
  CHECK(lemma_nn_audit(with_tail({0, 1}, 0, 2), {el(1)}, t));
  CHECK(lemma_nn_audit(nat(), {el(0)}, t));
  CHECK(lemma_nn_audit(with_tail({0, 1}, 0, 3), {el(1)}, t));
  CHECK_THROWS_AS(lemma_nn_audit(pts(Z, {el(0), el(1)}), {el(1)}, t), PreconditionError);

  // Random bases: the audit never finds a counterexample.
  std::mt19937_64 rng(0x22u);
  int checked = 0;
  while (checked < 25) {
    PeriodicSet a = oracle::random_perset(Z, rng, 5, 6);
    if (!ord_star(a, t).is_basis) continue;
    std::vector<GroupElement> w = a.window_points();
    if (w.empty()) continue;
    std::vector<GroupElement> f = {w[rng() % w.size()]};
    if (subtract(a, pts(Z, f)).is_finite()) continue;
    CHECK(lemma_nn_audit(a, f, t));
    ++checked;
  }
}

TEST_CASE("basis: derived group basis") {
  SemigroupT t = t_nat();

  GroupBasisReport g1 = derive_group_basis(with_tail({1}, 0, 2), t);
  CHECK(!g1.trivial);
  PeriodicSet expect1 =
      unite(pts(Z, {el(1)}), Subgroup::from_generators(Z, {el(2)}).as_periodic());
  CHECK(g1.a_prime == expect1);
  CHECK(g1.order_t == 2);
  CHECK(g1.order_g == 2);
  CHECK(g1.families_match);
  CHECK(g1.f_union == std::vector<GroupElement>{el(1)});
  CHECK(g1.essentials_t == std::vector<std::vector<GroupElement>>{{el(1)}});
  CHECK(g1.essentials_g == g1.essentials_t);

  // {0,1} u 4N u (2+4N) derives the same group basis.
  PeriodicSet a2 = unite(with_tail({0, 1}, 0, 4), ray_up(Z, 0, 2, 4));
  GroupBasisReport g2 = derive_group_basis(a2, t);
  CHECK(g2.a_prime == expect1);
  CHECK(g2.order_t == 2);
  CHECK(g2.families_match);

  // N has no essential subsets: the trivial report.
  GroupBasisReport g3 = derive_group_basis(nat(), t);
  CHECK(g3.trivial);
  CHECK(g3.a_prime == PeriodicSet::full(Z));
  CHECK(g3.order_t == 1);
  CHECK(g3.order_g == 1);
  CHECK(g3.families_match);

  // Random N-bases with a nonempty reservoir keep their essential family.
  std::mt19937_64 rng(0xD3u);
  int checked = 0;
  while (checked < 20) {
    PeriodicSet a = oracle::random_perset(Z, rng, 5, 6);
    BasisReport r = ord_star(a, t);
    if (!r.is_basis) continue;
    GroupBasisReport g = derive_group_basis(a, t);
    CHECK(g.families_match);
    if (!g.trivial) CHECK(g.order_g <= g.order_t);
    ++checked;
  }
}

TEST_CASE("basis: construct_exact_order_basis") {
  SemigroupT tn = t_nat();
  CHECK(construct_exact_order_basis(tn, 2) == with_tail({0, 1}, 0, 2));
  CHECK(construct_exact_order_basis(tn, 3) == with_tail({0, 1}, 0, 3));
  for (int64_t h = 2; h <= 6; ++h) {
    PeriodicSet c = construct_exact_order_basis(tn, h);
    CHECK(ord_star(c, tn).order == h);
    CHECK(subset_of(c, nat()));
  }

  SemigroupT t35 = t_35();
  for (int64_t h = 2; h <= 5; ++h) {
    PeriodicSet c = construct_exact_order_basis(t35, h);
    CHECK(ord_star(c, t35).order == h);
    CHECK(subset_of(c, sg35()));
  }

  SemigroupT tc = t_c2n();
  PeriodicSet cc = construct_exact_order_basis(tc, 2);
  CHECK(ord_star(cc, tc).order == 2);
  CHECK(cc.member(ce(0, 0)));
  CHECK(cc.member(ce(1, 0)));
  CHECK(cc.member(ce(0, 1)));
  CHECK(cc.member(ce(1, 1)));

  SemigroupT tz = t_int();
  for (int64_t h = 2; h <= 5; ++h)
    CHECK(ord_star(construct_exact_order_basis(tz, h), tz).order == h);

  SemigroupT tcz = t_c2z();
  for (int64_t h = 2; h <= 3; ++h)
    CHECK(ord_star(construct_exact_order_basis(tcz, h), tcz).order == h);

  CHECK_THROWS_AS(construct_exact_order_basis(tn, 1), PreconditionError);
}

TEST_CASE("basis: witness_search pins the extremal removals") {
  SemigroupT t = t_nat();

  SearchBudget b2;
  b2.max_period = 6;
  b2.max_window = 12;
  b2.popcount_cutoff = 3;
  b2.random_samples = 2000;
  WitnessReport w2 = witness_search(t, 2, 1, b2);
  REQUIRE(w2.best_removal.has_value());
  CHECK(w2.best_removal->order == 2);
  CHECK(w2.best_removal->removal_order == 4);
  CHECK(ord_star(w2.best_removal->a, t).order == 2);
  RemovalEntry conf = removal_order(w2.best_removal->a, w2.best_removal->removed, t);
  CHECK(conf.regular);
  CHECK(conf.order == 4);
  REQUIRE(w2.best_essential.has_value());
  CHECK(w2.best_essential->count == 1);  // at most h - 1 = 1, and attained
  CHECK(w2.candidates_screened > 0);
  CHECK(w2.bases_found > 0);

  // Determinism: the same budget reproduces the same witnesses.
  WitnessReport w2b = witness_search(t, 2, 1, b2);
  REQUIRE(w2b.best_removal.has_value());
  CHECK(w2b.best_removal->a == w2.best_removal->a);
  CHECK(w2b.best_removal->removed == w2.best_removal->removed);
  CHECK(w2b.candidates_screened == w2.candidates_screened);

  SearchBudget b3;
  b3.max_period = 8;
  b3.max_window = 16;
  b3.popcount_cutoff = 2;
  b3.random_samples = 1000;
  WitnessReport w3 = witness_search(t, 3, 1, b3);
  REQUIRE(w3.best_removal.has_value());
  CHECK(w3.best_removal->order == 3);
  CHECK(w3.best_removal->removal_order == 7);

  // Engine path on torsion and group carriers.
  SearchBudget tiny;
  tiny.max_period = 2;
  tiny.max_window = 2;
  tiny.popcount_cutoff = 2;
  tiny.random_samples = 400;
  WitnessReport wc = witness_search(t_c2n(), 2, 1, tiny);
  CHECK(wc.candidates_screened > 0);
  if (wc.best_removal) {
    CHECK(wc.best_removal->removal_order <= 13);  // cubic cap at h = 2
    CHECK(ord_star(wc.best_removal->a, t_c2n()).order == wc.best_removal->order);
  }
  WitnessReport wz = witness_search(t_int(), 2, 1, tiny);
  CHECK(wz.candidates_screened > 0);
  if (wz.best_removal) CHECK(wz.best_removal->removal_order <= 13);

  CHECK_THROWS_AS(witness_search(t, 2, 3, b2), PreconditionError);
}

TEST_CASE("basis: random audits stay within the proved caps") {
  std::mt19937_64 rng(0xCA9u);
  SemigroupT carriers[2] = {t_nat(), t_int()};
  int checked = 0;
  while (checked < 24) {
    SemigroupT& t = carriers[rng() % 2];
    PeriodicSet a = oracle::random_perset(Z, rng, 5, 5);
    BasisReport r = ord_star(a, t);
    if (!r.is_basis || r.order > 4) continue;
    RemovalStudy s = bound_audit(a, t, r.order, 2, 4);
    CHECK(s.index_ok);
    CHECK(s.x1_ok);
    CHECK(s.x2_ok);
    CHECK(s.s1_ok);
    if (s.s2_checked) CHECK(s.s2_ok);
    ++checked;
  }
}
