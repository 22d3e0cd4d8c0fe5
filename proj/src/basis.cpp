#include "addbasis/basis.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>

namespace addbasis {

namespace {

void check_same_ambient(const PeriodicSet& a, const SemigroupT& t) {
  if (!(a.ambient() == t.set().ambient()))
    throw PreconditionError("set and semigroup live in different ambient groups");
}

GroupElement gsub(const AmbientGroup& amb, const GroupElement& a, const GroupElement& b) {
  return add(amb, a, negate(amb, b));
}

Subgroup diff_subgroup(const PeriodicSet& s) {
  if (s.is_empty()) return Subgroup::trivial(s.ambient());
  return subgroup_from_periodic(difference_set(s));
}

bool is_whole(const Subgroup& h) {
  std::optional<int64_t> idx = h.index();
  return idx.has_value() && *idx == 1;
}

/// First materialized element of each occupied tail class: right tails at
/// the least z >= hi in the class, left tails at the greatest z < lo.
struct TailReps {
  std::vector<GroupElement> right;
  std::vector<GroupElement> left;
};

TailReps tail_reps(const PeriodicSet& a) {
  TailReps out;
  const AmbientGroup& amb = a.ambient();
  const int64_t p = a.period();
  for (auto [c, r] : a.right_classes()) {
    int64_t n = a.hi() + floor_mod(r - a.hi(), p);
    out.right.push_back(GroupElement{amb.unflatten(c), n});
  }
  for (auto [c, r] : a.left_classes()) {
    int64_t n = a.lo() - 1 - floor_mod(a.lo() - 1 - r, p);
    out.left.push_back(GroupElement{amb.unflatten(c), n});
  }
  return out;
}

GroupElement first_tail_element(const PeriodicSet& a) {
  TailReps tr = tail_reps(a);
  if (!tr.right.empty()) return tr.right.front();
  if (!tr.left.empty()) return tr.left.front();
  throw InternalError("expected a set with a nonempty tail");
}

/// Least h in [1, hmax] with subeq(T, hA), if any.
std::optional<int64_t> ord_at_most(const PeriodicSet& a, const PeriodicSet& tset, int64_t hmax) {
  if (a.is_empty()) return std::nullopt;
  PeriodicSet cur = a;
  for (int64_t h = 1; h <= hmax; ++h) {
    if (subeq_upto_finite(tset, cur)) return h;
    if (h < hmax) cur = minkowski_sum(cur, a);
  }
  return std::nullopt;
}

int64_t binom(int64_t n, int64_t r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  int64_t out = 1;
  for (int64_t i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

/// Fold cap for the order of A \ F when F is a regular subset of size k of a
/// basis of order <= h: the cubic singleton cap for k = 1, the quadratic-in-
/// binomial cap otherwise.
int64_t removal_fold_cap(int64_t h, int64_t k) {
  if (k <= 1) return (2 * h * h * h + 8 * h * h - 2 * h - 5) / 3;
  const int64_t m = binom(h + k - 1, k);
  return (h + 1) * m * m - m + h;
}

/// Visits every size-c index combination of [0, n) in lexicographic order.
template <class F>
void for_combinations(int64_t n, int64_t c, F&& f) {
  if (c < 0 || c > n) return;
  std::vector<int64_t> idx(static_cast<size_t>(c), 0);
  for (int64_t i = 0; i < c; ++i) idx[size_t(i)] = i;
  for (;;) {
    f(idx);
    if (c == 0) return;
    int64_t i = c - 1;
    while (i >= 0 && idx[size_t(i)] == n - c + i) --i;
    if (i < 0) return;
    ++idx[size_t(i)];
    for (int64_t j = i + 1; j < c; ++j) idx[size_t(j)] = idx[size_t(j - 1)] + 1;
  }
}

Reservoir reservoir_impl(const PeriodicSet& a) {
  const AmbientGroup& amb = a.ambient();
  TailReps tr = tail_reps(a);
  std::vector<GroupElement> tails = tr.right;
  tails.insert(tails.end(), tr.left.begin(), tr.left.end());
  if (tails.empty()) throw InternalError("reservoir: basis without tail classes");
  const GroupElement& e0 = tails.front();
  // The subgroup is generated by genuine differences of elements of A: the
  // cross-class differences e_i - e_0 and the period vector, which is the
  // difference of two consecutive elements of any one tail class.
  std::vector<GroupElement> gens;
  gens.reserve(tails.size());
  for (size_t i = 1; i < tails.size(); ++i) gens.push_back(gsub(amb, tails[i], e0));
  GroupElement period = zero_element(amb);
  period.n = a.period();
  gens.push_back(period);
  Subgroup h0 = Subgroup::from_generators(amb, gens);
  PeriodicSet rem = subtract(a, translate(h0.as_periodic(), e0));
  if (!rem.is_finite()) throw InternalError("reservoir: remainder is not finite");
  return Reservoir{std::move(h0), e0, rem.window_points()};
}

/// Removal experiment without re-verifying that A is a basis.
RemovalEntry removal_entry_impl(const PeriodicSet& a, const std::vector<GroupElement>& f,
                                const SemigroupT& t) {
  RemovalEntry e;
  e.removed = f;
  std::sort(e.removed.begin(), e.removed.end());
  PeriodicSet b = subtract(a, PeriodicSet::from_points(a.ambient(), f));
  if (!is_whole(diff_subgroup(b))) return e;
  e.regular = true;
  BasisReport r = ord_star(b, t);
  if (!r.is_basis) throw InternalError("removal_order: a regular subset left a non-basis");
  e.order = r.order;
  return e;
}

/// Essential-subset enumeration over a precomputed reservoir; A must already
/// be a certified basis of T.
EssentialFamily essential_family_impl(const PeriodicSet& a, int64_t k_max, Reservoir res) {
  const AmbientGroup& amb = a.ambient();
  const int64_t n = int64_t(res.elements.size());
  if (n > 64) throw PreconditionError("essential_subsets: reservoir exceeds 64 elements");

  EssentialFamily fam{std::move(res), {}, std::vector<int64_t>(size_t(k_max) + 1, 0), k_max};
  std::vector<uint64_t> exceptional;  // masks of found essential subsets
  for (int64_t k = 1; k <= std::min(k_max, n); ++k) {
    for_combinations(n, k, [&](const std::vector<int64_t>& idx) {
      uint64_t mask = 0;
      for (int64_t i : idx) mask |= uint64_t(1) << i;
      // Upset pruning: a strict superset of an exceptional set is exceptional
      // but not minimal.
      for (uint64_t e : exceptional)
        if ((e & mask) == e) return;
      std::vector<GroupElement> pts;
      pts.reserve(size_t(k));
      for (int64_t i : idx) pts.push_back(fam.reservoir.elements[size_t(i)]);
      PeriodicSet b = subtract(a, PeriodicSet::from_points(amb, pts));
      Subgroup he = diff_subgroup(b);
      if (is_whole(he)) return;
      // Exceptional, and minimal because every proper subset was enumerated
      // earlier and found regular: essential.
      exceptional.push_back(mask);
      // Cross-check: G/H_E must be finite cyclic and generated by the image
      // of x - a for x in E and a in A \ E.
      QuotientInfo q = quotient(he);
      if (!q.is_finite || !q.is_cyclic)
        throw VerificationError("essential subset whose quotient is not finite cyclic");
      GroupElement d = gsub(amb, pts.front(), first_tail_element(b));
      PeriodicSet gen = unite(he.as_periodic(), PeriodicSet::from_points(amb, {d}));
      if (!is_whole(subgroup_from_periodic(gen)))
        throw VerificationError("essential subset whose quotient is not generated by x - a");
      fam.essentials.push_back(std::move(pts));
      ++fam.count_by_size[size_t(k)];
    });
  }
  return fam;
}

}  // namespace

std::string BasisReport::to_string() const {
  std::ostringstream os;
  if (is_basis) {
    os << "basis of order " << order << " (" << exceptional_set.size() << " exceptional points)";
  } else if (reason == Reason::proper_subgroup) {
    os << "not a basis (differences generate a proper subgroup)";
  } else {
    os << "not a basis (no tail in a required direction)";
  }
  return os.str();
}

BasisReport ord_star(const PeriodicSet& a, const SemigroupT& t) {
  check_same_ambient(a, t);
  const PeriodicSet& ts = t.set();

  BasisReport rep;
  Subgroup h_sub = diff_subgroup(a);
  if (!is_whole(h_sub)) {
    rep.reason = BasisReport::Reason::proper_subgroup;
    rep.subgroup = std::move(h_sub);
    return rep;
  }
  if ((!ts.bounded_above() && a.bounded_above()) || (!ts.bounded_below() && a.bounded_below())) {
    rep.reason = BasisReport::Reason::no_positive_tail;
    return rep;
  }

  // Fold loop with the certified caps (see the declaration): an instance cap
  // (l-1)s + l from the weak order l and the self-intersection step s, and
  // an a-priori quotient bound within which s, l, and the order itself must
  // all appear once the screens pass.
  const int64_t grow_cap =
      a.ambient().torsion_size() * std::lcm(a.period(), ts.period()) + 1;
  std::optional<int64_t> s_step;    // least s with sA n (s+1)A nonempty
  std::optional<int64_t> weak_ord;  // least l with T subeq (A u 2A u ... u lA)
  PeriodicSet cur = a;              // hA
  PeriodicSet uni = a;              // union of the folds so far
  int64_t h = 1;
  for (;;) {
    if (subeq_upto_finite(ts, cur)) break;
    if (s_step && weak_ord && h >= (*weak_ord - 1) * *s_step + *weak_ord)
      throw InternalError("ord_star: certified fold cap exceeded");
    if ((!s_step || !weak_ord) && h > grow_cap)
      throw InternalError("ord_star: fold images failed to stabilize");
    PeriodicSet next = minkowski_sum(cur, a);
    if (!s_step && !intersect(cur, next).is_empty()) s_step = h;
    if (!weak_ord) {
      uni = unite(uni, next);
      if (subeq_upto_finite(ts, uni)) weak_ord = h + 1;
    }
    cur = std::move(next);
    ++h;
  }
  rep.is_basis = true;
  rep.order = h;
  rep.exceptional_set = exceptional_points(ts, cur);
  return rep;
}

bool erdos_graham(const PeriodicSet& a, const std::vector<GroupElement>& f, const SemigroupT& t) {
  check_same_ambient(a, t);
  for (const GroupElement& g : f)
    if (!a.member(g)) throw PreconditionError("erdos_graham: F is not a subset of A");
  if (!ord_star(a, t).is_basis) throw PreconditionError("erdos_graham: A is not a basis of T");
  PeriodicSet b = subtract(a, PeriodicSet::from_points(a.ambient(), f));
  return is_whole(diff_subgroup(b));
}

Reservoir reservoir(const PeriodicSet& a, const SemigroupT& t) {
  check_same_ambient(a, t);
  if (!ord_star(a, t).is_basis) throw PreconditionError("reservoir: A is not a basis of T");
  return reservoir_impl(a);
}

EssentialFamily essential_subsets(const PeriodicSet& a, const SemigroupT& t, int64_t k_max) {
  check_same_ambient(a, t);
  if (k_max < 1) throw PreconditionError("essential_subsets: k_max must be at least 1");
  if (!ord_star(a, t).is_basis)
    throw PreconditionError("essential_subsets: A is not a basis of T");
  return essential_family_impl(a, k_max, reservoir_impl(a));
}

RemovalEntry removal_order(const PeriodicSet& a, const std::vector<GroupElement>& f,
                           const SemigroupT& t) {
  check_same_ambient(a, t);
  for (const GroupElement& g : f)
    if (!a.member(g)) throw PreconditionError("removal_order: F is not a subset of A");
  if (!ord_star(a, t).is_basis) throw PreconditionError("removal_order: A is not a basis of T");
  return removal_entry_impl(a, f, t);
}

RemovalStudy bound_audit(const PeriodicSet& a, const SemigroupT& t, int64_t h, int64_t k,
                         int64_t tail_samples) {
  check_same_ambient(a, t);
  if (k < 1) throw PreconditionError("bound_audit: k must be at least 1");
  if (tail_samples < 0) throw PreconditionError("bound_audit: tail_samples must be nonnegative");
  BasisReport base = ord_star(a, t);
  if (!base.is_basis || base.order != h)
    throw PreconditionError("bound_audit: h is not the certified order of A");

  const AmbientGroup& amb = a.ambient();
  const PeriodicSet& ts = t.set();
  const bool group = !ts.bounded_below() && !ts.bounded_above();
  // Every cap below holds for any basis of order <= h_eff; raising h to 2
  // only weakens the hypothesis.
  const int64_t he = std::max<int64_t>(h, 2);

  Reservoir res = reservoir_impl(a);
  std::vector<GroupElement> pool = res.elements;
  {
    TailReps tr = tail_reps(a);
    GroupElement step = zero_element(amb);
    step.n = a.period();
    int64_t collected = 0;
    for (int64_t j = 0; collected < tail_samples; ++j) {
      bool any = false;
      for (const GroupElement& e : tr.right) {
        if (collected >= tail_samples) break;
        pool.push_back(add(amb, e, scale(amb, j, step)));
        ++collected;
        any = true;
      }
      for (const GroupElement& e : tr.left) {
        if (collected >= tail_samples) break;
        pool.push_back(add(amb, e, scale(amb, -j, step)));
        ++collected;
        any = true;
      }
      if (!any) break;
    }
  }
  const int64_t n = int64_t(pool.size());
  if (n > 64) throw PreconditionError("bound_audit: removal pool exceeds 64 elements");

  RemovalStudy study;
  study.h = h;
  study.k = k;
  for (int64_t kk = 1; kk <= std::min(k, n); ++kk) {
    for_combinations(n, kk, [&](const std::vector<int64_t>& idx) {
      std::vector<GroupElement> f;
      f.reserve(size_t(kk));
      for (int64_t i : idx) f.push_back(pool[size_t(i)]);
      RemovalEntry entry;
      entry.removed = f;
      PeriodicSet b = subtract(a, PeriodicSet::from_points(amb, f));
      Subgroup hf = diff_subgroup(b);
      std::optional<int64_t> idxH = hf.index();
      if (!idxH || *idxH > binom(he + kk - 1, he - 1)) study.index_ok = false;
      if (idxH && *idxH == 1) {
        entry.regular = true;
        BasisReport r = ord_star(b, t);
        if (!r.is_basis) throw InternalError("bound_audit: a regular subset left a non-basis");
        entry.order = r.order;
        if (kk == 1) {
          if (3 * r.order > 2 * he * he * he + 8 * he * he - 2 * he - 5) study.x1_ok = false;
          if (!study.max_singleton_order || r.order > *study.max_singleton_order)
            study.max_singleton_order = r.order;
        }
        const int64_t m = binom(he + kk - 1, kk);
        if (r.order > (he + 1) * m * m - m + he) study.x2_ok = false;
      }
      study.entries.push_back(std::move(entry));
    });
  }

  study.s1_cap = group ? 2 * (he - 1) : he * (he - 1);
  for (const RemovalEntry& e : study.entries)
    if (e.removed.size() == 1 && (!e.regular || *e.order > 2 * he)) ++study.s1_bad_count;
  study.s1_ok = study.s1_bad_count <= study.s1_cap;

  if (group && k >= 2 && study.max_singleton_order) {
    const int64_t xo = *study.max_singleton_order;
    study.s2_checked = true;
    study.s2_cap = 4 * he * (xo - 1);
    for (const RemovalEntry& e : study.entries)
      if (e.removed.size() == 2 && e.regular && *e.order > 2 * xo) ++study.s2_pair_count;
    study.s2_ok = study.s2_pair_count <= study.s2_cap;
  }
  return study;
}

TwoBasesReport twobases_audit(const std::vector<GroupElement>& f, const PeriodicSet& b_set,
                              const GroupElement& b, const SemigroupT& t) {
  check_same_ambient(b_set, t);
  const AmbientGroup& amb = b_set.ambient();
  if (b_set.is_empty()) throw PreconditionError("twobases_audit: B is empty");
  if (!b_set.member(b)) throw PreconditionError("twobases_audit: b is not an element of B");
  for (const GroupElement& g : f)
    if (b_set.member(g)) throw PreconditionError("twobases_audit: F intersects B");
  Subgroup hsub = diff_subgroup(b_set);
  if (!hsub.finite_index())
    throw PreconditionError("twobases_audit: <B - B> has infinite index in G");
  std::vector<GroupElement> fshift;
  fshift.reserve(f.size());
  for (const GroupElement& g : f) fshift.push_back(gsub(amb, g, b));
  {
    PeriodicSet gen = unite(hsub.as_periodic(), PeriodicSet::from_points(amb, fshift));
    if (!is_whole(subgroup_from_periodic(gen)))
      throw PreconditionError("twobases_audit: <F - b + H> is not all of G");
  }

  TwoBasesReport rep;
  // h1: minimal m with m((F - b) u {0}) + H = G, found by iterating coset
  // coverage.  Coverage grows by at least one coset per step until stable,
  // and stability short of G would contradict <F - b + H> = G.
  {
    std::vector<GroupElement> spts = fshift;
    spts.push_back(zero_element(amb));
    PeriodicSet step = PeriodicSet::from_points(amb, spts);
    PeriodicSet cov = hsub.as_periodic();
    PeriodicSet full = PeriodicSet::full(amb);
    const int64_t cap = *hsub.index() + 1;
    int64_t m = 0;
    while (!(cov == full)) {
      if (m > cap) throw InternalError("twobases_audit: coset coverage failed to close");
      cov = minkowski_sum(cov, step);
      ++m;
    }
    rep.h1 = m;
  }
  // h2: the order of B - b over T n H inside H's own coordinates.
  {
    SemigroupT tc = t_cap_H(t, hsub);
    Reembedding re(hsub);
    PeriodicSet bim = re.transport(translate(b_set, negate(amb, b)));
    BasisReport r2 = ord_star(bim, tc);
    if (r2.is_basis) rep.h2 = r2.order;
  }
  // h: the order of F u B over T.
  {
    BasisReport ra = ord_star(unite(PeriodicSet::from_points(amb, f), b_set), t);
    if (ra.is_basis) rep.h = ra.order;
  }
  rep.ok = (rep.h2 && rep.h) ? (rep.h1 + 1 <= *rep.h && *rep.h <= rep.h1 + *rep.h2)
                             : (!rep.h2 && !rep.h);
  return rep;
}

bool lemma_nn_audit(const PeriodicSet& a, const std::vector<GroupElement>& f,
                    const SemigroupT& t) {
  check_same_ambient(a, t);
  const AmbientGroup& amb = a.ambient();
  for (const GroupElement& g : f)
    if (!a.member(g)) throw PreconditionError("lemma_nn_audit: F is not a subset of A");
  if (!ord_star(a, t).is_basis) throw PreconditionError("lemma_nn_audit: A is not a basis of T");
  PeriodicSet b_set = subtract(a, PeriodicSet::from_points(amb, f));
  if (b_set.is_finite()) throw PreconditionError("lemma_nn_audit: A \\ F is finite");
  Subgroup hsub = diff_subgroup(b_set);
  if (!hsub.finite_index()) return false;
  SemigroupT tc = t_cap_H(t, hsub);
  Reembedding re(hsub);
  GroupElement b = first_tail_element(b_set);
  PeriodicSet bim = re.transport(translate(b_set, negate(amb, b)));
  return ord_star(bim, tc).is_basis;
}

GroupBasisReport derive_group_basis(const PeriodicSet& a, const SemigroupT& t) {
  check_same_ambient(a, t);
  const AmbientGroup& amb = a.ambient();
  BasisReport rep = ord_star(a, t);
  if (!rep.is_basis) throw PreconditionError("derive_group_basis: A is not a basis of T");
  Reservoir res = reservoir_impl(a);
  const int64_t kmax = std::max<int64_t>(1, int64_t(res.elements.size()));
  EssentialFamily fam = essential_family_impl(a, kmax, res);

  std::vector<GroupElement> funion;
  for (const auto& e : fam.essentials) funion.insert(funion.end(), e.begin(), e.end());
  std::sort(funion.begin(), funion.end());
  funion.erase(std::unique(funion.begin(), funion.end()), funion.end());

  SemigroupT tg = validate_semigroup(PeriodicSet::full(amb));
  if (funion.empty()) {
    PeriodicSet aprime = PeriodicSet::full(amb);
    BasisReport rg = ord_star(aprime, tg);
    return GroupBasisReport{std::move(aprime), true, rep.order, rg.order, true, {}, {}, {}};
  }

  PeriodicSet b_set = subtract(a, PeriodicSet::from_points(amb, funion));
  Subgroup hsub = diff_subgroup(b_set);
  GroupElement b = first_tail_element(b_set);
  PeriodicSet aprime =
      unite(PeriodicSet::from_points(amb, funion), translate(hsub.as_periodic(), b));
  BasisReport rg = ord_star(aprime, tg);
  if (!rg.is_basis || rg.order > rep.order)
    throw VerificationError("derive_group_basis: derived set failed basis certification");
  Reservoir resg = reservoir_impl(aprime);
  const int64_t kmaxg = std::max<int64_t>(1, int64_t(resg.elements.size()));
  EssentialFamily famg = essential_family_impl(aprime, kmaxg, std::move(resg));

  bool match = fam.essentials == famg.essentials;
  return GroupBasisReport{std::move(aprime),       false, rep.order,
                          rg.order,                match, std::move(funion),
                          std::move(fam.essentials), std::move(famg.essentials)};
}

PeriodicSet construct_exact_order_basis(const SemigroupT& t, int64_t h) {
  if (h < 2) throw PreconditionError("construct_exact_order_basis: h must be at least 2");
  const AmbientGroup& amb = t.set().ambient();
  const PeriodicSet& ts = t.set();
  StructureReport sr = structure_decompose(t);

  auto fiber = [&](int64_t z) {
    std::vector<GroupElement> pts;
    pts.reserve(size_t(amb.torsion_size()));
    for (int64_t c = 0; c < amb.torsion_size(); ++c)
      pts.push_back(GroupElement{amb.unflatten(c), z});
    return PeriodicSet::from_points(amb, pts);
  };
  auto zvec = [&](int64_t z) {
    GroupElement g = zero_element(amb);
    g.n = z;
    return g;
  };
  auto certify = [&](const PeriodicSet& cand) {
    if (cand.is_empty() || !subset_of(cand, ts)) return false;
    BasisReport r = ord_star(cand, t);
    return r.is_basis && r.order == h;
  };

  std::vector<PeriodicSet> candidates;
  int64_t dir = 1;
  int64_t base = 0;
  if (sr.kind == StructureReport::Kind::group) {
    // The subgroup C + h*step*Z together with the full fiber one level up:
    // the j-fold sum covers the classes 0..j-1 modulo h, so exactly h folds
    // are needed.
    std::vector<GroupElement> gens;
    for (int64_t c = 0; c < amb.torsion_size(); ++c)
      gens.push_back(GroupElement{amb.unflatten(c), 0});
    gens.push_back(zvec(h));
    candidates.push_back(unite(Subgroup::from_generators(amb, gens).as_periodic(), fiber(1)));
    candidates.push_back(unite(Subgroup::from_generators(amb, gens).as_periodic(),
                               PeriodicSet::from_points(amb, {zvec(1)})));
  } else {
    // Two adjacent full fibers at the carrier's tail edge (beyond which every
    // class is full) feed every torsion class and both residues needed to
    // walk the h-step ray; the h-fold covers T cofinitely while the
    // (h-1)-fold misses one residue class modulo h cofinitely.
    dir = sr.x.n > 0 ? 1 : -1;
    base = dir > 0 ? ts.hi() : ts.lo() - 1;
    PeriodicSet ray = translate(orbit_ray(amb, zvec(dir * h)), zvec(base));
    candidates.push_back(unite(unite(fiber(base), fiber(base + dir)), ray));
    // Fallback family built from the decomposition's remainder set.
    PeriodicSet rset = PeriodicSet::from_points(amb, sr.R);
    PeriodicSet rxset = unite(rset, translate(rset, sr.x));
    PeriodicSet hxray = orbit_ray(amb, scale(amb, h, sr.x));
    for (const GroupElement& r0 : sr.R) candidates.push_back(unite(rxset, translate(hxray, r0)));
    candidates.push_back(unite(rxset, minkowski_sum(rset, hxray)));
  }
  for (const PeriodicSet& cand : candidates)
    if (certify(cand)) return cand;

  // Bounded fallback search over small tail periods and fiber windows.
  const int64_t step = sr.kind == StructureReport::Kind::group ? 1 : std::abs(sr.x.n);
  const int64_t qmax = std::clamp<int64_t>(h * step, 2, 24);
  std::vector<GroupElement> wpool;
  for (int64_t c = 0; c < amb.torsion_size(); ++c) {
    wpool.push_back(GroupElement{amb.unflatten(c), base});
    wpool.push_back(GroupElement{amb.unflatten(c), base + dir});
  }
  for (int64_t q = 2; q <= qmax; ++q) {
    std::vector<PeriodicSet> tails;
    if (sr.kind == StructureReport::Kind::group) {
      tails.push_back(Subgroup::from_generators(amb, {zvec(q)}).as_periodic());
      std::vector<GroupElement> gens;
      for (int64_t c = 0; c < amb.torsion_size(); ++c)
        gens.push_back(GroupElement{amb.unflatten(c), 0});
      gens.push_back(zvec(q));
      tails.push_back(Subgroup::from_generators(amb, gens).as_periodic());
    } else {
      PeriodicSet ray = translate(orbit_ray(amb, zvec(dir * q)), zvec(base));
      tails.push_back(ray);
      tails.push_back(minkowski_sum(fiber(0), ray));
    }
    const int64_t n = int64_t(wpool.size());
    for (int64_t c = 0; c <= std::min<int64_t>(n, 4); ++c) {
      for (const PeriodicSet& tail : tails) {
        std::optional<PeriodicSet> found;
        for_combinations(n, c, [&](const std::vector<int64_t>& idx) {
          if (found) return;
          std::vector<GroupElement> pts;
          for (int64_t i : idx) pts.push_back(wpool[size_t(i)]);
          PeriodicSet cand = unite(PeriodicSet::from_points(amb, pts), tail);
          if (!subset_of(cand, ts) || !is_whole(diff_subgroup(cand))) return;
          if (ord_at_most(cand, ts, h) == h && certify(cand)) found = cand;
        });
        if (found) return *found;
      }
    }
  }
  throw VerificationError("construct_exact_order_basis: no candidate certified order exactly " +
                          std::to_string(h));
}

namespace {

/// Residue-mask sumset modulo p: every residue of x plus every residue of y.
uint32_t mask_sum(uint32_t x, uint32_t y, int64_t p, uint32_t fullp) {
  if (!x || !y) return 0;
  uint32_t out = 0;
  while (y) {
    const int b = std::countr_zero(y);
    y &= y - 1;
    out |= ((x << b) | (x >> (p - b))) & fullp;
  }
  return out;
}

/// True when the mask over Z/p is not the replication of a mask over a
/// proper divisor of p (such tails were already enumerated at the divisor).
bool primitive_mask(uint32_t m, int64_t p) {
  for (int64_t d = 1; d < p; ++d) {
    if (p % d != 0) continue;
    bool rep = true;
    for (int64_t r = 0; r < p && rep; ++r)
      rep = ((m >> r) & 1) == ((m >> (r % d)) & 1);
    if (rep) return false;
  }
  return true;
}

/// Least m in [1, hmax] whose m-fold residue coverage modulo p is full:
/// the union over splits m = i + j (j >= 1) of (i window points) + (j tail
/// points), computed on residue masks.  For a torsion-free ambient group
/// with T bounded below and cofinite in a shifted half-line this equals the
/// least m with subeq(T, mA).
std::optional<int64_t> screen_order(int64_t p, uint32_t fullp, uint32_t smask, uint32_t wmask,
                                    int64_t hmax) {
  std::vector<uint32_t> ws(size_t(hmax) + 1, 0), cs(size_t(hmax) + 1, 0);
  ws[0] = 1;
  for (int64_t i = 1; i <= hmax; ++i) ws[size_t(i)] = mask_sum(ws[size_t(i - 1)], wmask, p, fullp);
  cs[0] = 0;
  if (hmax >= 1) cs[1] = smask;
  for (int64_t j = 2; j <= hmax; ++j) cs[size_t(j)] = mask_sum(cs[size_t(j - 1)], smask, p, fullp);
  for (int64_t m = 1; m <= hmax; ++m) {
    uint32_t cov = 0;
    for (int64_t j = 1; j <= m; ++j) cov |= mask_sum(ws[size_t(m - j)], cs[size_t(j)], p, fullp);
    if (cov == fullp) return m;
  }
  return std::nullopt;
}

struct SearchRec {
  int64_t score = -1;
  int64_t ord = 0;
  // Tie-break tuple: candidates are ranked by (period, window, window size,
  // tail mask) so the reported argmax is independent of enumeration order.
  int64_t p = 0, w = 0, wsize = 0;
  uint32_t smask = 0;
  int64_t base = 0;
  std::vector<int64_t> wpts;
  std::vector<int64_t> removed;
  // Engine-path records carry their sets directly.
  std::optional<PeriodicSet> engine_a;
  std::vector<GroupElement> engine_rem;
};

bool improves(int64_t score, int64_t p, int64_t w, int64_t wsize, uint32_t smask,
              const SearchRec& cur) {
  if (score != cur.score) return score > cur.score;
  return std::make_tuple(p, w, wsize, int64_t(smask)) <
         std::make_tuple(cur.p, cur.w, cur.wsize, int64_t(cur.smask));
}

}  // namespace

WitnessReport witness_search(const SemigroupT& t, int64_t h, int64_t k,
                             const SearchBudget& budget) {
  const AmbientGroup& amb = t.set().ambient();
  const PeriodicSet& ts = t.set();
  WitnessReport rep;
  if (h < 1 || budget.max_period < 1 || budget.max_window < 0) return rep;
  if (k < 1 || k > 2) throw PreconditionError("witness_search: k must be 1 or 2");
  if (budget.max_period > 16)
    throw PreconditionError("witness_search: period budget above 16 is not supported");
  if (budget.max_window > 62)
    throw PreconditionError("witness_search: window budget above 62 is not supported");

  const int64_t xf = removal_fold_cap(h, k);

  // Fast residue-arithmetic path: torsion-free ambient, T bounded below with
  // a full tail pattern (T contains every integer from its canonical split
  // point on).  Candidate orders, regularity and essential counts are then
  // functions of residues alone; witnesses are re-certified by the engine.
  bool fast = amb.torsion_size() == 1 && ts.bounded_below() && !ts.is_finite();
  if (fast)
    for (int64_t r = 0; r < ts.period() && fast; ++r)
      if (!ts.right_bits().test(size_t(r))) fast = false;

  SearchRec bx, be;
  if (fast) {
    const int64_t tmin = ts.min_n();
    const int64_t zstar = ts.hi();
    std::vector<int64_t> twin;  // T's elements in [tmin, tmin + max_window)
    for (int64_t n = tmin; n < tmin + budget.max_window; ++n)
      if (ts.member(0, n)) twin.push_back(n);

    auto evaluate = [&](int64_t p, uint32_t fullp, uint32_t smask, const std::vector<uint32_t>& cs,
                        int64_t gc, int64_t r0, int64_t w, const std::vector<int64_t>& wsel,
                        int64_t wsize_rank) {
      ++rep.candidates_screened;
      // Difference subgroup as a gcd over residues: the period, the tail
      // class offsets, and the window offsets relative to the first class.
      int64_t g = gc;
      for (int64_t v : wsel) g = std::gcd(g, floor_mod(v - r0, p));
      if (g != 1) return;
      uint32_t wmask = 0;
      for (int64_t v : wsel) wmask |= uint32_t(1) << floor_mod(v, p);
      std::optional<int64_t> ord;
      {
        std::vector<uint32_t> ws(size_t(h) + 1, 0);
        ws[0] = 1;
        for (int64_t i = 1; i <= h; ++i)
          ws[size_t(i)] = mask_sum(ws[size_t(i - 1)], wmask, p, fullp);
        for (int64_t m = 1; m <= h && !ord; ++m) {
          uint32_t cov = 0;
          for (int64_t j = 1; j <= m; ++j)
            cov |= mask_sum(ws[size_t(m - j)], cs[size_t(j)], p, fullp);
          if (cov == fullp) ord = m;
        }
      }
      if (!ord) return;
      ++rep.bases_found;
      const int64_t base = std::max(tmin + w, zstar);

      // Removal target: subsets of the window of size k.  Removing a tail
      // element leaves every residue in place, hence the order unchanged, so
      // window removals dominate.
      for_combinations(int64_t(wsel.size()), k, [&](const std::vector<int64_t>& ridx) {
        int64_t g2 = gc;
        uint32_t wmask2 = 0;
        std::vector<int64_t> kept;
        size_t ri = 0;
        for (size_t i = 0; i < wsel.size(); ++i) {
          if (ri < ridx.size() && int64_t(i) == ridx[ri]) {
            ++ri;
            continue;
          }
          kept.push_back(wsel[i]);
          g2 = std::gcd(g2, floor_mod(wsel[i] - r0, p));
          wmask2 |= uint32_t(1) << floor_mod(wsel[i], p);
        }
        if (g2 != 1) return;
        std::optional<int64_t> ro = screen_order(p, fullp, smask, wmask2, xf);
        if (!ro) throw InternalError("witness_search: removal order exceeded its cap");
        if (improves(*ro, p, w, wsize_rank, smask, bx)) {
          bx = SearchRec{*ro, *ord, p, w, wsize_rank, smask, base, wsel, {}, {}, {}};
          for (int64_t i : ridx) bx.removed.push_back(wsel[size_t(i)]);
        }
      });

      // Essential target: subsets of the window of size k (every essential
      // subset avoids the minimal coset, whose elements all sit in the tail
      // classes, so the window carries them all).
      int64_t count = 0;
      auto gcd_without = [&](uint64_t skip_mask) {
        int64_t g2 = gc;
        for (size_t i = 0; i < wsel.size(); ++i)
          if (!(skip_mask >> i & 1)) g2 = std::gcd(g2, floor_mod(wsel[i] - r0, p));
        return g2;
      };
      if (k == 1) {
        for (size_t i = 0; i < wsel.size(); ++i)
          if (gcd_without(uint64_t(1) << i) != 1) ++count;
      } else {
        for (size_t i = 0; i < wsel.size(); ++i)
          for (size_t j = i + 1; j < wsel.size(); ++j)
            if (gcd_without((uint64_t(1) << i) | (uint64_t(1) << j)) != 1 &&
                gcd_without(uint64_t(1) << i) == 1 && gcd_without(uint64_t(1) << j) == 1)
              ++count;
      }
      if (improves(count, p, w, wsize_rank, smask, be))
        be = SearchRec{count, *ord, p, w, wsize_rank, smask, base, wsel, {}, {}, {}};
    };

    for (int64_t p = 1; p <= budget.max_period; ++p) {
      const uint32_t fullp = (uint32_t(1) << p) - 1;
      for (uint32_t smask = 1; smask <= fullp; ++smask) {
        if (!primitive_mask(smask, p)) continue;
        const int64_t r0 = std::countr_zero(smask);
        int64_t gc = p;
        for (int64_t r = r0 + 1; r < p; ++r)
          if (smask >> r & 1) gc = std::gcd(gc, r - r0);
        std::vector<uint32_t> cs(size_t(std::max(h, int64_t(1))) + 1, 0);
        cs[1] = smask;
        for (int64_t j = 2; j <= h; ++j) cs[size_t(j)] = mask_sum(cs[size_t(j - 1)], smask, p, fullp);
        for (int64_t w = 0; w <= budget.max_window; ++w) {
          if (w == 0) {
            evaluate(p, fullp, smask, cs, gc, r0, 0, {}, 0);
            continue;
          }
          // The window must use its rightmost slot, so each set is seen at
          // exactly one width.
          const int64_t last = tmin + w - 1;
          if (!ts.member(0, last)) continue;
          std::vector<int64_t> pool;
          for (int64_t v : twin)
            if (v < last) pool.push_back(v);
          const int64_t np = int64_t(pool.size());
          for (int64_t c = 1; c <= std::min(budget.popcount_cutoff, np + 1); ++c) {
            for_combinations(np, c - 1, [&](const std::vector<int64_t>& idx) {
              std::vector<int64_t> wsel;
              wsel.reserve(size_t(c));
              for (int64_t i : idx) wsel.push_back(pool[size_t(i)]);
              wsel.push_back(last);
              evaluate(p, fullp, smask, cs, gc, r0, w, wsel, c);
            });
          }
        }
      }
    }

    // Randomized regime beyond the exhaustive window cutoff.
    std::mt19937_64 rng(budget.seed);
    for (int64_t draw = 0; draw < budget.random_samples; ++draw) {
      const int64_t p = 1 + int64_t(rng() % uint64_t(budget.max_period));
      const uint32_t fullp = (uint32_t(1) << p) - 1;
      const uint32_t smask = 1 + uint32_t(rng() % uint64_t(fullp));
      const int64_t w = int64_t(rng() % uint64_t(budget.max_window + 1));
      std::vector<int64_t> pool;
      for (int64_t v : twin)
        if (v < tmin + w) pool.push_back(v);
      const int64_t np = int64_t(pool.size());
      if (np <= budget.popcount_cutoff) continue;
      const int64_t c =
          budget.popcount_cutoff + 1 +
          int64_t(rng() % uint64_t(np - budget.popcount_cutoff));
      for (int64_t i = 0; i < c; ++i) {
        const int64_t j = i + int64_t(rng() % uint64_t(np - i));
        std::swap(pool[size_t(i)], pool[size_t(j)]);
      }
      std::vector<int64_t> wsel(pool.begin(), pool.begin() + c);
      std::sort(wsel.begin(), wsel.end());
      const int64_t r0 = std::countr_zero(smask);
      int64_t gc = p;
      for (int64_t r = r0 + 1; r < p; ++r)
        if (smask >> r & 1) gc = std::gcd(gc, r - r0);
      std::vector<uint32_t> cs(size_t(std::max(h, int64_t(1))) + 1, 0);
      cs[1] = smask;
      for (int64_t j = 2; j <= h; ++j) cs[size_t(j)] = mask_sum(cs[size_t(j - 1)], smask, p, fullp);
      evaluate(p, fullp, smask, cs, gc, r0, w, wsel, c);
    }
  } else {
    // Exact-engine path for torsion or group carriers: same candidate
    // shapes, screened with the set kernels; the total number of candidates
    // is capped by the random_samples budget.
    const bool group = !ts.bounded_below() && !ts.bounded_above();
    const int dir = ts.bounded_below() ? 1 : (ts.bounded_above() ? -1 : 1);
    const int64_t csize = amb.torsion_size();
    int64_t remaining = budget.random_samples;
    std::vector<GroupElement> twin;
    if (group) {
      for (int64_t n = -budget.max_window; n < budget.max_window; ++n)
        for (int64_t c = 0; c < csize; ++c) twin.push_back(GroupElement{amb.unflatten(c), n});
    } else {
      const int64_t tedge = dir > 0 ? ts.min_n() : ts.max_n();
      for (int64_t i = 0; i < budget.max_window; ++i)
        for (int64_t c = 0; c < csize; ++c) {
          GroupElement g{amb.unflatten(c), tedge + dir * i};
          if (ts.member(g)) twin.push_back(g);
        }
    }
    for (int64_t p = 1; p <= budget.max_period && remaining > 0; ++p) {
      const int64_t bits = csize * p;
      if (bits > 20) break;
      for (uint32_t smask = 1; smask < (uint32_t(1) << bits) && remaining > 0; ++smask) {
        if (int64_t(std::popcount(smask)) > std::max<int64_t>(3, csize)) continue;
        BitVec right{size_t(bits)}, left{size_t(bits)};
        for (int64_t i = 0; i < bits; ++i)
          if (smask >> i & 1) right.set(size_t(i));
        if (group) left = right;
        int64_t tbase = 0;
        if (!group) tbase = dir > 0 ? ts.hi() + budget.max_window : ts.lo() - budget.max_window;
        PeriodicSet tail = PeriodicSet::make(amb, p, tbase, tbase, BitVec(0),
                                             dir > 0 || group ? right : BitVec(size_t(bits)),
                                             dir < 0 || group ? left : BitVec(size_t(bits)));
        const int64_t np = int64_t(twin.size());
        for (int64_t c = 0; c <= std::min(budget.popcount_cutoff, np) && remaining > 0; ++c) {
          for_combinations(np, c, [&](const std::vector<int64_t>& idx) {
            if (remaining <= 0) return;
            --remaining;
            ++rep.candidates_screened;
            std::vector<GroupElement> wsel;
            for (int64_t i : idx) wsel.push_back(twin[size_t(i)]);
            PeriodicSet cand = unite(PeriodicSet::from_points(amb, wsel), tail);
            if (!subset_of(cand, ts) || !is_whole(diff_subgroup(cand))) return;
            std::optional<int64_t> ord = ord_at_most(cand, ts, h);
            if (!ord) return;
            ++rep.bases_found;
            for_combinations(int64_t(wsel.size()), k, [&](const std::vector<int64_t>& ridx) {
              std::vector<GroupElement> rem;
              for (int64_t i : ridx) rem.push_back(wsel[size_t(i)]);
              PeriodicSet b = subtract(cand, PeriodicSet::from_points(amb, rem));
              if (!is_whole(diff_subgroup(b))) return;
              std::optional<int64_t> ro = ord_at_most(b, ts, xf);
              if (!ro) throw InternalError("witness_search: removal order exceeded its cap");
              if (improves(*ro, p, 0, c, smask, bx)) {
                bx = SearchRec{*ro, *ord, p, 0, c, smask, tbase, {}, {}, {}, {}};
                bx.engine_a = cand;
                bx.engine_rem = rem;
              }
            });
            int64_t count = 0;
            for_combinations(int64_t(wsel.size()), k, [&](const std::vector<int64_t>& eidx) {
              std::vector<GroupElement> epts;
              for (int64_t i : eidx) epts.push_back(wsel[size_t(i)]);
              PeriodicSet b = subtract(cand, PeriodicSet::from_points(amb, epts));
              if (is_whole(diff_subgroup(b))) return;
              if (k == 2) {
                for (const GroupElement& g : epts) {
                  PeriodicSet b1 = subtract(cand, PeriodicSet::from_points(amb, {g}));
                  if (!is_whole(diff_subgroup(b1))) return;
                }
              }
              ++count;
            });
            if (improves(count, p, 0, c, smask, be)) {
              be = SearchRec{count, *ord, p, 0, c, smask, tbase, {}, {}, {}, {}};
              be.engine_a = cand;
            }
          });
        }
      }
    }
  }

  // Re-certify the records with the exact engine before reporting.
  auto rebuild = [&](const SearchRec& r) {
    if (r.engine_a) return *r.engine_a;
    BitVec right{size_t(r.p)}, left{size_t(r.p)};
    for (int64_t i = 0; i < r.p; ++i)
      if (r.smask >> i & 1) right.set(size_t(i));
    PeriodicSet tail = PeriodicSet::make(amb, r.p, r.base, r.base, BitVec(0), right, left);
    std::vector<GroupElement> pts;
    for (int64_t v : r.wpts) pts.push_back(GroupElement{amb.unflatten(0), v});
    return unite(tail, PeriodicSet::from_points(amb, pts));
  };
  if (bx.score >= 0) {
    PeriodicSet a = rebuild(bx);
    BasisReport br = ord_star(a, t);
    std::vector<GroupElement> rem = bx.engine_rem;
    if (!bx.engine_a)
      for (int64_t v : bx.removed) rem.push_back(GroupElement{amb.unflatten(0), v});
    RemovalEntry rme = removal_entry_impl(a, rem, t);
    if (!br.is_basis || br.order != bx.ord || !rme.regular || !rme.order || *rme.order != bx.score)
      throw InternalError("witness_search: engine certification contradicts the screen");
    rep.best_removal =
        RemovalWitness{std::move(a), br.order, rme.removed, *rme.order, br.exceptional_set};
  }
  if (be.score >= 0) {
    PeriodicSet a = rebuild(be);
    BasisReport br = ord_star(a, t);
    EssentialFamily fam = essential_family_impl(a, k, reservoir_impl(a));
    std::vector<std::vector<GroupElement>> ek;
    for (const auto& e : fam.essentials)
      if (int64_t(e.size()) == k) ek.push_back(e);
    if (!br.is_basis || br.order != be.ord || int64_t(ek.size()) != be.score)
      throw InternalError("witness_search: engine certification contradicts the screen");
    rep.best_essential = EssentialWitness{std::move(a), br.order, be.score, std::move(ek)};
  }
  return rep;
}

}  // namespace addbasis
