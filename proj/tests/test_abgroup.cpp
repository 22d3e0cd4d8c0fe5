#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "addbasis/abgroup.hpp"
#include "oracle.hpp"

using namespace addbasis;

namespace {

const AmbientGroup Z{};

GroupElement el(int64_t n) { return GroupElement{{}, n}; }

Subgroup from_z(std::vector<int64_t> zs) {
  std::vector<GroupElement> gens;
  for (int64_t z : zs) gens.push_back(el(z));
  return Subgroup::from_generators(Z, gens);
}

PeriodicSet ray_up(const AmbientGroup& amb, int64_t cflat, int64_t a, int64_t p) {
  int64_t C = amb.torsion_size();
  BitVec right{size_t(C * p)}, left{size_t(C * p)};
  right.set(size_t(cflat * p + floor_mod(a, p)));
  return PeriodicSet::make(amb, p, a, a, BitVec(0), std::move(right), std::move(left));
}

// Brute-force subgroup closure within |z| <= Z, independent of the lattice
// code: breadth-first closure of {0} under adding/subtracting generators.
struct BruteClosure {
  std::set<std::pair<int64_t, int64_t>> reach;  // (cflat, z)

  BruteClosure(const AmbientGroup& amb, const std::vector<GroupElement>& gens, int64_t Z) {
    std::vector<std::pair<int64_t, int64_t>> queue{{0, 0}};
    reach.insert({0, 0});
    std::vector<std::pair<int64_t, int64_t>> steps;
    for (const auto& g : gens) {
      int64_t c = amb.flatten(g.torsion);
      steps.push_back({c, g.n});
      steps.push_back({amb.neg_flat(c), -g.n});
    }
    while (!queue.empty()) {
      auto [c, z] = queue.back();
      queue.pop_back();
      for (auto& [dc, dz] : steps) {
        std::pair<int64_t, int64_t> nxt{amb.add_flat(c, dc), z + dz};
        if (std::abs(nxt.second) > Z) continue;
        if (reach.insert(nxt).second) queue.push_back(nxt);
      }
    }
  }

  // Index of the closed subgroup in C (+) Z, or nullopt when no positive
  // pure-z element was reached within the box.
  std::optional<int64_t> index(const AmbientGroup& amb, int64_t Z) const {
    int64_t P = 0;
    for (auto& [c, z] : reach)
      if (c == 0 && z > 0 && (P == 0 || z < P)) P = z;
    if (P == 0) return std::nullopt;
    std::set<std::pair<int64_t, int64_t>> classes;
    for (auto& [c, z] : reach)
      if (std::abs(z) <= Z / 2) classes.insert({c, floor_mod(z, P)});
    return amb.torsion_size() * P / int64_t(classes.size());
  }
};

}  // namespace

TEST_CASE("abgroup: frozen subgroup examples") {
  // <2Z> has index 2 in Z.
  PeriodicSet evens2z = unite(ray_up(Z, 0, 0, 2), negate_set(ray_up(Z, 0, 0, 2)));
  Subgroup h2 = subgroup_from_periodic(evens2z);
  CHECK(h2 == from_z({2}));
  CHECK(h2.index() == 2);
  CHECK(h2.contains(el(-4)));
  CHECK(!h2.contains(el(3)));

  // difference_set({1} u 2N) = Z, index 1.
  PeriodicSet a = unite(PeriodicSet::from_points(Z, {el(1)}), ray_up(Z, 0, 0, 2));
  Subgroup hz = subgroup_from_periodic(difference_set(a));
  CHECK(hz == Subgroup::whole(Z));
  CHECK(hz.index() == 1);

  // C2 (+) Z: D with tails at (0,+-2), (1,+-1) generates the diagonal
  // subgroup {(c,n): c = n mod 2} of index 2.
  AmbientGroup c2({2});
  PeriodicSet d = unite(unite(ray_up(c2, 0, 2, 2), negate_set(ray_up(c2, 0, 2, 2))),
                        unite(ray_up(c2, 1, 1, 2), negate_set(ray_up(c2, 1, 1, 2))));
  Subgroup diag = subgroup_from_periodic(d);
  CHECK(diag.index() == 2);
  CHECK(diag.contains(make_element(c2, {1}, 3)));
  CHECK(diag.contains(make_element(c2, {0}, 2)));
  CHECK(!diag.contains(make_element(c2, {1}, 2)));
  for (int64_t c = 0; c < 2; ++c)
    for (int64_t n = -6; n <= 6; ++n)
      CHECK(diag.contains(make_element(c2, {c}, n)) == ((c % 2) == floor_mod(n, 2)));
}

TEST_CASE("abgroup: quotient, sum, intersect") {
  QuotientInfo q = quotient(from_z({2}));
  CHECK(q.invariant_factors == std::vector<int64_t>{2});
  CHECK(q.is_finite);
  CHECK(q.is_cyclic);
  REQUIRE(q.coset_reps.size() == 2);
  CHECK(q.coset_reps[0] == el(0));
  CHECK(q.coset_reps[1] == el(1));

  CHECK(sum(from_z({2}), from_z({3})) == Subgroup::whole(Z));
  CHECK(intersect(from_z({2}), from_z({3})) == from_z({6}));
  CHECK(intersect(from_z({4}), from_z({6})) == from_z({12}));
  CHECK(sum(from_z({4}), from_z({6})) == from_z({2}));

  // Infinite index is a value, not an error.
  Subgroup t = Subgroup::trivial(Z);
  CHECK(!t.finite_index());
  CHECK(t.index() == std::nullopt);
  QuotientInfo qt = quotient(t);
  CHECK(!qt.is_finite);
  CHECK(qt.free_rank == 1);
  CHECK(qt.is_cyclic);

  // Subgroup of C2 (+) Z with no z-part: {0} x C2 sublattice.
  AmbientGroup c2({2});
  Subgroup tor = Subgroup::from_generators(c2, {make_element(c2, {1}, 0)});
  CHECK(!tor.finite_index());
  QuotientInfo qtor = quotient(tor);
  CHECK(!qtor.is_finite);
  CHECK(qtor.free_rank == 1);
  CHECK(qtor.invariant_factors.empty());
}

TEST_CASE("abgroup: index agrees with brute-force closure") {
  std::mt19937_64 rng(101);
  for (int iter = 0; iter < 300; ++iter) {
    AmbientGroup amb = oracle::random_ambient(rng);
    size_t k = 1 + rng() % 3;
    std::vector<GroupElement> gens;
    int64_t maxz = 0;
    for (size_t i = 0; i < k; ++i) {
      std::vector<int64_t> coords;
      for (int64_t d : amb.torsion()) coords.push_back(int64_t(rng() % uint64_t(d)));
      int64_t z = int64_t(rng() % 17) - 8;
      maxz = std::max(maxz, std::abs(z));
      gens.push_back(GroupElement{std::move(coords), z});
    }
    Subgroup h = Subgroup::from_generators(amb, gens);

    int64_t Z = 64 + 32 * maxz;
    BruteClosure b1(amb, gens, Z), b2(amb, gens, 2 * Z);
    auto i1 = b1.index(amb, Z), i2 = b2.index(amb, 2 * Z);
    CAPTURE(iter);
    REQUIRE(i1 == i2);  // closure stabilized
    CHECK(h.index() == i1);

    // Membership agreement on the sampled closure.
    for (auto& [c, z] : b1.reach)
      if (std::abs(z) <= Z / 2) CHECK(h.contains(GroupElement{amb.unflatten(c), z}));

    // as_periodic matches contains everywhere nearby.
    PeriodicSet hp = h.as_periodic();
    for (int64_t c = 0; c < amb.torsion_size(); ++c)
      for (int64_t n = -40; n <= 40; ++n)
        REQUIRE(hp.member(c, n) == h.contains(GroupElement{amb.unflatten(c), n}));
  }
}

TEST_CASE("abgroup: quotient invariants against brute order computation") {
  std::mt19937_64 rng(103);
  for (int iter = 0; iter < 200; ++iter) {
    AmbientGroup amb = oracle::random_ambient(rng);
    size_t k = 1 + rng() % 3;
    std::vector<GroupElement> gens;
    for (size_t i = 0; i < k; ++i) {
      std::vector<int64_t> coords;
      for (int64_t d : amb.torsion()) coords.push_back(int64_t(rng() % uint64_t(d)));
      gens.push_back(GroupElement{std::move(coords), int64_t(rng() % 13) - 6});
    }
    Subgroup h = Subgroup::from_generators(amb, gens);
    if (!h.finite_index()) continue;
    QuotientInfo q = quotient(h);
    int64_t idx = *h.index();

    int64_t prod = 1;
    for (int64_t f : q.invariant_factors) prod *= f;
    CHECK(prod == idx);
    CHECK(int64_t(q.coset_reps.size()) == idx);

    // Representatives are pairwise inequivalent and their translates tile.
    for (size_t i = 0; i < q.coset_reps.size(); ++i)
      for (size_t j = i + 1; j < q.coset_reps.size(); ++j) {
        GroupElement d = add(amb, q.coset_reps[i], negate(amb, q.coset_reps[j]));
        CHECK(!h.contains(d));
      }

    // Order of an element g in G/H: least k >= 1 with k*g in H.
    auto order_mod = [&](const GroupElement& g) {
      for (int64_t t = 1; t <= idx; ++t)
        if (h.contains(scale(amb, t, g))) return t;
      return int64_t(-1);
    };
    int64_t max_order = 1;
    for (const auto& rep : q.coset_reps) {
      int64_t o = order_mod(rep);
      REQUIRE(o >= 1);
      CHECK(idx % o == 0);
      max_order = std::max(max_order, o);
    }
    // Cyclic iff some coset representative has full order.
    CHECK(q.is_cyclic == (max_order == idx));
    // Largest invariant factor is the exponent of the quotient.
    int64_t expected_exp = q.invariant_factors.empty() ? 1 : q.invariant_factors.back();
    CHECK(max_order == expected_exp);
  }
}

TEST_CASE("abgroup: sum and intersect properties") {
  std::mt19937_64 rng(107);
  for (int iter = 0; iter < 200; ++iter) {
    AmbientGroup amb = oracle::random_ambient(rng);
    auto rand_subgroup = [&]() {
      size_t k = 1 + rng() % 2;
      std::vector<GroupElement> gens;
      for (size_t i = 0; i < k; ++i) {
        std::vector<int64_t> coords;
        for (int64_t d : amb.torsion()) coords.push_back(int64_t(rng() % uint64_t(d)));
        gens.push_back(GroupElement{std::move(coords), int64_t(rng() % 13) - 6});
      }
      return Subgroup::from_generators(amb, gens);
    };
    Subgroup h1 = rand_subgroup(), h2 = rand_subgroup();
    Subgroup s = sum(h1, h2), m = intersect(h1, h2);
    CHECK(s.contains(h1));
    CHECK(s.contains(h2));
    CHECK(h1.contains(m));
    CHECK(h2.contains(m));
    for (int64_t c = 0; c < amb.torsion_size(); ++c)
      for (int64_t n = -15; n <= 15; ++n) {
        GroupElement g{amb.unflatten(c), n};
        REQUIRE(m.contains(g) == (h1.contains(g) && h2.contains(g)));
        if (h1.contains(g) || h2.contains(g)) REQUIRE(s.contains(g));
      }
  }
}

TEST_CASE("abgroup: subgroup_from_periodic is the generated subgroup") {
  std::mt19937_64 rng(109);
  int done = 0;
  for (int iter = 0; done < 150; ++iter) {
    AmbientGroup amb = oracle::random_ambient(rng);
    PeriodicSet d = oracle::random_perset(amb, rng, 8, 10);
    if (d.is_empty()) continue;
    ++done;
    Subgroup h = subgroup_from_periodic(d);
    // Contains every sampled element of D.
    for (int64_t c = 0; c < amb.torsion_size(); ++c)
      for (int64_t n = -50; n <= 50; ++n)
        if (d.member(c, n)) REQUIRE(h.contains(GroupElement{amb.unflatten(c), n}));
    // Contained in any subgroup containing D's sampled elements plus deep
    // tail representatives (a generated-subgroup upper bound witness).
    std::vector<GroupElement> wide;
    for (int64_t c = 0; c < amb.torsion_size(); ++c)
      for (int64_t n = -80; n <= 80; ++n)
        if (d.member(c, n)) wide.push_back(GroupElement{amb.unflatten(c), n});
    Subgroup k = Subgroup::from_generators(amb, wide);
    CHECK(k.contains(h));
    CHECK(h.contains(k));  // the wide sample generates no more than <D>
  }
}

TEST_CASE("abgroup: reembedding of finite-index subgroups") {
  // 2Z <= Z: C' trivial, forward halves.
  Subgroup h2 = from_z({2});
  Reembedding r2(h2);
  CHECK(r2.image().rank() == 0);
  CHECK(r2.z_step() == 2);
  CHECK(r2.forward(el(6)) == el(3));
  CHECK(r2.backward(el(3)) == el(6));
  CHECK_THROWS_AS(r2.forward(el(3)), PreconditionError);

  // Diagonal subgroup of C2 (+) Z: C' trivial, generated by (1,1).
  AmbientGroup c2({2});
  Subgroup diag = Subgroup::from_generators(c2, {make_element(c2, {1}, 1)});
  REQUIRE(diag.index() == 2);
  Reembedding rd(diag);
  CHECK(rd.image().rank() == 0);
  CHECK(rd.z_step() == 1);
  for (int64_t n = -8; n <= 8; ++n) {
    GroupElement x = make_element(c2, {floor_mod(n, 2)}, n);
    CHECK(rd.backward(rd.forward(x)) == x);
  }

  // 3Z <= Z: (3N) transports to N.
  Subgroup h3 = from_z({3});
  Reembedding r3(h3);
  PeriodicSet three_n = ray_up(Z, 0, 0, 3);
  PeriodicSet img = r3.transport(three_n);
  CHECK(img == ray_up(Z, 0, 0, 1));

  CHECK_THROWS_AS(reembed(Subgroup::trivial(Z)), PreconditionError);
}

TEST_CASE("abgroup: reembedding round trips on random subgroups") {
  std::mt19937_64 rng(113);
  int done = 0;
  for (int iter = 0; done < 200; ++iter) {
    AmbientGroup amb = oracle::random_ambient(rng);
    size_t k = 1 + rng() % 3;
    std::vector<GroupElement> gens;
    for (size_t i = 0; i < k; ++i) {
      std::vector<int64_t> coords;
      for (int64_t d : amb.torsion()) coords.push_back(int64_t(rng() % uint64_t(d)));
      gens.push_back(GroupElement{std::move(coords), int64_t(rng() % 11) - 5});
    }
    Subgroup h = Subgroup::from_generators(amb, gens);
    if (!h.finite_index()) continue;
    ++done;
    Reembedding re(h);
    PeriodicSet hp = h.as_periodic();
    int64_t e = re.z_step();

    // forward then backward is the identity on H; forward is a bijection
    // from H cap (C x [0, 4e)) onto C' x [0, 4).
    std::set<std::pair<int64_t, int64_t>> images;
    int64_t count = 0;
    for (int64_t c = 0; c < amb.torsion_size(); ++c)
      for (int64_t n = -3 * e; n < 5 * e; ++n) {
        GroupElement x{amb.unflatten(c), n};
        if (!hp.member(x)) continue;
        GroupElement y = re.forward(x);
        REQUIRE(re.backward(y) == x);
        if (n >= 0 && n < 4 * e) {
          CHECK(y.n >= 0);
          CHECK(y.n < 4);
          images.insert({re.image().flatten(y.torsion), y.n});
          ++count;
        }
      }
    CHECK(int64_t(images.size()) == count);
    CHECK(count == re.image().torsion_size() * 4);

    // Exact transport: membership is preserved both ways.
    PeriodicSet s = intersect(hp, oracle::random_perset(amb, rng, 6, 10));
    PeriodicSet img = re.transport(s);
    CHECK(img.ambient() == re.image());
    for (int64_t c = 0; c < re.image().torsion_size(); ++c)
      for (int64_t m = -30; m <= 30; ++m) {
        GroupElement y{re.image().unflatten(c), m};
        REQUIRE(img.member(y) == s.member(re.backward(y)));
      }
  }
}
