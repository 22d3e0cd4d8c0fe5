#include "addbasis/perset.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <utility>

namespace addbasis {

namespace {

void check_same_ambient(const PeriodicSet& a, const PeriodicSet& b) {
  if (a.ambient() != b.ambient()) throw PreconditionError("ambient group mismatch");
}

int64_t lcm64(int64_t a, int64_t b) { return a / std::gcd(a, b) * b; }

}  // namespace

PeriodicSet PeriodicSet::empty(const AmbientGroup& amb) {
  int64_t C = amb.torsion_size();
  return PeriodicSet(amb, 1, 0, 0, BitVec(0), BitVec(size_t(C)), BitVec(size_t(C)));
}

PeriodicSet PeriodicSet::full(const AmbientGroup& amb) {
  int64_t C = amb.torsion_size();
  BitVec r{size_t(C)}, l{size_t(C)};
  r.set_all();
  l.set_all();
  return PeriodicSet(amb, 1, 0, 0, BitVec(0), std::move(r), std::move(l));
}

PeriodicSet PeriodicSet::from_points(const AmbientGroup& amb,
                                     const std::vector<GroupElement>& pts) {
  if (pts.empty()) return empty(amb);
  int64_t C = amb.torsion_size();
  int64_t lo = pts[0].n, hi = pts[0].n;
  for (const auto& g : pts) {
    lo = std::min(lo, g.n);
    hi = std::max(hi, g.n);
  }
  ++hi;
  BitVec win(size_t(C * (hi - lo)));
  for (const auto& g : pts) {
    if (int64_t(g.torsion.size()) != int64_t(amb.rank()))
      throw PreconditionError("point does not belong to the ambient group");
    win.set(size_t(amb.flatten(g.torsion) * (hi - lo) + (g.n - lo)));
  }
  return make(amb, 1, lo, hi, std::move(win), BitVec(size_t(C)), BitVec(size_t(C)));
}

PeriodicSet PeriodicSet::make(const AmbientGroup& amb, int64_t p, int64_t lo, int64_t hi,
                              BitVec window, BitVec right, BitVec left) {
  int64_t C = amb.torsion_size();
  if (p < 1) throw PreconditionError("period must be >= 1");
  if (lo > hi) throw PreconditionError("window must satisfy lo <= hi");
  if (int64_t(window.size()) != C * (hi - lo) || int64_t(right.size()) != C * p ||
      int64_t(left.size()) != C * p)
    throw PreconditionError("bit array sizes do not match the declared geometry");
  PeriodicSet s(amb, p, lo, hi, std::move(window), std::move(right), std::move(left));
  s.canonicalize();
  return s;
}

void PeriodicSet::canonicalize() {
  const int64_t C = amb_.torsion_size();
  const int64_t W = hi_ - lo_;

  auto right_at = [&](int64_t c, int64_t n) {
    return right_.test(size_t(c * p_ + floor_mod(n, p_)));
  };
  auto left_at = [&](int64_t c, int64_t n) {
    return left_.test(size_t(c * p_ + floor_mod(n, p_)));
  };
  auto win_at = [&](int64_t c, int64_t n) { return win_.test(size_t(c * W + (n - lo_))); };

  // Minimal period q | p with both patterns q-periodic.
  int64_t q = p_;
  for (int64_t d = 1; d <= p_; ++d) {
    if (p_ % d) continue;
    bool ok = true;
    for (int64_t c = 0; c < C && ok; ++c)
      for (int64_t m = 0; m < p_ && ok; ++m)
        if (right_.test(size_t(c * p_ + m)) != right_.test(size_t(c * p_ + m % d)) ||
            left_.test(size_t(c * p_ + m)) != left_.test(size_t(c * p_ + m % d)))
          ok = false;
    if (ok) {
      q = d;
      break;
    }
  }

  // Shrink the window while its boundary rows match the adjacent patterns.
  int64_t nlo = lo_, nhi = hi_;
  auto top_matches = [&]() {
    for (int64_t c = 0; c < C; ++c)
      if (win_at(c, nhi - 1) != right_at(c, nhi - 1)) return false;
    return true;
  };
  auto bottom_matches = [&]() {
    for (int64_t c = 0; c < C; ++c)
      if (win_at(c, nlo) != left_at(c, nlo)) return false;
    return true;
  };
  while (nhi > nlo && top_matches()) --nhi;
  while (nhi > nlo && bottom_matches()) ++nlo;

  if (nlo == nhi) {
    bool same = true;
    for (int64_t c = 0; c < C && same; ++c)
      for (int64_t m = 0; m < q && same; ++m)
        if (right_.test(size_t(c * p_ + m)) != left_.test(size_t(c * p_ + m))) same = false;
    if (same) {
      nlo = nhi = 0;  // purely periodic
    } else {
      // Least split point: while the row below the split looks the same from
      // both sides, move the split down (terminates within q steps).
      auto row_agrees = [&](int64_t n) {
        for (int64_t c = 0; c < C; ++c)
          if (right_at(c, n) != left_at(c, n)) return false;
        return true;
      };
      while (row_agrees(nlo - 1)) {
        --nlo;
        --nhi;
      }
    }
  }

  // Rebuild the canonical fields.
  BitVec nw(size_t(C * (nhi - nlo))), nr(size_t(C * q)), nl(size_t(C * q));
  for (int64_t c = 0; c < C; ++c)
    for (int64_t m = 0; m < q; ++m) {
      nr.assign(size_t(c * q + m), right_.test(size_t(c * p_ + m)));
      nl.assign(size_t(c * q + m), left_.test(size_t(c * p_ + m)));
    }
  for (int64_t c = 0; c < C; ++c)
    for (int64_t n = nlo; n < nhi; ++n) {
      bool v;
      if (n >= hi_)
        v = right_at(c, n);
      else if (n < lo_)
        v = left_at(c, n);
      else
        v = win_at(c, n);
      nw.assign(size_t(c * (nhi - nlo) + (n - nlo)), v);
    }
  p_ = q;
  lo_ = nlo;
  hi_ = nhi;
  win_ = std::move(nw);
  right_ = std::move(nr);
  left_ = std::move(nl);
}

void PeriodicSet::expand_to(int64_t q, int64_t nlo, int64_t nhi, BitVec& window, BitVec& right,
                            BitVec& left) const {
  if (q % p_ != 0 || nlo > lo_ || nhi < hi_)
    throw InternalError("expand_to: target geometry does not contain the source");
  const int64_t C = amb_.torsion_size();
  window = BitVec(size_t(C * (nhi - nlo)));
  right = BitVec(size_t(C * q));
  left = BitVec(size_t(C * q));
  for (int64_t c = 0; c < C; ++c)
    for (int64_t m = 0; m < q; ++m) {
      right.assign(size_t(c * q + m), right_.test(size_t(c * p_ + m % p_)));
      left.assign(size_t(c * q + m), left_.test(size_t(c * p_ + m % p_)));
    }
  for (int64_t c = 0; c < C; ++c)
    for (int64_t n = nlo; n < nhi; ++n)
      window.assign(size_t(c * (nhi - nlo) + (n - nlo)), member(c, n));
}

int64_t PeriodicSet::finite_size() const {
  if (!is_finite()) throw PreconditionError("finite_size of an infinite set");
  return int64_t(win_.count());
}

std::vector<GroupElement> PeriodicSet::window_points() const {
  std::vector<GroupElement> out;
  const int64_t C = amb_.torsion_size();
  const int64_t W = hi_ - lo_;
  for (int64_t n = lo_; n < hi_; ++n)
    for (int64_t c = 0; c < C; ++c)
      if (win_.test(size_t(c * W + (n - lo_)))) out.push_back(GroupElement{amb_.unflatten(c), n});
  return out;
}

int64_t PeriodicSet::min_n() const {
  if (!bounded_below()) throw PreconditionError("min_n of a set with a left tail");
  if (is_empty()) throw PreconditionError("min_n of the empty set");
  const int64_t C = amb_.torsion_size();
  const int64_t W = hi_ - lo_;
  for (int64_t n = lo_; n < hi_; ++n)
    for (int64_t c = 0; c < C; ++c)
      if (win_.test(size_t(c * W + (n - lo_)))) return n;
  int64_t best = 0;
  bool found = false;
  for (int64_t c = 0; c < C; ++c)
    for (int64_t m = 0; m < p_; ++m)
      if (right_.test(size_t(c * p_ + m))) {
        int64_t start = hi_ + floor_mod(m - hi_, p_);
        if (!found || start < best) best = start;
        found = true;
      }
  if (!found) throw InternalError("min_n: inconsistent emptiness state");
  return best;
}

int64_t PeriodicSet::max_n() const {
  if (!bounded_above()) throw PreconditionError("max_n of a set with a right tail");
  if (is_empty()) throw PreconditionError("max_n of the empty set");
  const int64_t C = amb_.torsion_size();
  const int64_t W = hi_ - lo_;
  for (int64_t n = hi_ - 1; n >= lo_; --n)
    for (int64_t c = 0; c < C; ++c)
      if (win_.test(size_t(c * W + (n - lo_)))) return n;
  int64_t best = 0;
  bool found = false;
  for (int64_t c = 0; c < C; ++c)
    for (int64_t m = 0; m < p_; ++m)
      if (left_.test(size_t(c * p_ + m))) {
        int64_t start = (lo_ - 1) - floor_mod((lo_ - 1) - m, p_);
        if (!found || start > best) best = start;
        found = true;
      }
  if (!found) throw InternalError("max_n: inconsistent emptiness state");
  return best;
}

std::vector<std::pair<int64_t, int64_t>> PeriodicSet::right_classes() const {
  std::vector<std::pair<int64_t, int64_t>> out;
  const int64_t C = amb_.torsion_size();
  for (int64_t c = 0; c < C; ++c)
    for (int64_t m = 0; m < p_; ++m)
      if (right_.test(size_t(c * p_ + m))) out.emplace_back(c, m);
  return out;
}

std::vector<std::pair<int64_t, int64_t>> PeriodicSet::left_classes() const {
  std::vector<std::pair<int64_t, int64_t>> out;
  const int64_t C = amb_.torsion_size();
  for (int64_t c = 0; c < C; ++c)
    for (int64_t m = 0; m < p_; ++m)
      if (left_.test(size_t(c * p_ + m))) out.emplace_back(c, m);
  return out;
}

// ---- Boolean algebra ----

namespace {

struct Aligned {
  int64_t q, lo, hi;
  BitVec wa, ra, la, wb, rb, lb;
};

Aligned align(const PeriodicSet& a, const PeriodicSet& b) {
  Aligned r;
  r.q = lcm64(a.period(), b.period());
  r.lo = std::min(a.lo(), b.lo());
  r.hi = std::max(a.hi(), b.hi());
  a.expand_to(r.q, r.lo, r.hi, r.wa, r.ra, r.la);
  b.expand_to(r.q, r.lo, r.hi, r.wb, r.rb, r.lb);
  return r;
}

}  // namespace

PeriodicSet unite(const PeriodicSet& a, const PeriodicSet& b) {
  check_same_ambient(a, b);
  Aligned x = align(a, b);
  x.wa |= x.wb;
  x.ra |= x.rb;
  x.la |= x.lb;
  return PeriodicSet::make(a.ambient(), x.q, x.lo, x.hi, std::move(x.wa), std::move(x.ra),
                           std::move(x.la));
}

PeriodicSet intersect(const PeriodicSet& a, const PeriodicSet& b) {
  check_same_ambient(a, b);
  Aligned x = align(a, b);
  x.wa &= x.wb;
  x.ra &= x.rb;
  x.la &= x.lb;
  return PeriodicSet::make(a.ambient(), x.q, x.lo, x.hi, std::move(x.wa), std::move(x.ra),
                           std::move(x.la));
}

PeriodicSet subtract(const PeriodicSet& a, const PeriodicSet& b) {
  check_same_ambient(a, b);
  Aligned x = align(a, b);
  x.wa -= x.wb;
  x.ra -= x.rb;
  x.la -= x.lb;
  return PeriodicSet::make(a.ambient(), x.q, x.lo, x.hi, std::move(x.wa), std::move(x.ra),
                           std::move(x.la));
}

PeriodicSet complement(const PeriodicSet& a) {
  BitVec w = a.window_bits(), r = a.right_bits(), l = a.left_bits();
  w.flip_all();
  r.flip_all();
  l.flip_all();
  return PeriodicSet::make(a.ambient(), a.period(), a.lo(), a.hi(), std::move(w), std::move(r),
                           std::move(l));
}

// ---- Geometry ----

PeriodicSet translate(const PeriodicSet& a, const GroupElement& g) {
  const AmbientGroup& amb = a.ambient();
  if (g.torsion.size() != amb.rank())
    throw PreconditionError("translation vector does not belong to the ambient group");
  const int64_t C = amb.torsion_size();
  const int64_t p = a.period(), W = a.hi() - a.lo();
  const int64_t gc = amb.flatten(g.torsion), gz = g.n;
  BitVec w(size_t(C * W)), r(size_t(C * p)), l(size_t(C * p));
  for (int64_t c = 0; c < C; ++c) {
    int64_t c2 = amb.add_flat(c, gc);
    for (int64_t i = 0; i < W; ++i)
      w.assign(size_t(c2 * W + i), a.window_bits().test(size_t(c * W + i)));
    for (int64_t m = 0; m < p; ++m) {
      int64_t m2 = floor_mod(m + gz, p);
      r.assign(size_t(c2 * p + m2), a.right_bits().test(size_t(c * p + m)));
      l.assign(size_t(c2 * p + m2), a.left_bits().test(size_t(c * p + m)));
    }
  }
  return PeriodicSet::make(amb, p, a.lo() + gz, a.hi() + gz, std::move(w), std::move(r),
                           std::move(l));
}

PeriodicSet negate_set(const PeriodicSet& a) {
  const AmbientGroup& amb = a.ambient();
  const int64_t C = amb.torsion_size();
  const int64_t p = a.period(), W = a.hi() - a.lo();
  const int64_t nlo = 1 - a.hi(), nhi = 1 - a.lo();
  BitVec w(size_t(C * W)), r(size_t(C * p)), l(size_t(C * p));
  for (int64_t c = 0; c < C; ++c) {
    int64_t c2 = amb.neg_flat(c);
    for (int64_t n = nlo; n < nhi; ++n)
      w.assign(size_t(c2 * W + (n - nlo)), a.window_bits().test(size_t(c * W + (-n - a.lo()))));
    for (int64_t m = 0; m < p; ++m) {
      int64_t m2 = floor_mod(-m, p);
      // For n >= nhi, -n < a.lo(): the negated right pattern reads the left
      // pattern of a, and vice versa.
      r.assign(size_t(c2 * p + m2), a.left_bits().test(size_t(c * p + m)));
      l.assign(size_t(c2 * p + m2), a.right_bits().test(size_t(c * p + m)));
    }
  }
  return PeriodicSet::make(amb, p, nlo, nhi, std::move(w), std::move(r), std::move(l));
}

// ---- Minkowski sums ----

namespace {

// The exact decomposition of a PeriodicSet at modulus L (a multiple of its
// period): window points, plus one arithmetic ray of step L per occupied
// residue class of each tail.
struct Pieces {
  std::vector<std::pair<int64_t, int64_t>> pts;       // (class, n)
  std::map<std::pair<int64_t, int64_t>, int64_t> up;  // (class, n mod L) -> least element
  std::map<std::pair<int64_t, int64_t>, int64_t> dn;  // (class, n mod L) -> greatest element
};

Pieces decompose(const PeriodicSet& s, int64_t L) {
  Pieces out;
  const int64_t C = s.ambient().torsion_size();
  const int64_t p = s.period(), W = s.hi() - s.lo();
  for (int64_t c = 0; c < C; ++c)
    for (int64_t n = s.lo(); n < s.hi(); ++n)
      if (s.window_bits().test(size_t(c * W + (n - s.lo())))) out.pts.emplace_back(c, n);
  for (int64_t c = 0; c < C; ++c)
    for (int64_t m = 0; m < p; ++m) {
      if (s.right_bits().test(size_t(c * p + m)))
        for (int64_t rho = m % L; rho < L; rho += p) {
          int64_t start = s.hi() + floor_mod(rho - s.hi(), L);
          out.up[{c, floor_mod(rho, L)}] = start;
        }
      if (s.left_bits().test(size_t(c * p + m)))
        for (int64_t rho = m % L; rho < L; rho += p) {
          int64_t start = (s.lo() - 1) - floor_mod((s.lo() - 1) - rho, L);
          out.dn[{c, floor_mod(rho, L)}] = start;
        }
    }
  return out;
}

void merge_min(std::map<std::pair<int64_t, int64_t>, int64_t>& m, std::pair<int64_t, int64_t> k,
               int64_t v) {
  auto [it, fresh] = m.emplace(k, v);
  if (!fresh && v < it->second) it->second = v;
}

void merge_max(std::map<std::pair<int64_t, int64_t>, int64_t>& m, std::pair<int64_t, int64_t> k,
               int64_t v) {
  auto [it, fresh] = m.emplace(k, v);
  if (!fresh && v > it->second) it->second = v;
}

}  // namespace

PeriodicSet minkowski_sum(const PeriodicSet& a, const PeriodicSet& b) {
  check_same_ambient(a, b);
  const AmbientGroup& amb = a.ambient();
  if (a.is_empty() || b.is_empty()) return PeriodicSet::empty(amb);
  const int64_t C = amb.torsion_size();
  const int64_t L = lcm64(a.period(), b.period());

  Pieces A = decompose(a, L), B = decompose(b, L);

  // Sum the pieces: points x points stay points; points x rays and rays x
  // rays of one direction stay rays of step L; opposite rays fill a whole
  // residue class.
  std::vector<std::pair<int64_t, int64_t>> pts;
  std::map<std::pair<int64_t, int64_t>, int64_t> up, dn;
  std::set<std::pair<int64_t, int64_t>> lines;

  for (auto& [ca, na] : A.pts)
    for (auto& [cb, nb] : B.pts) pts.emplace_back(amb.add_flat(ca, cb), na + nb);

  auto add_ray_sums = [&](const Pieces& P, const Pieces& Q) {
    for (auto& [ca, na] : P.pts) {
      for (auto& [kb, sb] : Q.up)
        merge_min(up, {amb.add_flat(ca, kb.first), floor_mod(na + kb.second, L)}, na + sb);
      for (auto& [kb, sb] : Q.dn)
        merge_max(dn, {amb.add_flat(ca, kb.first), floor_mod(na + kb.second, L)}, na + sb);
    }
  };
  add_ray_sums(A, B);
  add_ray_sums(B, A);

  for (auto& [ka, sa] : A.up)
    for (auto& [kb, sb] : B.up)
      merge_min(up, {amb.add_flat(ka.first, kb.first), floor_mod(ka.second + kb.second, L)},
                sa + sb);
  for (auto& [ka, sa] : A.dn)
    for (auto& [kb, sb] : B.dn)
      merge_max(dn, {amb.add_flat(ka.first, kb.first), floor_mod(ka.second + kb.second, L)},
                sa + sb);
  for (auto& [ka, sa] : A.up)
    for (auto& [kb, sb] : B.dn)
      lines.insert({amb.add_flat(ka.first, kb.first), floor_mod(ka.second + kb.second, L)});
  for (auto& [ka, sa] : A.dn)
    for (auto& [kb, sb] : B.up)
      lines.insert({amb.add_flat(ka.first, kb.first), floor_mod(ka.second + kb.second, L)});

  // Assemble: the window must reach every point, every up-ray base (rows
  // above hi of an up class are entirely in the ray) and one past every
  // down-ray base.
  bool any = !pts.empty() || !up.empty() || !dn.empty();
  int64_t lo = 0, hi = 0;
  if (any) {
    bool first = true;
    auto widen = [&](int64_t a_, int64_t b_) {
      if (first) {
        lo = a_;
        hi = b_;
        first = false;
      } else {
        lo = std::min(lo, a_);
        hi = std::max(hi, b_);
      }
    };
    for (auto& [c, n] : pts) widen(n, n + 1);
    for (auto& [k, s] : up) widen(s, s);
    for (auto& [k, s] : dn) widen(s + 1, s + 1);
    if (lo > hi) hi = lo;
  }

  BitVec w(size_t(C * (hi - lo))), r(size_t(C * L)), l(size_t(C * L));
  for (auto& [c, n] : pts)
    if (n >= lo && n < hi) w.set(size_t(c * (hi - lo) + (n - lo)));
  for (int64_t c = 0; c < C; ++c)
    for (int64_t n = lo; n < hi; ++n) {
      if (w.test(size_t(c * (hi - lo) + (n - lo)))) continue;
      std::pair<int64_t, int64_t> key{c, floor_mod(n, L)};
      bool v = lines.count(key) != 0;
      if (!v) {
        auto iu = up.find(key);
        v = iu != up.end() && n >= iu->second;
      }
      if (!v) {
        auto id = dn.find(key);
        v = id != dn.end() && n <= id->second;
      }
      if (v) w.set(size_t(c * (hi - lo) + (n - lo)));
    }
  for (auto& [k, s] : up) r.set(size_t(k.first * L + k.second));
  for (auto& [k, s] : dn) l.set(size_t(k.first * L + k.second));
  for (auto& k : lines) {
    r.set(size_t(k.first * L + k.second));
    l.set(size_t(k.first * L + k.second));
  }
  return PeriodicSet::make(amb, L, lo, hi, std::move(w), std::move(r), std::move(l));
}

PeriodicSet h_fold(const PeriodicSet& a, int64_t h) {
  if (h < 1) throw PreconditionError("h_fold requires h >= 1");
  if (h == 1) return a;
  PeriodicSet half = h_fold(a, h / 2);
  PeriodicSet s = minkowski_sum(half, half);
  if (h & 1) s = minkowski_sum(s, a);
  return s;
}

PeriodicSet difference_set(const PeriodicSet& a) {
  if (a.is_empty()) throw PreconditionError("difference_set of the empty set");
  return minkowski_sum(a, negate_set(a));
}

// ---- Comparisons ----

bool subeq_upto_finite(const PeriodicSet& a, const PeriodicSet& b) {
  return subtract(a, b).is_finite();
}

bool eq_upto_finite(const PeriodicSet& a, const PeriodicSet& b) {
  return subtract(a, b).is_finite() && subtract(b, a).is_finite();
}

std::vector<GroupElement> exceptional_points(const PeriodicSet& a, const PeriodicSet& b) {
  PeriodicSet d = subtract(a, b);
  if (!d.is_finite()) throw PreconditionError("exceptional set is infinite");
  return d.window_points();
}

bool subset_of(const PeriodicSet& a, const PeriodicSet& b) { return subtract(a, b).is_empty(); }

std::string PeriodicSet::to_string() const {
  std::string s;
  const auto& tf = amb_.torsion();
  if (!tf.empty()) {
    s += "C=";
    for (size_t i = 0; i < tf.size(); ++i) {
      if (i) s += "x";
      s += std::to_string(tf[i]);
    }
    s += "; ";
  }
  const int64_t C = amb_.torsion_size();
  const int64_t W = hi_ - lo_;

  auto coord_prefix = [&](int64_t c) -> std::string {
    if (tf.empty()) return "";
    auto coords = amb_.unflatten(c);
    std::string t = "(";
    for (size_t i = 0; i < coords.size(); ++i) {
      if (i) t += ",";
      t += std::to_string(coords[i]);
    }
    return t + ")";
  };

  // A residue class occupied on both sides whose window rows are also full is
  // an entire line and prints as one 'a+pZ' clause.
  auto is_line = [&](int64_t c, int64_t m) {
    if (!right_.test(size_t(c * p_ + m)) || !left_.test(size_t(c * p_ + m))) return false;
    for (int64_t n = lo_; n < hi_; ++n)
      if (floor_mod(n, p_) == m && !win_.test(size_t(c * W + (n - lo_)))) return false;
    return true;
  };

  std::vector<std::string> clauses;
  std::string finite;
  for (int64_t n = lo_; n < hi_; ++n)
    for (int64_t c = 0; c < C; ++c) {
      if (!win_.test(size_t(c * W + (n - lo_)))) continue;
      if (is_line(c, floor_mod(n, p_))) continue;
      if (!finite.empty()) finite += ", ";
      if (tf.empty())
        finite += std::to_string(n);
      else {
        auto coords = amb_.unflatten(c);
        finite += "(";
        for (int64_t x : coords) finite += std::to_string(x) + ",";
        finite += std::to_string(n) + ")";
      }
    }
  if (!finite.empty()) clauses.push_back("{" + finite + "}");

  for (int64_t c = 0; c < C; ++c)
    for (int64_t m = 0; m < p_; ++m) {
      bool rr = right_.test(size_t(c * p_ + m)), ll = left_.test(size_t(c * p_ + m));
      if (rr && ll && is_line(c, m)) {
        clauses.push_back(coord_prefix(c) + std::to_string(m) + "+" + std::to_string(p_) + "Z");
        continue;
      }
      if (rr) {
        int64_t a = hi_ + floor_mod(m - hi_, p_);
        clauses.push_back(coord_prefix(c) + std::to_string(a) + "+" + std::to_string(p_) + "N");
      }
      if (ll) {
        int64_t a = (lo_ - 1) - floor_mod((lo_ - 1) - m, p_);
        clauses.push_back(coord_prefix(c) + std::to_string(a) + "-" + std::to_string(p_) + "N");
      }
    }
  if (clauses.empty()) return s + "{}";
  std::string out = s;
  for (size_t i = 0; i < clauses.size(); ++i) {
    if (i) out += ", ";
    out += clauses[i];
  }
  return out;
}

}  // namespace addbasis
