#pragma once
// Brute-force reference arithmetic for the set kernels.  Everything here
// works on dense membership tables over a bounded region of C x Z, computed
// by direct enumeration, independently of the canonical representation and
// of the Minkowski algorithms under test.
//
// Soundness of the margins: suppose s = x_1 + ... + x_h with every x_i in A
// and |s| <= K.  Let D bound max(|lo|, |hi|) over the operands and let L be a
// common period of all tails.  Any summand with |x_i| > D lies on a tail and
// may be moved by multiples of L while staying in its set, as long as it does
// not cross the window.  Repeatedly moving L from a summand > D + L to one
// < -(D + L) keeps the sum fixed; when no such opposite pair is left, every
// summand is bounded by |s| + (h-1)(D + L) <= K + h(D + L).  Hence every
// representable sum in [-K, K] has a witness with all summands in [-M, M],
// M = K + h(D + L) + 64.  For iterated pairwise summation the summands can be
// reordered so that every partial sum stays within 2M (always add a summand
// opposing the sign of the running total when one remains), so tables of
// radius 2M suffice for intermediate results.

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <random>
#include <vector>

#include "addbasis/perset.hpp"

namespace oracle {

using addbasis::AmbientGroup;
using addbasis::BitVec;
using addbasis::floor_mod;
using addbasis::PeriodicSet;

// Dense membership table over C x [-M, M], one bit row per torsion class.
struct Table {
  int64_t C = 1;
  int64_t M = 0;
  std::vector<std::vector<uint64_t>> rows;  // rows[c], bit i = membership at n = i - M

  Table(int64_t C_, int64_t M_)
      : C(C_), M(M_), rows(size_t(C_), std::vector<uint64_t>(size_t((2 * M_ + 1 + 63) / 64), 0)) {}

  void set(int64_t c, int64_t n) {
    size_t i = size_t(n + M);
    rows[size_t(c)][i >> 6] |= uint64_t(1) << (i & 63);
  }
  bool get(int64_t c, int64_t n) const {
    if (n < -M || n > M) return false;
    size_t i = size_t(n + M);
    return (rows[size_t(c)][i >> 6] >> (i & 63)) & 1;
  }
};

inline Table materialize(const PeriodicSet& s, int64_t M) {
  Table t(s.ambient().torsion_size(), M);
  for (int64_t c = 0; c < t.C; ++c)
    for (int64_t n = -M; n <= M; ++n)
      if (s.member(c, n)) t.set(c, n);
  return t;
}

// dst |= src << k (k may be negative); bit indices clipped to dst's range.
inline void or_shifted(std::vector<uint64_t>& dst, const std::vector<uint64_t>& src, int64_t k) {
  int64_t ns = int64_t(src.size()) * 64;
  for (int64_t i = 0; i < ns; i += 64) {
    uint64_t w = src[size_t(i >> 6)];
    if (!w) continue;
    int64_t j = i + k;  // destination bit index of this word's bit 0
    int64_t word = addbasis::floor_div(j, 64), off = j - word * 64;
    if (word >= 0 && size_t(word) < dst.size()) dst[size_t(word)] |= (off ? (w << off) : w);
    if (off && word + 1 >= 0 && size_t(word + 1) < dst.size())
      dst[size_t(word + 1)] |= w >> (64 - off);
  }
}

// Sumset of two tables by enumeration of the left operand's elements against
// whole bit rows of the right operand.  Exact for all sums landing in the
// result radius that have witnesses inside the operand radii.
inline Table brute_sum(const AmbientGroup& amb, const Table& a, const Table& b, int64_t Mout) {
  Table out(a.C, Mout);
  for (int64_t ca = 0; ca < a.C; ++ca)
    for (int64_t na = -a.M; na <= a.M; ++na) {
      if (!a.get(ca, na)) continue;
      for (int64_t cb = 0; cb < b.C; ++cb) {
        int64_t c = amb.add_flat(ca, cb);
        // n_out = n_b + na; bit index shift = na + Mout - b.M.
        or_shifted(out.rows[size_t(c)], b.rows[size_t(cb)], na + Mout - b.M);
      }
    }
  // Clip the bit just past the top of the range that shifts may have set.
  for (auto& row : out.rows) {
    int64_t used = 2 * Mout + 1;
    if (used & 63) row.back() &= (uint64_t(1) << (used & 63)) - 1;
  }
  return out;
}

// Margin radius for certifying an h-fold sum on [-K, K].
inline int64_t margin(std::initializer_list<const PeriodicSet*> ops, int64_t h, int64_t K) {
  int64_t D = 0, L = 1;
  for (const PeriodicSet* s : ops) {
    D = std::max({D, std::abs(s->lo()), std::abs(s->hi())});
    L = L / std::gcd(L, s->period()) * s->period();
  }
  return K + h * (D + L) + 64;
}

// True when the PeriodicSet agrees with the table on all of C x [-K, K];
// fills *where with the first differing cell otherwise.
inline bool agrees(const PeriodicSet& s, const Table& t, int64_t K,
                   std::pair<int64_t, int64_t>* where = nullptr) {
  for (int64_t c = 0; c < t.C; ++c)
    for (int64_t n = -K; n <= K; ++n)
      if (s.member(c, n) != t.get(c, n)) {
        if (where) *where = {c, n};
        return false;
      }
  return true;
}

// ---- random instances (deterministic seeds) ----

inline AmbientGroup random_ambient(std::mt19937_64& rng) {
  // |C| <= 8 via invariant-factor chains drawn from a fixed menu.
  static const std::vector<std::vector<int64_t>> menu = {
      {}, {}, {2}, {3}, {4}, {5}, {7}, {8}, {2, 2}, {2, 4}, {2, 2, 2}, {6}};
  return AmbientGroup(menu[rng() % menu.size()]);
}

inline PeriodicSet random_perset(const AmbientGroup& amb, std::mt19937_64& rng,
                                 int64_t max_p = 12, int64_t max_w = 24) {
  int64_t C = amb.torsion_size();
  int64_t p = 1 + int64_t(rng() % uint64_t(max_p));
  int64_t w = int64_t(rng() % uint64_t(max_w + 1));
  int64_t lo = int64_t(rng() % 41) - 20;
  int64_t hi = lo + w;
  BitVec win(size_t(C * w)), right(size_t(C * p)), left(size_t(C * p));
  auto sprinkle = [&](BitVec& b, uint64_t density_pct) {
    for (size_t i = 0; i < b.size(); ++i)
      if (rng() % 100 < density_pct) b.set(i);
  };
  sprinkle(win, 20 + rng() % 60);
  // Tails empty in one or both directions reasonably often.
  if (rng() % 3) sprinkle(right, 10 + rng() % 50);
  if (rng() % 3) sprinkle(left, 10 + rng() % 50);
  return PeriodicSet::make(amb, p, lo, hi, std::move(win), std::move(right), std::move(left));
}

}  // namespace oracle
