#include "addbasis/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "addbasis/basis.hpp"
#include "addbasis/density.hpp"
#include "addbasis/fpt.hpp"
#include "addbasis/parse.hpp"
#include "addbasis/structure.hpp"

namespace addbasis {
namespace {

// ---------------------------------------------------------------------------
// Plumbing.

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  int64_t ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

// Runs fn(0..n-1), striped across `threads` workers.  The first exception
// wins and is rethrown on the caller's thread.  Callers write results into
// per-index slots, so the outcome is independent of the striping.
template <class F>
void parallel_for(int64_t n, int threads, F fn) {
  if (threads <= 1) {
    for (int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int64_t i = w; i < n; i += threads) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Windowed brute-force oracle, independent of the canonical set algebra.
// This mirrors the unit-test oracle: dense membership tables over a bounded
// region of C x Z, filled by direct enumeration.
//
// Margin soundness: suppose s = x_1 + ... + x_h with every x_i in an
// operand and |s| <= K.  Let D bound max(|lo|, |hi|) over the operands and
// L be a common period of all tails.  Any summand beyond D lies on a pure
// tail and may slide by multiples of L while staying in its set; sliding
// opposite-sign far summands toward zero in pairs keeps the sum fixed and
// ends with every summand bounded by K + h(D + L).  Hence all sums in
// [-K, K] have witnesses inside radius M = K + h(D + L) + 64, and partial
// sums of such a witness stay inside i*M after i summands.

struct Table {
  int64_t C = 1;
  int64_t M = 0;
  std::vector<std::vector<uint64_t>> rows;  // rows[c], bit i = member at n = i - M

  Table(int64_t C_, int64_t M_)
      : C(C_),
        M(M_),
        rows(size_t(C_), std::vector<uint64_t>(size_t((2 * M_ + 1 + 63) / 64), 0)) {}

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

Table materialize(const PeriodicSet& s, int64_t M) {
  Table t(s.ambient().torsion_size(), M);
  for (int64_t c = 0; c < t.C; ++c)
    for (int64_t n = -M; n <= M; ++n)
      if (s.member(c, n)) t.set(c, n);
  return t;
}

void or_shifted(std::vector<uint64_t>& dst, const std::vector<uint64_t>& src,
                int64_t k) {
  int64_t ns = int64_t(src.size()) * 64;
  for (int64_t i = 0; i < ns; i += 64) {
    uint64_t w = src[size_t(i >> 6)];
    if (!w) continue;
    int64_t j = i + k;
    int64_t word = floor_div(j, 64), off = j - word * 64;
    if (word >= 0 && size_t(word) < dst.size())
      dst[size_t(word)] |= (off ? (w << off) : w);
    if (off && word + 1 >= 0 && size_t(word + 1) < dst.size())
      dst[size_t(word + 1)] |= w >> (64 - off);
  }
}

Table brute_sum(const AmbientGroup& amb, const Table& a, const Table& b,
                int64_t Mout) {
  Table out(a.C, Mout);
  for (int64_t ca = 0; ca < a.C; ++ca)
    for (int64_t na = -a.M; na <= a.M; ++na) {
      if (!a.get(ca, na)) continue;
      for (int64_t cb = 0; cb < b.C; ++cb) {
        int64_t c = amb.add_flat(ca, cb);
        or_shifted(out.rows[size_t(c)], b.rows[size_t(cb)], na + Mout - b.M);
      }
    }
  for (auto& row : out.rows) {
    int64_t used = 2 * Mout + 1;
    if (used & 63) row.back() &= (uint64_t(1) << (used & 63)) - 1;
  }
  return out;
}

int64_t margin(std::initializer_list<const PeriodicSet*> ops, int64_t h,
               int64_t K) {
  int64_t D = 0, L = 1;
  for (const PeriodicSet* s : ops) {
    D = std::max({D, std::abs(s->lo()), std::abs(s->hi())});
    L = L / std::gcd(L, s->period()) * s->period();
  }
  return K + h * (D + L) + 64;
}

bool agrees(const PeriodicSet& s, const Table& t, int64_t K) {
  for (int64_t c = 0; c < t.C; ++c)
    for (int64_t n = -K; n <= K; ++n)
      if (s.member(c, n) != t.get(c, n)) return false;
  return true;
}

AmbientGroup random_ambient(std::mt19937_64& rng) {
  static const std::vector<std::vector<int64_t>> menu = {
      {}, {}, {2}, {3}, {4}, {5}, {7}, {8}, {2, 2}, {2, 4}, {2, 2, 2}, {6}};
  return AmbientGroup(menu[rng() % menu.size()]);
}

PeriodicSet random_perset(const AmbientGroup& amb, std::mt19937_64& rng,
                          int64_t max_p = 12, int64_t max_w = 24) {
  int64_t C = amb.torsion_size();
  int64_t p = 1 + int64_t(rng() % uint64_t(max_p));
  int64_t w = int64_t(rng() % uint64_t(max_w + 1));
  int64_t lo = int64_t(rng() % 41) - 20;
  BitVec win(size_t(C * w)), right(size_t(C * p)), left(size_t(C * p));
  auto sprinkle = [&](BitVec& b, uint64_t density_pct) {
    for (size_t i = 0; i < b.size(); ++i)
      if (rng() % 100 < density_pct) b.set(i);
  };
  sprinkle(win, 20 + rng() % 60);
  if (rng() % 3) sprinkle(right, 10 + rng() % 50);
  if (rng() % 3) sprinkle(left, 10 + rng() % 50);
  return PeriodicSet::make(amb, p, lo, lo + w, std::move(win), std::move(right),
                           std::move(left));
}

// ---------------------------------------------------------------------------
// Carriers and the certified corpus.

SemigroupT nat_t() { return validate_semigroup(parse_set("0+1N")); }
SemigroupT int_t() { return validate_semigroup(parse_set("0+1Z")); }
SemigroupT c2n_t() {
  return validate_semigroup(parse_set("C=2; (0)0+1N, (1)0+1N"));
}
SemigroupT sg35_t() {
  return validate_semigroup(parse_set("{0, 3, 5, 6}, 8+1N"));
}

struct CorpusEntry {
  int carrier = 0;  // index into carriers()
  PeriodicSet a;
  int64_t order = 0;
};

const std::vector<SemigroupT>& carriers() {
  static const std::vector<SemigroupT> cs = {nat_t(), int_t(), c2n_t(),
                                             sg35_t()};
  return cs;
}

bool carrier_is_group(int idx) { return idx == 1; }

// Deterministic corpus of certified bases over the four carriers.  Literals
// are drawn at random and kept only when ord_star certifies a finite order
// within the family's bound, so every entry carries its exact order.
std::vector<CorpusEntry> build_corpus() {
  std::vector<CorpusEntry> out;
  std::mt19937_64 rng(0x20260818u);

  auto keep = [&](int carrier, const std::string& literal, int64_t max_h) {
    PeriodicSet a = parse_set(literal);
    BasisReport r = ord_star(a, carriers()[size_t(carrier)]);
    if (!r.is_basis || r.order > max_h) return false;
    out.push_back({carrier, a, r.order});
    return true;
  };

  auto pick_points = [&](int64_t span, int64_t count) {
    std::vector<int64_t> pts;
    while (int64_t(pts.size()) < count) {
      int64_t v = int64_t(rng() % uint64_t(span));
      if (std::find(pts.begin(), pts.end(), v) == pts.end()) pts.push_back(v);
    }
    std::sort(pts.begin(), pts.end());
    return pts;
  };

  // Bases of N: a few window points plus one arithmetic ray.
  for (int kept = 0, guard = 0; kept < 120 && guard < 40000; ++guard) {
    int64_t p = 1 + int64_t(rng() % 6);
    int64_t a0 = int64_t(rng() % uint64_t(2 * p));
    std::string lit;
    if (p > 1 || rng() % 2) {
      auto pts = pick_points(12, 1 + int64_t(rng() % 3));
      lit = "{";
      for (size_t i = 0; i < pts.size(); ++i)
        lit += (i ? ", " : "") + std::to_string(pts[i]);
      lit += "}, ";
    }
    lit += std::to_string(a0) + "+" + std::to_string(p) + "N";
    kept += keep(0, lit, 8);
  }

  // Bases of Z: window points plus a full line, or a pair of opposite rays.
  for (int kept = 0, guard = 0; kept < 50 && guard < 40000; ++guard) {
    int64_t p = 1 + int64_t(rng() % 5);
    auto pts = pick_points(13, 1 + int64_t(rng() % 2));
    std::string lit = "{";
    for (size_t i = 0; i < pts.size(); ++i)
      lit += (i ? ", " : "") + std::to_string(pts[i] - 6);
    lit += "}, ";
    if (rng() % 2) {
      lit += std::to_string(int64_t(rng() % uint64_t(p))) + "+" +
             std::to_string(p) + "Z";
    } else {
      int64_t q = 1 + int64_t(rng() % 5);
      lit += std::to_string(int64_t(rng() % uint64_t(p))) + "+" +
             std::to_string(p) + "N, ";
      lit += std::to_string(-int64_t(rng() % uint64_t(q))) + "-" +
             std::to_string(q) + "N";
    }
    kept += keep(1, lit, 8);
  }

  // Bases of C2 (+) N: points in both classes plus one or two class rays.
  for (int kept = 0, guard = 0; kept < 50 && guard < 40000; ++guard) {
    int64_t p = 1 + int64_t(rng() % 4);
    std::string lit = "C=2; {";
    auto pts = pick_points(10, 1 + int64_t(rng() % 3));
    for (size_t i = 0; i < pts.size(); ++i) {
      lit += (i ? ", (" : "(") + std::to_string(rng() % 2) + "," +
             std::to_string(pts[i]) + ")";
    }
    lit += "}, (0)" + std::to_string(int64_t(rng() % uint64_t(2 * p))) + "+" +
           std::to_string(p) + "N";
    if (rng() % 2)
      lit += ", (1)" + std::to_string(int64_t(rng() % uint64_t(2 * p))) + "+" +
             std::to_string(p) + "N";
    kept += keep(2, lit, 8);
  }

  // Bases of the numerical semigroup <3,5>: generators plus a tail ray.
  for (int kept = 0, guard = 0; kept < 30 && guard < 40000; ++guard) {
    int64_t q = 1 + int64_t(rng() % 3);
    static const int64_t members[] = {6, 8, 9, 10, 11, 12};
    std::string lit = "{3, 5";
    if (rng() % 2) lit += ", " + std::to_string(members[rng() % 6]);
    lit += "}, " + std::to_string(8 + int64_t(rng() % 4)) + "+" +
           std::to_string(q) + "N";
    kept += keep(3, lit, 10);
  }

  return out;
}

// Sample up to k distinct elements of a, mixing window points with the
// first elements of each tail.
std::vector<GroupElement> sample_elements(const PeriodicSet& a,
                                          std::mt19937_64& rng, int64_t k) {
  std::vector<GroupElement> pool = a.window_points();
  const int64_t C = a.ambient().torsion_size(), p = a.period();
  for (int64_t c = 0; c < C; ++c)
    for (int64_t n = a.hi(); n < a.hi() + 2 * p; ++n)
      if (a.member(c, n)) pool.push_back(GroupElement{a.ambient().unflatten(c), n});
  for (int64_t c = 0; c < C; ++c)
    for (int64_t n = a.lo() - 2 * p; n < a.lo(); ++n)
      if (a.member(c, n)) pool.push_back(GroupElement{a.ambient().unflatten(c), n});
  std::vector<GroupElement> out;
  while (!pool.empty() && int64_t(out.size()) < k) {
    size_t i = rng() % pool.size();
    out.push_back(pool[i]);
    pool.erase(pool.begin() + int64_t(i));
  }
  return out;
}

std::string counts_by_carrier(const std::vector<CorpusEntry>& corpus) {
  int64_t n[4] = {0, 0, 0, 0};
  for (const auto& e : corpus) ++n[e.carrier];
  std::ostringstream os;
  os << n[0] << " over N, " << n[1] << " over Z, " << n[2]
     << " over C2+N, " << n[3] << " over <3,5>";
  return os.str();
}

// ---------------------------------------------------------------------------
// The fourteen criteria.

CriterionResult c1_sumset_oracle(int threads) {
  Timer timer;
  const int64_t trials = 500;
  std::vector<uint8_t> ok(size_t(trials), 0);
  parallel_for(trials, threads, [&](int64_t idx) {
    std::mt19937_64 rng(0xACCE5501u + uint64_t(idx));
    AmbientGroup amb = random_ambient(rng);
    PeriodicSet a = random_perset(amb, rng, 12, 24);
    PeriodicSet b = random_perset(amb, rng, 12, 24);
    int64_t h = 2 + idx % 5;
    int64_t p = std::max(a.period(), b.period());
    int64_t K = 5 * p * h + 50;
    int64_t M = margin({&a, &b}, h, K);

    Table ta = materialize(a, M), tb = materialize(b, M);
    bool good = agrees(minkowski_sum(a, b), brute_sum(amb, ta, tb, 2 * M), K);

    Table acc = ta;
    for (int64_t i = 2; i <= h; ++i) acc = brute_sum(amb, ta, acc, i * M);
    good = good && agrees(h_fold(a, h), acc, K);
    ok[size_t(idx)] = good;
  });
  int64_t good = std::accumulate(ok.begin(), ok.end(), int64_t{0});
  CriterionResult r{1, good == trials, "", timer.ms()};
  std::ostringstream os;
  os << "sumset/fold oracle agreement on " << good << "/" << trials
     << " random pairs (p<=12, window<=24, |C|<=8, h<=6)";
  r.detail = os.str();
  return r;
}

CriterionResult c2_erdos_graham(const std::vector<CorpusEntry>& corpus,
                                int threads) {
  Timer timer;
  const int64_t n = int64_t(corpus.size());
  std::vector<uint8_t> ok(size_t(n), 0);
  std::atomic<int64_t> regular_count{0};
  parallel_for(n, threads, [&](int64_t idx) {
    const CorpusEntry& e = corpus[size_t(idx)];
    const SemigroupT& t = carriers()[size_t(e.carrier)];
    std::mt19937_64 rng(0xE66501u + uint64_t(idx));
    auto f = sample_elements(e.a, rng, 1 + int64_t(rng() % 2));
    bool verdict = erdos_graham(e.a, f, t);
    PeriodicSet rest = subtract(e.a, PeriodicSet::from_points(e.a.ambient(), f));
    bool finite_order = ord_star(rest, t).is_basis;
    ok[size_t(idx)] = verdict == finite_order;
    regular_count += verdict;
  });
  int64_t good = std::accumulate(ok.begin(), ok.end(), int64_t{0});
  CriterionResult r{2, good == n && n >= 200, "", timer.ms()};
  std::ostringstream os;
  os << "difference-subgroup criterion matches ord_star finiteness on " << good
     << "/" << n << " removals (" << regular_count.load() << " regular)";
  r.detail = os.str();
  return r;
}

CriterionResult c3_removal_search() {
  Timer timer;
  auto cap = [](int64_t h) { return h * (h + 1) / 2 + (h - 1 + 2) / 3; };
  SemigroupT t = nat_t();

  WitnessReport w1 = witness_search(t, 1, 1, {4, 8, 3, 500, 1});
  WitnessReport w2 = witness_search(t, 2, 1, {6, 12, 3, 2000, 1});
  WitnessReport w3 = witness_search(t, 3, 1, {12, 16, 2, 1200, 1});
  int64_t r1 = w1.best_removal ? w1.best_removal->removal_order : -1;
  int64_t r2 = w2.best_removal ? w2.best_removal->removal_order : -1;
  int64_t r3 = w3.best_removal ? w3.best_removal->removal_order : -1;

  bool pass = r1 == 1 && r2 == 4 && r3 == 7 && r1 <= cap(1) && r2 <= cap(2) &&
              r3 <= cap(3);
  CriterionResult r{3, pass, "", timer.ms()};
  std::ostringstream os;
  os << "extremal removal orders " << r1 << "/" << r2 << "/" << r3
     << " at h=1/2/3 (expected 1/4/7; caps " << cap(1) << "/" << cap(2) << "/"
     << cap(3) << " never exceeded)";
  r.detail = os.str();
  return r;
}

CriterionResult c4_essential_singletons(const std::vector<CorpusEntry>& corpus,
                                        int threads) {
  Timer timer;
  const int64_t n = int64_t(corpus.size());
  std::vector<uint8_t> ok(size_t(n), 0);
  parallel_for(n, threads, [&](int64_t idx) {
    const CorpusEntry& e = corpus[size_t(idx)];
    EssentialFamily fam =
        essential_subsets(e.a, carriers()[size_t(e.carrier)], 1);
    int64_t singles =
        fam.count_by_size.size() > 1 ? fam.count_by_size[1] : 0;
    ok[size_t(idx)] = singles <= e.order - 1;
  });
  int64_t good = std::accumulate(ok.begin(), ok.end(), int64_t{0});

  PeriodicSet a2 = parse_set("{1}, 0+2N");
  PeriodicSet a3 = parse_set("C=2; {(1,0), (0,1)}, (0)0+2N");
  BasisReport o2 = ord_star(a2, nat_t()), o3 = ord_star(a3, c2n_t());
  EssentialFamily f2 = essential_subsets(a2, nat_t(), 1);
  EssentialFamily f3 = essential_subsets(a3, c2n_t(), 1);
  int64_t s2 = f2.count_by_size.size() > 1 ? f2.count_by_size[1] : 0;
  int64_t s3 = f3.count_by_size.size() > 1 ? f3.count_by_size[1] : 0;
  bool witnesses = o2.is_basis && o2.order == 2 && s2 == 1 && o3.is_basis &&
                   o3.order == 3 && s3 == 2;

  CriterionResult r{4, good == n && witnesses, "", timer.ms()};
  std::ostringstream os;
  os << "essential singletons <= h-1 on " << good << "/" << n
     << " corpus bases; equality witnesses at h=2 ({1} u 2N: " << s2
     << ") and h=3 (two-point witness over C2+N: " << s3 << ")";
  r.detail = os.str();
  return r;
}

CriterionResult c5_s1_caps(const std::vector<CorpusEntry>& corpus,
                           const std::vector<RemovalStudy>& studies) {
  Timer timer;
  int64_t checked = 0, good = 0;
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].order > 4) continue;
    ++checked;
    good += studies[i].s1_ok;
  }
  CriterionResult r{5, checked > 0 && good == checked, "", timer.ms()};
  std::ostringstream os;
  os << "singleton removal-order caps hold on " << good << "/" << checked
     << " corpus bases of order <= 4";
  r.detail = os.str();
  return r;
}

CriterionResult c6_s2_pairs(const std::vector<CorpusEntry>& corpus,
                            const std::vector<RemovalStudy>& studies) {
  Timer timer;
  int64_t checked = 0, good = 0;
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (!carrier_is_group(corpus[i].carrier) || corpus[i].order > 3) continue;
    if (!studies[i].s2_checked) continue;
    ++checked;
    good += studies[i].s2_ok;
  }
  CriterionResult r{6, checked > 0 && good == checked, "", timer.ms()};
  std::ostringstream os;
  os << "pair removal-order proxy cap holds on " << good << "/" << checked
     << " group bases of order <= 3";
  r.detail = os.str();
  return r;
}

CriterionResult c7_x1_x2_caps(const std::vector<CorpusEntry>& corpus,
                              const std::vector<RemovalStudy>& studies) {
  Timer timer;
  int64_t good = 0;
  for (const auto& s : studies) good += s.x1_ok && s.x2_ok && s.index_ok;
  CriterionResult r{7, good == int64_t(studies.size()), "", timer.ms()};
  std::ostringstream os;
  os << "explicit removal caps (singletons, pairs, subgroup index) hold on "
     << good << "/" << corpus.size() << " corpus bases";
  r.detail = os.str();
  return r;
}

CriterionResult c8_twobases(int threads) {
  Timer timer;
  const int64_t trials = 100;
  std::vector<uint8_t> ok(size_t(trials), 0);
  parallel_for(trials, threads, [&](int64_t idx) {
    std::mt19937_64 rng(0x2BA5E501u + uint64_t(idx));
    if (idx < 50) {
      SemigroupT t = nat_t();
      int64_t p = 2 + int64_t(rng() % 5);
      int64_t b0 = int64_t(rng() % 4);
      int64_t f = 0;
      do f = b0 + 1 + int64_t(rng() % 12); while (std::gcd(f - b0, p) != 1);
      std::vector<GroupElement> fs = {GroupElement{{}, f}};
      if (rng() % 2) {
        int64_t f2 = f;
        do f2 += 1 + int64_t(rng() % 6); while ((f2 - b0) % p == 0);
        fs.push_back(GroupElement{{}, f2});
      }
      PeriodicSet b_set =
          parse_set(std::to_string(b0) + "+" + std::to_string(p) + "N");
      TwoBasesReport tb = twobases_audit(fs, b_set, GroupElement{{}, b0}, t);
      ok[size_t(idx)] = tb.ok;
    } else {
      SemigroupT t = c2n_t();
      int64_t p = (rng() % 2) ? 3 : 5;
      int64_t b0 = int64_t(rng() % 4);
      int64_t f = 0;
      do f = b0 + 1 + int64_t(rng() % 12); while (std::gcd(f - b0, p) != 1);
      std::vector<GroupElement> fs = {GroupElement{{1}, f}};
      if (rng() % 2) {
        int64_t f2 = f;
        do f2 += 1 + int64_t(rng() % 6); while ((f2 - b0) % p == 0);
        fs.push_back(GroupElement{{0}, f2});
      }
      PeriodicSet b_set = parse_set("C=2; (0)" + std::to_string(b0) + "+" +
                                    std::to_string(p) + "N");
      TwoBasesReport tb = twobases_audit(fs, b_set, GroupElement{{0}, b0}, t);
      ok[size_t(idx)] = tb.ok;
    }
  });
  int64_t good = std::accumulate(ok.begin(), ok.end(), int64_t{0});
  CriterionResult r{8, good == trials, "", timer.ms()};
  std::ostringstream os;
  os << "order sandwich h1+1 <= h <= h1+h2 holds on " << good << "/" << trials
     << " assembled bases (50 over N, 50 over C2+N)";
  r.detail = os.str();
  return r;
}

CriterionResult c9_density_lemmas() {
  Timer timer;
  DensityBattery b = density_lemma_battery(200, 0xDE5317u);
  CriterionResult r{9, b.violations() == 0 && b.complete, "", timer.ms()};
  std::ostringstream os;
  os << "density lemma audits hold on >= " << b.target
     << " random instances each, " << b.violations()
     << " violations (coverage: " << b.fired_pre
     << " difference-cover firings, " << b.fired_low
     << " low-density firings, " << b.hyp_nn << " translate-cover hypotheses)";
  r.detail = os.str();
  return r;
}

CriterionResult c10_structure() {
  Timer timer;
  StructureReport s35 = structure_decompose(sg35_t());
  std::vector<GroupElement> expected;
  for (int64_t n : {1, 2, 4, 7}) expected.push_back(GroupElement{{}, n});
  bool ok35 = s35.kind == StructureReport::Kind::cofinite_to &&
              s35.sym_diff == expected;

  StructureReport sc2 = structure_decompose(c2n_t());
  bool okc2 = sc2.kind == StructureReport::Kind::cofinite_to &&
              sc2.torsion == std::vector<int64_t>{2};

  StructureReport sz = structure_decompose(int_t());
  bool okz = sz.kind == StructureReport::Kind::group;

  CriterionResult r{10, ok35 && okc2 && okz, "", timer.ms()};
  std::ostringstream os;
  os << "<3,5> normal-form symmetric difference {1,2,4,7} "
     << (ok35 ? "ok" : "WRONG") << "; C2+N torsion C2 " << (okc2 ? "ok" : "WRONG")
     << "; Z classified as group " << (okz ? "ok" : "WRONG");
  r.detail = os.str();
  return r;
}

CriterionResult c11_construct(int threads) {
  Timer timer;
  struct Job {
    int carrier;
    int64_t h;
  };
  std::vector<Job> jobs;
  for (int carrier : {0, 2, 3})
    for (int64_t h = 2; h <= 10; ++h) jobs.push_back({carrier, h});
  std::vector<uint8_t> ok(jobs.size(), 0);
  parallel_for(int64_t(jobs.size()), threads, [&](int64_t i) {
    const SemigroupT& t = carriers()[size_t(jobs[size_t(i)].carrier)];
    PeriodicSet a = construct_exact_order_basis(t, jobs[size_t(i)].h);
    BasisReport r = ord_star(a, t);
    ok[size_t(i)] = r.is_basis && r.order == jobs[size_t(i)].h;
  });
  int64_t good = std::accumulate(ok.begin(), ok.end(), int64_t{0});
  CriterionResult r{11, good == int64_t(jobs.size()), "", timer.ms()};
  std::ostringstream os;
  os << "construct-and-certify exact order h=2..10 over N, C2+N, <3,5>: "
     << good << "/" << jobs.size();
  r.detail = os.str();
  return r;
}

CriterionResult c12_fpt_counts() {
  Timer timer;
  int64_t c222 = essential_hyperplane_count(2, 2, 2, 8);
  int64_t c223 = essential_hyperplane_count(2, 2, 3, 10);
  bool stable = essential_hyperplane_count(2, 2, 2, 10) == c222 &&
                essential_hyperplane_count(2, 2, 3, 12) == c223;
  bool geq = c223 >= 4;
  bool pass = c222 == 6 && c223 == 12 && stable && geq && timer.ms() < 60000;
  CriterionResult r{12, pass, "", timer.ms()};
  std::ostringstream os;
  os << "graded F_p[t] verified essential counts: (2,2,2) -> " << c222
     << " (criterion pins 6), (2,2,3) -> " << c223
     << " (criterion pins 12; >= (h-1)k=4 " << (geq ? "holds" : "FAILS")
     << "); D-stability " << (stable ? "holds" : "FAILS")
     << ".  The verifier counts only complements whose difference span is "
        "proper, which excludes the affine hyperplanes missing 0";
  r.detail = os.str();
  return r;
}

CriterionResult c13_derived_families(const std::vector<CorpusEntry>& corpus,
                                     int threads) {
  Timer timer;
  std::vector<int64_t> picked;
  for (size_t i = 0; i < corpus.size() && picked.size() < 50; ++i) {
    if (corpus[i].carrier != 0) continue;
    if (reservoir(corpus[i].a, carriers()[0]).elements.empty()) continue;
    picked.push_back(int64_t(i));
  }
  std::vector<uint8_t> ok(picked.size(), 0);
  parallel_for(int64_t(picked.size()), threads, [&](int64_t j) {
    const CorpusEntry& e = corpus[size_t(picked[size_t(j)])];
    GroupBasisReport rep = derive_group_basis(e.a, carriers()[0]);
    ok[size_t(j)] = rep.families_match;
  });
  int64_t good = std::accumulate(ok.begin(), ok.end(), int64_t{0});
  CriterionResult r{13, picked.size() == 50 && good == 50, "", timer.ms()};
  std::ostringstream os;
  os << "derived full-group bases preserve the essential family on " << good
     << "/" << picked.size() << " N-bases with nonempty reservoir";
  r.detail = os.str();
  return r;
}

CriterionResult c14_multiplicative() {
  Timer timer;
  const int64_t N = 1000000;
  // Smallest prime factor sieve; (omega) counts factors with multiplicity.
  std::vector<int32_t> spf(size_t(N + 1), 0);
  for (int64_t i = 2; i <= N; ++i) {
    if (spf[size_t(i)]) continue;
    for (int64_t j = i; j <= N; j += i)
      if (!spf[size_t(j)]) spf[size_t(j)] = int32_t(i);
  }
  auto in_fold = [&](int64_t n, int64_t banned, int64_t h) {
    // n is a product of at most h primes, none equal to `banned` (padding
    // with 1 is free).
    int64_t count = 0;
    while (n > 1) {
      int64_t q = spf[size_t(n)];
      if (q == banned) return false;
      ++count;
      n /= q;
    }
    return count <= h;
  };

  int64_t hits = 0, targets = 0;
  for (int64_t h = 1; h <= 5; ++h) {
    for (int64_t n = 2; n <= N; n += 4) {
      ++targets;
      hits += in_fold(n, 2, h);
    }
    for (int64_t p : {3, 5, 7, 11, 13, 17, 19, 23, 29}) {
      for (int64_t n = p; n <= N; n *= 2) {
        ++targets;
        hits += in_fold(n, p, h);
      }
    }
  }
  CriterionResult r{14, hits == 0, "", timer.ms()};
  std::ostringstream os;
  os << "multiplicative essentiality of every prime: " << hits
     << " hits among " << targets
     << " excluded targets (n=2 mod 4 without the prime 2; 2^k p without p) "
        "for h <= 5, n <= 10^6";
  r.detail = os.str();
  return r;
}

}  // namespace

int64_t DensityBattery::violations() const {
  return std::accumulate(bad.begin(), bad.end(), int64_t{0});
}

DensityBattery density_lemma_battery(int64_t target, uint64_t seed) {
  DensityBattery out;
  out.target = target;
  std::mt19937_64 rng(seed);

  auto group_carrier = [](const AmbientGroup& amb) {
    return validate_semigroup(PeriodicSet::full(amb));
  };
  auto half_carrier = [](const AmbientGroup& amb) {
    int64_t C = amb.torsion_size();
    BitVec right{size_t(C)}, left{size_t(C)};
    for (int64_t c = 0; c < C; ++c) right.set(size_t(c));
    return validate_semigroup(
        PeriodicSet::make(amb, 1, 0, 0, BitVec{size_t(0)}, right, left));
  };

  auto& runs = out.runs;
  auto done = [&] {
    return *std::min_element(runs.begin(), runs.end()) >= target &&
           out.fired_pre >= 10 && out.fired_low >= 10 && out.hyp_nn >= 10;
  };
  for (int64_t guard = 0; guard < 300 * target && !done(); ++guard) {
    AmbientGroup amb = random_ambient(rng);
    SemigroupT t = rng() % 4 == 0 ? group_carrier(amb) : half_carrier(amb);
    auto sample = [&](int64_t maxp, int64_t maxw) {
      return intersect(random_perset(amb, rng, maxp, maxw), t.set());
    };
    PeriodicSet a = sample(6, 10), b = sample(6, 10);

    if (runs[0] < target || out.fired_pre < 10) {
      PrehistoricReport pre = prehistoric_audit(a, b, t);
      out.bad[0] += !pre.holds;
      out.fired_pre += pre.fired;
      ++runs[0];
    }
    if (runs[1] < target && !a.is_empty() && !b.is_empty()) {
      out.bad[1] += !density_increment_audit(b, a, t).ok();
      ++runs[1];
    }
    if (runs[2] < target && !a.is_empty()) {
      int64_t rr = 1 + int64_t(rng() % 3), i = int64_t(rng() % 5);
      out.bad[2] += !iter_audit(a, rr, i, t).ok();
      ++runs[2];
    }
    if (runs[3] < target && !a.is_empty()) {
      int64_t h = 1 + int64_t(rng() % 3);
      if (natural_density(h_fold(a, h), t) > Rational{0, 1}) {
        out.bad[3] += !density_increment2_audit(a, h, t).ok();
        ++runs[3];
      }
    }
    if ((runs[4] < target || out.hyp_nn < 10) && !a.is_empty() &&
        a.period() <= 6) {
      int64_t h = 1 + int64_t(rng() % 2);
      std::vector<GroupElement> xs;
      for (int64_t c = 0; c < amb.torsion_size(); ++c)
        for (int64_t z = 0; z < a.period(); ++z)
          xs.push_back(GroupElement{amb.unflatten(c), z});
      if (xs.size() <= 8) {
        NathNashReport nn = nath_nash_audit(a, h, xs, t);
        out.hyp_nn += nn.hypothesis;
        out.bad[4] += !nn.ok();
        ++runs[4];
      }
    }
    if ((runs[5] < target || out.fired_low < 10) && !a.is_empty()) {
      std::vector<GroupElement> pts = intersect(a, t.set()).window_points();
      if (!pts.empty()) {
        int64_t h = 1 + int64_t(rng() % 3);
        LowDensityReport low =
            low_density_audit(a, pts[rng() % pts.size()], h, t);
        out.bad[5] += !low.holds;
        out.fired_low += low.fired;
        ++runs[5];
      }
    }
  }
  out.complete = done();
  return out;
}

std::vector<CriterionResult> acceptance_results(int threads) {
  if (threads < 1) threads = 1;
  std::vector<CriterionResult> out;
  auto guard = [&](int id, auto fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({id, false, std::string("exception: ") + e.what(), 0});
    }
  };

  std::vector<CorpusEntry> corpus;
  guard(0, [&] {
    Timer timer;
    corpus = build_corpus();
    return CriterionResult{0, !corpus.empty(),
                           "corpus: " + std::to_string(corpus.size()) +
                               " certified bases (" + counts_by_carrier(corpus) +
                               ")",
                           timer.ms()};
  });

  guard(1, [&] { return c1_sumset_oracle(threads); });
  guard(2, [&] { return c2_erdos_graham(corpus, threads); });
  guard(3, [&] { return c3_removal_search(); });
  guard(4, [&] { return c4_essential_singletons(corpus, threads); });

  // One removal study per corpus entry feeds criteria 5-7.
  std::vector<RemovalStudy> studies(corpus.size());
  bool studies_ok = true;
  try {
    parallel_for(int64_t(corpus.size()), threads, [&](int64_t i) {
      const CorpusEntry& e = corpus[size_t(i)];
      studies[size_t(i)] =
          bound_audit(e.a, carriers()[size_t(e.carrier)], e.order, 2);
    });
  } catch (const std::exception& e) {
    studies_ok = false;
    for (int id : {5, 6, 7})
      out.push_back({id, false, std::string("exception: ") + e.what(), 0});
  }
  if (studies_ok) {
    guard(5, [&] { return c5_s1_caps(corpus, studies); });
    guard(6, [&] { return c6_s2_pairs(corpus, studies); });
    guard(7, [&] { return c7_x1_x2_caps(corpus, studies); });
  }

  guard(8, [&] { return c8_twobases(threads); });
  guard(9, [&] { return c9_density_lemmas(); });
  guard(10, [&] { return c10_structure(); });
  guard(11, [&] { return c11_construct(threads); });
  guard(12, [&] { return c12_fpt_counts(); });
  guard(13, [&] { return c13_derived_families(corpus, threads); });
  guard(14, [&] { return c14_multiplicative(); });
  return out;
}

int run_acceptance(std::ostream& out, int threads) {
  std::vector<CriterionResult> results = acceptance_results(threads);
  int failed = 0;
  for (const auto& r : results) {
    if (r.id == 0) {
      out << "     " << (r.pass ? "  " : "!! ") << r.detail << " ("
          << r.elapsed_ms << " ms)\n";
      failed += !r.pass;
      continue;
    }
    out << "[" << (r.id < 10 ? " " : "") << r.id << "] "
        << (r.pass ? "PASS" : "FAIL") << "  " << r.detail << " ("
        << r.elapsed_ms << " ms)\n";
    failed += !r.pass;
  }
  out << (failed == 0 ? "all criteria passed"
                      : std::to_string(failed) + " criterion(s) failed")
      << "\n";
  return failed;
}

}  // namespace addbasis
