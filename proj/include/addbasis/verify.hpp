#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace addbasis {

// Outcome of one check of the verification suite.
struct CriterionResult {
  int id = 0;
  bool pass = false;
  std::string detail;
  int64_t elapsed_ms = 0;
};

// Randomized battery over the six density lemma audits.  Lemma slots, in
// order: prehistoric difference cover, density increment, iterated
// increment, increment-to-subgroup, translate cover, low density.  Each
// slot runs on at least `target` random instances (exact rational
// arithmetic, zero tolerance); `complete` additionally requires the
// conditional lemmas to have fired their hypotheses at least 10 times
// each.  Deterministic for a fixed seed.
struct DensityBattery {
  int64_t target = 0;
  std::array<int64_t, 6> runs{};
  std::array<int64_t, 6> bad{};
  int64_t fired_pre = 0;  // prehistoric hypothesis firings
  int64_t fired_low = 0;  // low-density hypothesis firings
  int64_t hyp_nn = 0;     // translate-cover hypothesis firings
  bool complete = false;

  int64_t violations() const;
};

DensityBattery density_lemma_battery(int64_t target, uint64_t seed);

// Runs the full fourteen-point verification suite: randomized oracle
// agreement for the set arithmetic, soundness and cap audits over a
// deterministic corpus of certified bases, the density lemma audits, the
// structure/construction/search pins, the graded F_p[t] counts, and the
// multiplicative sieve check.  Every expectation is pinned in code with
// zero numeric tolerance.  `threads` >= 1 splits the per-instance loops;
// results do not depend on the split.
std::vector<CriterionResult> acceptance_results(int threads = 1);

// Runs the suite and streams one "[NN] PASS/FAIL  detail" line per
// criterion to `out`.  Returns the number of failed criteria.
int run_acceptance(std::ostream& out, int threads = 1);

}  // namespace addbasis
