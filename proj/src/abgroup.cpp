#include "addbasis/abgroup.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace addbasis {

namespace {

Mat identity(size_t n) {
  Mat m(n, std::vector<int64_t>(n, 0));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Mat matmul(const Mat& a, const Mat& b) {
  size_t n = a.size(), k = b.size(), c = k ? b[0].size() : 0;
  Mat out(n, std::vector<int64_t>(c, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < k; ++j) {
      if (!a[i][j]) continue;
      for (size_t t = 0; t < c; ++t) out[i][t] += a[i][j] * b[j][t];
    }
  return out;
}

std::vector<int64_t> vecmat(const std::vector<int64_t>& v, const Mat& m) {
  size_t k = m.size(), c = k ? m[0].size() : 0;
  std::vector<int64_t> out(c, 0);
  for (size_t j = 0; j < k; ++j) {
    if (!v[j]) continue;
    for (size_t t = 0; t < c; ++t) out[t] += v[j] * m[j][t];
  }
  return out;
}

// Row-style Hermite normal form of the row lattice of m: row-reduced echelon
// over Z with positive pivots and entries above each pivot reduced to
// [0, pivot).  Zero rows are kept in place at the bottom so that an
// accompanying transform stays square; callers drop them as needed.  When
// want_u, u holds the unimodular transform with u * input = result.
struct HnfResult {
  Mat h;
  Mat u;
};

HnfResult hnf(Mat m, bool want_u) {
  size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  Mat u = want_u ? identity(rows) : Mat{};
  auto rowsub = [&](size_t dst, size_t src, int64_t q) {
    if (!q) return;
    for (size_t j = 0; j < cols; ++j) m[dst][j] -= q * m[src][j];
    if (want_u)
      for (size_t j = 0; j < rows; ++j) u[dst][j] -= q * u[src][j];
  };
  auto rowswap = [&](size_t a, size_t b) {
    if (a == b) return;
    std::swap(m[a], m[b]);
    if (want_u) std::swap(u[a], u[b]);
  };
  auto rowneg = [&](size_t i) {
    for (auto& x : m[i]) x = -x;
    if (want_u)
      for (auto& x : u[i]) x = -x;
  };

  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    // Euclidean elimination in column c among rows r..end.
    for (;;) {
      size_t piv = rows;
      for (size_t i = r; i < rows; ++i)
        if (m[i][c] != 0 && (piv == rows || std::abs(m[i][c]) < std::abs(m[piv][c]))) piv = i;
      if (piv == rows) break;  // column is zero below r
      rowswap(r, piv);
      bool clean = true;
      for (size_t i = r + 1; i < rows; ++i)
        if (m[i][c] != 0) {
          rowsub(i, r, m[i][c] / m[r][c]);
          if (m[i][c] != 0) clean = false;
        }
      if (clean) break;
    }
    if (m[r][c] == 0) continue;
    if (m[r][c] < 0) rowneg(r);
    for (size_t i = 0; i < r; ++i) rowsub(i, r, floor_div(m[i][c], m[r][c]));
    ++r;
  }
  return {std::move(m), std::move(u)};
}

Mat hnf_rows(Mat m) {
  HnfResult res = hnf(std::move(m), false);
  Mat out;
  for (auto& row : res.h) {
    bool zero = std::all_of(row.begin(), row.end(), [](int64_t x) { return x == 0; });
    if (!zero) out.push_back(std::move(row));
  }
  return out;
}

// Smith normal form s = u * m * v (u unimodular row ops, v unimodular column
// ops).  Only v and v^{-1} are accumulated; diagonal entries are nonnegative
// and form a divisibility chain.
struct SnfResult {
  Mat s;
  Mat v;
  Mat vinv;
};

SnfResult snf(Mat m) {
  size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  Mat v = identity(cols), vinv = identity(cols);
  auto rowsub = [&](size_t dst, size_t src, int64_t q) {
    if (!q) return;
    for (size_t j = 0; j < cols; ++j) m[dst][j] -= q * m[src][j];
  };
  auto colsub = [&](size_t dst, size_t src, int64_t q) {
    // m: col dst -= q * col src; v follows; vinv takes the inverse as rows.
    if (!q) return;
    for (size_t i = 0; i < rows; ++i) m[i][dst] -= q * m[i][src];
    for (size_t i = 0; i < cols; ++i) v[i][dst] -= q * v[i][src];
    for (size_t j = 0; j < cols; ++j) vinv[src][j] += q * vinv[dst][j];
  };
  auto colswap = [&](size_t a, size_t b) {
    if (a == b) return;
    for (size_t i = 0; i < rows; ++i) std::swap(m[i][a], m[i][b]);
    for (size_t i = 0; i < cols; ++i) std::swap(v[i][a], v[i][b]);
    std::swap(vinv[a], vinv[b]);
  };
  auto colneg = [&](size_t a) {
    for (size_t i = 0; i < rows; ++i) m[i][a] = -m[i][a];
    for (size_t i = 0; i < cols; ++i) v[i][a] = -v[i][a];
    for (auto& x : vinv[a]) x = -x;
  };

  size_t t = 0;
  while (t < rows && t < cols) {
    // Find a nonzero entry in the trailing submatrix.
    size_t pi = rows, pj = cols;
    for (size_t i = t; i < rows; ++i)
      for (size_t j = t; j < cols; ++j)
        if (m[i][j] != 0 && (pi == rows || std::abs(m[i][j]) < std::abs(m[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi == rows) break;
    std::swap(m[t], m[pi]);
    colswap(t, pj);

    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (size_t i = t + 1; i < rows; ++i)
        if (m[i][t] != 0) {
          rowsub(i, t, m[i][t] / m[t][t]);
          if (m[i][t] != 0) {
            std::swap(m[t], m[i]);
            dirty = true;
          }
        }
      for (size_t j = t + 1; j < cols; ++j)
        if (m[t][j] != 0) {
          colsub(j, t, m[t][j] / m[t][t]);
          if (m[t][j] != 0) {
            colswap(t, j);
            dirty = true;
          }
        }
    }
    if (m[t][t] < 0) colneg(t);
    // Divisibility: fold any offending entry into column t and redo.
    bool redo = false;
    for (size_t i = t + 1; i < rows && !redo; ++i)
      for (size_t j = t + 1; j < cols && !redo; ++j)
        if (m[i][j] % m[t][t] != 0) {
          colsub(t, j, -1);  // col t += col j
          redo = true;
        }
    if (!redo) ++t;
  }
  return {std::move(m), std::move(v), std::move(vinv)};
}

// Forward substitution against canonical HNF rows; returns the coefficient
// vector when v lies in the row lattice.
std::optional<std::vector<int64_t>> solve_in_hnf(const Mat& h, std::vector<int64_t> v) {
  std::vector<int64_t> y(h.size(), 0);
  for (size_t i = 0; i < h.size(); ++i) {
    size_t c = 0;
    while (c < h[i].size() && h[i][c] == 0) ++c;
    if (c == h[i].size()) continue;
    if (v[c] % h[i][c] != 0) return std::nullopt;
    y[i] = v[c] / h[i][c];
    for (size_t j = 0; j < v.size(); ++j) v[j] -= y[i] * h[i][j];
  }
  for (int64_t x : v)
    if (x != 0) return std::nullopt;
  return y;
}

Mat relation_rows(const AmbientGroup& amb) {
  size_t n = amb.rank() + 1;
  Mat rows;
  for (size_t i = 0; i < amb.rank(); ++i) {
    std::vector<int64_t> row(n, 0);
    row[i] = amb.torsion()[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<int64_t> lift(const AmbientGroup& amb, const GroupElement& g) {
  if (g.torsion.size() != amb.rank())
    throw PreconditionError("element does not belong to the ambient group");
  std::vector<int64_t> v;
  for (size_t i = 0; i < amb.rank(); ++i) v.push_back(floor_mod(g.torsion[i], amb.torsion()[i]));
  v.push_back(g.n);
  return v;
}

}  // namespace

Subgroup Subgroup::from_rows(const AmbientGroup& amb, const Mat& rows) {
  Mat all = relation_rows(amb);
  for (const auto& r : rows) {
    if (r.size() != amb.rank() + 1) throw PreconditionError("lattice row has wrong width");
    all.push_back(r);
  }
  return Subgroup(amb, hnf_rows(std::move(all)));
}

Subgroup Subgroup::from_generators(const AmbientGroup& amb,
                                   const std::vector<GroupElement>& gens) {
  Mat rows;
  for (const auto& g : gens) rows.push_back(lift(amb, g));
  return from_rows(amb, rows);
}

Subgroup Subgroup::whole(const AmbientGroup& amb) {
  Mat rows;
  size_t n = amb.rank() + 1;
  for (size_t i = 0; i < n; ++i) {
    std::vector<int64_t> row(n, 0);
    row[i] = 1;
    rows.push_back(std::move(row));
  }
  return from_rows(amb, rows);
}

Subgroup Subgroup::trivial(const AmbientGroup& amb) { return from_rows(amb, {}); }

bool Subgroup::contains(const GroupElement& g) const {
  return solve_in_hnf(basis_, lift(amb_, g)).has_value();
}

bool Subgroup::contains(const Subgroup& o) const {
  if (amb_ != o.amb_) throw PreconditionError("ambient group mismatch");
  for (const auto& row : o.basis_)
    if (!solve_in_hnf(basis_, row)) return false;
  return true;
}

bool Subgroup::finite_index() const { return basis_.size() == amb_.rank() + 1; }

std::optional<int64_t> Subgroup::index() const {
  if (!finite_index()) return std::nullopt;
  int64_t det = 1;
  for (size_t i = 0; i < basis_.size(); ++i) det *= basis_[i][i];
  return det;
}

PeriodicSet Subgroup::as_periodic() const {
  size_t n = amb_.rank() + 1;
  int64_t C = amb_.torsion_size();
  if (!finite_index()) {
    // No z-component: H is a finite set of torsion points.
    std::vector<GroupElement> pts;
    for (int64_t c = 0; c < C; ++c) {
      GroupElement g{amb_.unflatten(c), 0};
      if (contains(g)) pts.push_back(g);
    }
    return PeriodicSet::from_points(amb_, pts);
  }
  int64_t P = basis_[n - 1][n - 1];  // least positive pure-z element
  BitVec pat{size_t(C * P)};
  for (int64_t c = 0; c < C; ++c)
    for (int64_t m = 0; m < P; ++m)
      if (contains(GroupElement{amb_.unflatten(c), m})) pat.set(size_t(c * P + m));
  BitVec pat2 = pat;
  return PeriodicSet::make(amb_, P, 0, 0, BitVec(0), std::move(pat), std::move(pat2));
}

std::string Subgroup::to_string() const {
  std::string s = "[";
  for (size_t i = 0; i < basis_.size(); ++i) {
    if (i) s += "; ";
    for (size_t j = 0; j < basis_[i].size(); ++j) {
      if (j) s += " ";
      s += std::to_string(basis_[i][j]);
    }
  }
  return s + "]";
}

Subgroup sum(const Subgroup& a, const Subgroup& b) {
  if (a.ambient() != b.ambient()) throw PreconditionError("ambient group mismatch");
  Mat rows = a.basis();
  for (const auto& r : b.basis()) rows.push_back(r);
  return Subgroup::from_rows(a.ambient(), rows);
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  if (a.ambient() != b.ambient()) throw PreconditionError("ambient group mismatch");
  const Mat& A = a.basis();
  const Mat& B = b.basis();
  size_t n = a.ambient().rank() + 1;
  Mat stacked;
  for (const auto& r : A) stacked.push_back(r);
  for (const auto& r : B) {
    std::vector<int64_t> neg(r.size());
    for (size_t j = 0; j < r.size(); ++j) neg[j] = -r[j];
    stacked.push_back(std::move(neg));
  }
  HnfResult res = hnf(stacked, true);
  // Left-kernel rows (x | y) with x*A = y*B give intersection generators x*A.
  Mat gens;
  for (size_t i = 0; i < res.h.size(); ++i) {
    bool zero = std::all_of(res.h[i].begin(), res.h[i].end(), [](int64_t x) { return x == 0; });
    if (!zero) continue;
    std::vector<int64_t> g(n, 0);
    for (size_t j = 0; j < A.size(); ++j)
      for (size_t t = 0; t < n; ++t) g[t] += res.u[i][j] * A[j][t];
    gens.push_back(std::move(g));
  }
  return Subgroup::from_rows(a.ambient(), gens);
}

Subgroup subgroup_from_periodic(const PeriodicSet& D) {
  if (D.is_empty()) throw PreconditionError("subgroup of an empty set");
  const AmbientGroup& amb = D.ambient();
  std::vector<GroupElement> gens = D.window_points();
  bool tails = false;
  for (auto& [c, m] : D.right_classes()) {
    tails = true;
    gens.push_back(GroupElement{amb.unflatten(c), D.hi() + floor_mod(m - D.hi(), D.period())});
  }
  for (auto& [c, m] : D.left_classes()) {
    tails = true;
    gens.push_back(
        GroupElement{amb.unflatten(c), (D.lo() - 1) - floor_mod((D.lo() - 1) - m, D.period())});
  }
  if (tails) gens.push_back(GroupElement{std::vector<int64_t>(amb.rank(), 0), D.period()});
  return Subgroup::from_generators(amb, gens);
}

QuotientInfo quotient(const Subgroup& H) {
  const AmbientGroup& amb = H.ambient();
  size_t n = amb.rank() + 1;
  QuotientInfo q;
  SnfResult s = snf(H.basis());
  size_t rank = H.basis().size();
  for (size_t i = 0; i < rank; ++i)
    if (s.s[i][i] > 1) q.invariant_factors.push_back(s.s[i][i]);
  q.free_rank = int64_t(n - rank);
  q.is_finite = (q.free_rank == 0);
  q.is_cyclic = (q.free_rank == 0 && q.invariant_factors.size() <= 1) ||
                (q.free_rank == 1 && q.invariant_factors.empty());
  if (q.is_finite) {
    // The HNF pivot box is a transversal; walking it in nested coordinate
    // order yields the lexicographically least nonnegative representative of
    // each coset.
    const Mat& b = H.basis();
    std::vector<int64_t> x(n, 0);
    for (;;) {
      q.coset_reps.push_back(
          GroupElement{std::vector<int64_t>(x.begin(), x.begin() + amb.rank()), x[n - 1]});
      size_t i = n;
      while (i-- > 0) {
        if (++x[i] < b[i][i]) break;
        x[i] = 0;
        if (i == 0) {
          i = size_t(-1);
          break;
        }
      }
      if (i == size_t(-1)) break;
    }
  }
  return q;
}

Reembedding::Reembedding(const Subgroup& H) : H_(H) {
  if (!H.finite_index()) throw PreconditionError("reembed requires a finite-index subgroup");
  const AmbientGroup& amb = H.ambient();
  size_t r = amb.rank(), n = r + 1;
  const Mat& B = H.basis();

  // Relation lattice rows expressed in the basis B.
  Mat R;
  for (size_t i = 0; i < r; ++i) {
    std::vector<int64_t> rel(n, 0);
    rel[i] = amb.torsion()[i];
    auto y = solve_in_hnf(B, rel);
    if (!y) throw InternalError("relation lattice escapes the subgroup lattice");
    R.push_back(*y);
  }

  SnfResult s;
  if (R.empty()) {
    // No torsion relations: the column transform is the identity on the n
    // basis coordinates.
    s.v = identity(n);
    s.vinv = identity(n);
  } else {
    s = snf(R);
  }
  bprime_ = matmul(s.vinv, B);
  v_ = s.v;
  free_row_ = n - 1;

  std::vector<int64_t> factors;
  for (size_t i = 0; i < r; ++i) {
    if (s.s[i][i] == 0) throw InternalError("relation lattice lost rank");
    if (s.s[i][i] > 1) {
      tors_rows_.push_back(i);
      factors.push_back(s.s[i][i]);
      if (bprime_[i][n - 1] != 0)
        throw InternalError("torsion generator acquired a z-coordinate");
    }
  }
  e_ = bprime_[free_row_][n - 1];
  if (e_ == 0) throw InternalError("free generator lost its z-coordinate");
  if (e_ < 0) {
    for (auto& x : bprime_[free_row_]) x = -x;
    for (size_t i = 0; i < n; ++i) v_[i][free_row_] = -v_[i][free_row_];
    e_ = -e_;
  }
  image_ = AmbientGroup(factors);
}

GroupElement Reembedding::forward(const GroupElement& x) const {
  auto y = solve_in_hnf(H_.basis(), lift(H_.ambient(), x));
  if (!y) throw PreconditionError("element is not in the subgroup");
  std::vector<int64_t> yp = vecmat(*y, v_);
  std::vector<int64_t> coords;
  for (size_t k = 0; k < tors_rows_.size(); ++k)
    coords.push_back(floor_mod(yp[tors_rows_[k]], image_.torsion()[k]));
  return GroupElement{std::move(coords), yp[free_row_]};
}

GroupElement Reembedding::backward(const GroupElement& y) const {
  const AmbientGroup& amb = H_.ambient();
  size_t n = amb.rank() + 1;
  if (y.torsion.size() != image_.rank())
    throw PreconditionError("element does not belong to the image group");
  std::vector<int64_t> yp(n, 0);
  for (size_t k = 0; k < tors_rows_.size(); ++k) yp[tors_rows_[k]] = y.torsion[k];
  yp[free_row_] = y.n;
  std::vector<int64_t> lifted = vecmat(yp, bprime_);
  std::vector<int64_t> coords(lifted.begin(), lifted.begin() + amb.rank());
  return make_element(amb, std::move(coords), lifted[n - 1]);
}

PeriodicSet Reembedding::transport(const PeriodicSet& S) const {
  const AmbientGroup& amb = H_.ambient();
  if (S.ambient() != amb) throw PreconditionError("ambient group mismatch");
  if (!subset_of(S, H_.as_periodic()))
    throw PreconditionError("transport requires the set to lie inside the subgroup");
  if (S.is_empty()) return PeriodicSet::empty(image_);

  // Stepping the image z-coordinate by delta shifts the domain element by a
  // pure z-translation that is 0 mod the period of S, so membership seen
  // through backward() is delta-periodic outside a bounded window.
  int64_t ord_t = 1;
  for (size_t i = 0; i < amb.rank(); ++i) {
    int64_t t = floor_mod(bprime_[free_row_][i], amb.torsion()[i]);
    int64_t o = amb.torsion()[i] / std::gcd(amb.torsion()[i], t == 0 ? amb.torsion()[i] : t);
    ord_t = ord_t / std::gcd(ord_t, o) * o;
  }
  int64_t zper = S.period() / std::gcd(S.period(), e_);
  int64_t delta = zper / std::gcd(zper, ord_t) * ord_t;

  int64_t m_lo = floor_div(S.lo(), e_) - delta;
  int64_t m_hi = floor_div(S.hi() + e_ - 1, e_) + delta;
  int64_t Ci = image_.torsion_size();
  BitVec win(size_t(Ci * (m_hi - m_lo))), right(size_t(Ci * delta)), left(size_t(Ci * delta));
  auto mem = [&](int64_t c, int64_t m) {
    return S.member(backward(GroupElement{image_.unflatten(c), m}));
  };
  for (int64_t c = 0; c < Ci; ++c) {
    for (int64_t m = m_lo; m < m_hi; ++m)
      win.assign(size_t(c * (m_hi - m_lo) + (m - m_lo)), mem(c, m));
    for (int64_t mu = 0; mu < delta; ++mu) {
      right.assign(size_t(c * delta + mu), mem(c, m_hi + floor_mod(mu - m_hi, delta)));
      left.assign(size_t(c * delta + mu), mem(c, m_lo - 1 - floor_mod(m_lo - 1 - mu, delta)));
    }
  }
  return PeriodicSet::make(image_, delta, m_lo, m_hi, std::move(win), std::move(right),
                           std::move(left));
}

Reembedding reembed(const Subgroup& H) { return Reembedding(H); }

}  // namespace addbasis
