#include "addbasis/fpt.hpp"

#include <algorithm>
#include <random>

namespace addbasis {
namespace {

bool is_prime(int64_t p) {
  if (p < 2) return false;
  for (int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// p^e, or cap + 1 as soon as the product would exceed cap.
int64_t pow_capped(int64_t p, int64_t e, int64_t cap) {
  int64_t v = 1;
  for (int64_t i = 0; i < e; ++i) {
    if (v > cap / p) return cap + 1;
    v *= p;
  }
  return v;
}

void validate_params(int64_t p, int64_t r, int64_t h, int64_t degree) {
  if (!is_prime(p)) throw PreconditionError("fpt: p must be prime");
  if (r < 1) throw PreconditionError("fpt: r must be at least 1");
  if (h < 1) throw PreconditionError("fpt: h must be at least 1");
  if (degree < r * h + 2)
    throw PreconditionError("fpt: truncation degree must be at least r*h + 2");
  if (pow_capped(p, r, int64_t{1} << 20) > (int64_t{1} << 20))
    throw PreconditionError("fpt: p^r exceeds the enumeration budget 2^20");
}

std::vector<int64_t> reduce_mod(const std::vector<int64_t>& v, int64_t p) {
  std::vector<int64_t> w(v.size());
  for (size_t i = 0; i < v.size(); ++i) w[i] = ((v[i] % p) + p) % p;
  return w;
}

// All p^width vectors of F_p^degree supported on [shift, shift + width).
std::vector<std::vector<int64_t>> block_vectors(const GradedBlock& b,
                                                int64_t p, int64_t degree) {
  int64_t total = pow_capped(p, b.width, int64_t{1} << 20);
  if (total > (int64_t{1} << 20))
    throw PreconditionError("fpt: block enumeration exceeds budget 2^20");
  std::vector<std::vector<int64_t>> out;
  out.reserve(static_cast<size_t>(total));
  std::vector<int64_t> v(static_cast<size_t>(degree), 0);
  for (int64_t code = 0; code < total; ++code) {
    int64_t x = code;
    for (int64_t i = 0; i < b.width; ++i) {
      v[static_cast<size_t>(b.shift + i)] = x % p;
      x /= p;
    }
    out.push_back(v);
  }
  return out;
}

// Row-echelon basis of a subspace of F_p^dim, grown one vector at a time.
class SpanBasis {
 public:
  SpanBasis(int64_t p, int64_t dim) : p_(p), dim_(dim) {}

  // Reduces v against the basis; if a nonzero remainder survives, adds it
  // as a new row and returns true.
  bool insert(std::vector<int64_t> v) {
    for (size_t i = 0; i < rows_.size(); ++i) {
      int64_t c = v[static_cast<size_t>(pivots_[i])];
      if (c != 0) subtract_scaled(v, rows_[i], c);
    }
    int64_t piv = -1;
    for (int64_t j = 0; j < dim_; ++j)
      if (v[static_cast<size_t>(j)] != 0) {
        piv = j;
        break;
      }
    if (piv < 0) return false;
    scale(v, inverse(v[static_cast<size_t>(piv)]));
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
  }

  int64_t rank() const { return static_cast<int64_t>(rows_.size()); }

  const std::vector<int64_t>& pivots() const { return pivots_; }

 private:
  int64_t inverse(int64_t a) const {
    int64_t x = 1;
    for (int64_t e = p_ - 2; e > 0; e >>= 1) {
      // Square-and-multiply; p is small so everything fits in int64.
      if (e & 1) x = x * a % p_;
      a = a * a % p_;
    }
    return x;
  }

  void scale(std::vector<int64_t>& v, int64_t c) const {
    for (auto& x : v) x = x * c % p_;
  }

  void subtract_scaled(std::vector<int64_t>& v,
                       const std::vector<int64_t>& row, int64_t c) const {
    for (size_t i = 0; i < v.size(); ++i)
      v[i] = ((v[i] - c * row[i]) % p_ + p_) % p_;
  }

  int64_t p_;
  int64_t dim_;
  std::vector<std::vector<int64_t>> rows_;
  std::vector<int64_t> pivots_;
};

std::vector<int64_t> subtract_vec(const std::vector<int64_t>& a,
                                  const std::vector<int64_t>& b, int64_t p) {
  std::vector<int64_t> d(a.size());
  for (size_t i = 0; i < a.size(); ++i) d[i] = ((a[i] - b[i]) % p + p) % p;
  return d;
}

// Splits v into its slices on [jr, (j+1)r) for j < h-1 plus its tail on
// [(h-1)r, degree); the parts sum to v and each lies in one block of the
// layered construction.
std::vector<std::vector<int64_t>> layered_decomposition(
    const std::vector<int64_t>& v, int64_t r, int64_t h) {
  std::vector<std::vector<int64_t>> parts;
  size_t dim = v.size();
  for (int64_t j = 0; j + 1 < h; ++j) {
    std::vector<int64_t> part(dim, 0);
    for (int64_t i = j * r; i < (j + 1) * r; ++i)
      part[static_cast<size_t>(i)] = v[static_cast<size_t>(i)];
    parts.push_back(std::move(part));
  }
  std::vector<int64_t> tail(dim, 0);
  for (size_t i = static_cast<size_t>((h - 1) * r); i < dim; ++i)
    tail[i] = v[i];
  parts.push_back(std::move(tail));
  return parts;
}

void verify_decomposition(const GradedSet& a, const std::vector<int64_t>& v,
                          int64_t r, int64_t h) {
  auto parts = layered_decomposition(v, r, h);
  if (static_cast<int64_t>(parts.size()) != h)
    throw InternalError("fpt: decomposition has the wrong number of parts");
  std::vector<int64_t> sum(v.size(), 0);
  for (const auto& part : parts) {
    if (!a.member(part))
      throw InternalError("fpt: decomposition part escapes the set");
    for (size_t i = 0; i < sum.size(); ++i) sum[i] = (sum[i] + part[i]) % a.p;
  }
  if (sum != v) throw InternalError("fpt: decomposition does not sum back");
}

}  // namespace

bool GradedSet::member(const std::vector<int64_t>& v) const {
  if (static_cast<int64_t>(v.size()) != degree)
    throw PreconditionError("GradedSet::member: vector length must equal the truncation degree");
  std::vector<int64_t> w = reduce_mod(v, p);
  for (const auto& x : removed)
    if (reduce_mod(x, p) == w) return false;
  for (const auto& x : added)
    if (reduce_mod(x, p) == w) return true;
  for (const auto& b : blocks) {
    bool inside = true;
    for (int64_t i = 0; i < degree && inside; ++i)
      if (w[static_cast<size_t>(i)] != 0 && (i < b.shift || i >= b.shift + b.width))
        inside = false;
    if (inside) return true;
  }
  return false;
}

std::string GradedSet::to_string() const {
  std::string s = "F_" + std::to_string(p) + "^" + std::to_string(degree) + ": ";
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (i) s += ", ";
    s += "t^" + std::to_string(blocks[i].shift) + "*G_" +
         std::to_string(blocks[i].width);
  }
  if (!added.empty()) s += " +" + std::to_string(added.size()) + " added";
  if (!removed.empty()) s += " -" + std::to_string(removed.size()) + " removed";
  return s;
}

GradedSet build_remark_basis(int64_t p, int64_t r, int64_t h, int64_t degree) {
  validate_params(p, r, h, degree);
  GradedSet a;
  a.p = p;
  a.degree = degree;
  for (int64_t j = 0; j + 1 < h; ++j) a.blocks.push_back({j * r, r});
  a.blocks.push_back({(h - 1) * r, degree - (h - 1) * r});

  // Re-verify the order-h decomposition on seeded random vectors, and on
  // the whole truncation when it is small enough to enumerate.
  std::mt19937_64 rng(0x66707421u ^
                      static_cast<uint64_t>(((p * 131 + r) * 131 + h) * 131 +
                                            degree));
  std::uniform_int_distribution<int64_t> digit(0, p - 1);
  std::vector<int64_t> v(static_cast<size_t>(degree), 0);
  for (int trial = 0; trial < 500; ++trial) {
    for (auto& x : v) x = digit(rng);
    verify_decomposition(a, v, r, h);
  }
  if (pow_capped(p, degree, int64_t{1} << 20) <= (int64_t{1} << 20)) {
    std::fill(v.begin(), v.end(), 0);
    for (;;) {
      verify_decomposition(a, v, r, h);
      size_t i = 0;
      while (i < v.size() && ++v[i] == p) v[i++] = 0;
      if (i == v.size()) break;
    }
  }
  return a;
}

int64_t essential_hyperplane_count(int64_t p, int64_t r, int64_t h,
                                   int64_t degree) {
  validate_params(p, r, h, degree);
  GradedSet a = build_remark_basis(p, r, h, degree);
  const int64_t k = pow_capped(p, r, int64_t{1} << 20) -
                    pow_capped(p, r - 1, int64_t{1} << 20);

  int64_t count = 0;
  for (int64_t j = 0; j + 1 < h; ++j) {
    const GradedBlock block = a.blocks[static_cast<size_t>(j)];
    auto vectors = block_vectors(block, p, degree);

    // Normals in F_p^r up to scalar: first nonzero entry equal to 1.
    std::vector<std::vector<int64_t>> normals;
    {
      std::vector<int64_t> n(static_cast<size_t>(r), 0);
      for (;;) {
        size_t i = 0;
        while (i < n.size() && ++n[i] == p) n[i++] = 0;
        if (i == n.size()) break;
        size_t first = 0;
        while (n[first] == 0) ++first;
        if (n[first] == 1) normals.push_back(n);
      }
    }

    for (const auto& n : normals) {
      for (int64_t c = 0; c < p; ++c) {
        // Split the block along the affine hyperplane <n, x> = c.
        std::vector<std::vector<int64_t>> hyper, complement;
        for (const auto& x : vectors) {
          int64_t dot = 0;
          for (int64_t i = 0; i < r; ++i)
            dot = (dot + n[static_cast<size_t>(i)] *
                             x[static_cast<size_t>(block.shift + i)]) %
                  p;
          (dot == c ? hyper : complement).push_back(x);
        }
        if (static_cast<int64_t>(complement.size()) != k)
          throw InternalError("fpt: hyperplane complement has the wrong size");

        // Span of (A \ E) - (A \ E), E being the complement.  Fix a base
        // point b0 in A \ E; the differences from b0 of the surviving
        // hyperplane, of the unit vectors outside the block, and of one
        // two-coordinate vector of the final block generate the whole
        // difference span (every member of A \ E is reachable from them).
        const std::vector<int64_t> b0 = hyper.front();
        SpanBasis span(p, degree);
        auto feed = [&](const std::vector<int64_t>& x) {
          span.insert(subtract_vec(x, b0, p));
        };
        for (const auto& x : hyper) feed(x);
        std::vector<int64_t> unit(static_cast<size_t>(degree), 0);
        for (int64_t i = 0; i < degree; ++i) {
          if (i >= block.shift && i < block.shift + block.width) continue;
          unit[static_cast<size_t>(i)] = 1;
          feed(unit);
          unit[static_cast<size_t>(i)] = 0;
        }
        std::vector<int64_t> pair(static_cast<size_t>(degree), 0);
        pair[static_cast<size_t>(degree - 2)] = 1;
        pair[static_cast<size_t>(degree - 1)] = 1;
        feed(pair);

        bool essential = span.rank() < degree;
        if (essential) {
          // A proper verdict must be decided below the truncation rim: the
          // missing directions all sit inside the block, never on the top
          // two coordinates.
          std::vector<bool> pivoted(static_cast<size_t>(degree), false);
          for (int64_t piv : span.pivots())
            pivoted[static_cast<size_t>(piv)] = true;
          for (int64_t i = degree - 2; i < degree; ++i)
            if (!pivoted[static_cast<size_t>(i)])
              throw VerificationError(
                  "fpt: span verdict touches the truncation boundary; "
                  "increase the degree");
          // Minimality: restoring any one removed vector must complete the
          // span to the whole space.
          for (const auto& e : complement) {
            SpanBasis with_e = span;
            with_e.insert(subtract_vec(e, b0, p));
            if (with_e.rank() < degree) {
              essential = false;
              break;
            }
          }
        }
        if (essential) ++count;
      }
    }
  }
  return count;
}

}  // namespace addbasis
