#pragma once
// Ambient groups of the form C_{d_1} x ... x C_{d_r} (+) Z and their elements.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace addbasis {

/// Thrown when an operation's preconditions are violated.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a certified recomputation fails to confirm a result.
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown on malformed textual input.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when an engine-internal certificate is contradicted (a bug, not a
/// property of the input).
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

inline int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

inline int64_t floor_mod(int64_t a, int64_t b) { return a - floor_div(a, b) * b; }

/// The ambient group C (+) Z: a finite abelian group C given by invariant
/// factors d_1 | d_2 | ... | d_r (each >= 2, possibly r = 0) and one free
/// rank.  Torsion tuples are flattened mixed-radix (first factor slowest) so
/// that subsets of C x [a,b) pack into bit arrays.
class AmbientGroup {
 public:
  AmbientGroup() = default;

  explicit AmbientGroup(std::vector<int64_t> torsion) : torsion_(std::move(torsion)) {
    for (size_t i = 0; i < torsion_.size(); ++i) {
      if (torsion_[i] < 2) throw PreconditionError("ambient torsion factors must be >= 2");
      if (i + 1 < torsion_.size() && torsion_[i + 1] % torsion_[i] != 0)
        throw PreconditionError("ambient torsion factors must form a divisibility chain");
    }
    csize_ = 1;
    for (int64_t d : torsion_) csize_ *= d;
  }

  const std::vector<int64_t>& torsion() const { return torsion_; }
  size_t rank() const { return torsion_.size(); }

  /// |C|, the number of torsion classes (1 when there is no torsion).
  int64_t torsion_size() const { return csize_; }

  bool operator==(const AmbientGroup& o) const { return torsion_ == o.torsion_; }
  bool operator!=(const AmbientGroup& o) const { return !(*this == o); }

  /// Flatten a torsion tuple (reduced componentwise) to an index in [0, |C|).
  int64_t flatten(const std::vector<int64_t>& coords) const {
    if (coords.size() != torsion_.size())
      throw PreconditionError("torsion coordinate count does not match the ambient group");
    int64_t f = 0;
    for (size_t i = 0; i < coords.size(); ++i)
      f = f * torsion_[i] + floor_mod(coords[i], torsion_[i]);
    return f;
  }

  std::vector<int64_t> unflatten(int64_t flat) const {
    std::vector<int64_t> coords(torsion_.size());
    for (size_t i = torsion_.size(); i-- > 0;) {
      coords[i] = flat % torsion_[i];
      flat /= torsion_[i];
    }
    return coords;
  }

  /// Sum of two flattened torsion indices.
  int64_t add_flat(int64_t a, int64_t b) const {
    if (torsion_.empty()) return 0;
    std::vector<int64_t> ca = unflatten(a), cb = unflatten(b);
    int64_t f = 0;
    for (size_t i = 0; i < torsion_.size(); ++i)
      f = f * torsion_[i] + (ca[i] + cb[i]) % torsion_[i];
    return f;
  }

  int64_t neg_flat(int64_t a) const {
    if (torsion_.empty()) return 0;
    std::vector<int64_t> ca = unflatten(a);
    int64_t f = 0;
    for (size_t i = 0; i < torsion_.size(); ++i)
      f = f * torsion_[i] + (torsion_[i] - ca[i]) % torsion_[i];
    return f;
  }

  std::string to_string() const {
    if (torsion_.empty()) return "Z";
    std::string s = "C=";
    for (size_t i = 0; i < torsion_.size(); ++i) {
      if (i) s += "x";
      s += std::to_string(torsion_[i]);
    }
    s += " (+) Z";
    return s;
  }

 private:
  std::vector<int64_t> torsion_;
  int64_t csize_ = 1;
};

/// One ambient element (c_1, ..., c_r, n).
struct GroupElement {
  std::vector<int64_t> torsion;  // reduced mod d_i
  int64_t n = 0;

  bool operator==(const GroupElement& o) const { return torsion == o.torsion && n == o.n; }
  bool operator<(const GroupElement& o) const {
    if (n != o.n) return n < o.n;
    return torsion < o.torsion;
  }
};

inline GroupElement make_element(const AmbientGroup& amb, std::vector<int64_t> coords, int64_t n) {
  if (coords.size() != amb.rank())
    throw PreconditionError("torsion coordinate count does not match the ambient group");
  for (size_t i = 0; i < coords.size(); ++i) coords[i] = floor_mod(coords[i], amb.torsion()[i]);
  return GroupElement{std::move(coords), n};
}

inline GroupElement add(const AmbientGroup& amb, const GroupElement& a, const GroupElement& b) {
  GroupElement r;
  r.torsion.resize(amb.rank());
  for (size_t i = 0; i < amb.rank(); ++i)
    r.torsion[i] = (a.torsion[i] + b.torsion[i]) % amb.torsion()[i];
  r.n = a.n + b.n;
  return r;
}

inline GroupElement negate(const AmbientGroup& amb, const GroupElement& a) {
  GroupElement r;
  r.torsion.resize(amb.rank());
  for (size_t i = 0; i < amb.rank(); ++i)
    r.torsion[i] = (amb.torsion()[i] - a.torsion[i]) % amb.torsion()[i];
  r.n = -a.n;
  return r;
}

inline GroupElement scale(const AmbientGroup& amb, int64_t k, const GroupElement& a) {
  GroupElement r;
  r.torsion.resize(amb.rank());
  for (size_t i = 0; i < amb.rank(); ++i)
    r.torsion[i] = floor_mod(k * a.torsion[i], amb.torsion()[i]);
  r.n = k * a.n;
  return r;
}

inline GroupElement zero_element(const AmbientGroup& amb) {
  return GroupElement{std::vector<int64_t>(amb.rank(), 0), 0};
}

inline std::string to_string(const GroupElement& g) {
  if (g.torsion.empty()) return std::to_string(g.n);
  std::string s = "(";
  for (int64_t c : g.torsion) s += std::to_string(c) + ",";
  s += std::to_string(g.n) + ")";
  return s;
}

}  // namespace addbasis
