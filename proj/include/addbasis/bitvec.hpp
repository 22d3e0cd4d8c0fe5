#pragma once
// Fixed-size bit array with the few bulk operations the set kernels need.

#include <bit>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace addbasis {

class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  size_t size() const { return n_; }

  bool test(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(size_t i) { w_[i >> 6] |= uint64_t(1) << (i & 63); }
  void reset(size_t i) { w_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
  void assign(size_t i, bool v) { v ? set(i) : reset(i); }

  void set_all() {
    for (auto& w : w_) w = ~uint64_t(0);
    trim();
  }

  size_t count() const {
    size_t c = 0;
    for (uint64_t w : w_) c += std::popcount(w);
    return c;
  }

  bool none() const {
    for (uint64_t w : w_)
      if (w) return false;
    return true;
  }

  bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }

  BitVec& operator|=(const BitVec& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  BitVec& operator&=(const BitVec& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  /// this \ o
  BitVec& operator-=(const BitVec& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }
  void flip_all() {
    for (auto& w : w_) w = ~w;
    trim();
  }

  /// True when every set bit of *this is also set in o.
  bool subset_of(const BitVec& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

 private:
  void trim() {
    if (n_ & 63) w_.back() &= (uint64_t(1) << (n_ & 63)) - 1;
  }

  size_t n_ = 0;
  std::vector<uint64_t> w_;
};

}  // namespace addbasis
