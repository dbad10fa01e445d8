#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chab/errors.hpp"

namespace chab {

// Dense F2 vector. Group law is XOR; used for square classes and for the
// F2 linear algebra in the certification steps.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : size_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return size_; }

  bool get(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1u; }
  void set(std::size_t i, bool b) {
    std::uint64_t m = std::uint64_t(1) << (i % 64);
    if (b)
      w_[i / 64] |= m;
    else
      w_[i / 64] &= ~m;
  }
  void flip(std::size_t i) { w_[i / 64] ^= std::uint64_t(1) << (i % 64); }

  bool is_zero() const {
    for (auto w : w_)
      if (w) return false;
    return true;
  }

  BitVec& operator^=(const BitVec& o) {
    if (o.size_ != size_) raise(ErrorCode::kBadInput, "BitVec size mismatch");
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

  friend bool operator==(const BitVec& a, const BitVec& b) {
    return a.size_ == b.size_ && a.w_ == b.w_;
  }
  friend bool operator<(const BitVec& a, const BitVec& b) {
    if (a.size_ != b.size_) return a.size_ < b.size_;
    for (std::size_t i = a.w_.size(); i-- > 0;)
      if (a.w_[i] != b.w_[i]) return a.w_[i] < b.w_[i];
    return false;
  }

  // Hex serialization, low bit first nibble-packed; stable across runs.
  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s;
    for (std::size_t i = 0; i < size_; i += 4) {
      unsigned v = 0;
      for (unsigned j = 0; j < 4 && i + j < size_; ++j)
        v |= unsigned(get(i + j)) << j;
      s.push_back(digits[v]);
    }
    return s;
  }

  static BitVec from_hex(const std::string& s, std::size_t n) {
    BitVec v(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t k = i / 4;
      if (k >= s.size()) break;
      char c = s[k];
      unsigned d = (c >= 'a') ? unsigned(c - 'a' + 10) : unsigned(c - '0');
      if ((d >> (i % 4)) & 1u) v.set(i, true);
    }
    return v;
  }

  friend BitVec concat(const BitVec& a, const BitVec& b) {
    BitVec r(a.size_ + b.size_);
    for (std::size_t i = 0; i < a.size_; ++i) r.set(i, a.get(i));
    for (std::size_t i = 0; i < b.size_; ++i) r.set(a.size_ + i, b.get(i));
    return r;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> w_;
};

// Row-echelon span of F2 vectors supporting rank and membership queries.
class F2Span {
 public:
  explicit F2Span(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }

  // Returns true if v enlarged the span.
  bool add(BitVec v) {
    reduce(v);
    if (v.is_zero()) return false;
    rows_.push_back(v);
    for (std::size_t i = rows_.size(); i-- > 1;)
      if (pivot(rows_[i]) > pivot(rows_[i - 1]))
        std::swap(rows_[i], rows_[i - 1]);
      else
        break;
    return true;
  }

  bool contains(BitVec v) const {
    reduce(v);
    return v.is_zero();
  }

 private:
  static std::size_t pivot(const BitVec& v) {
    for (std::size_t i = v.size(); i-- > 0;)
      if (v.get(i)) return i + 1;
    return 0;
  }
  void reduce(BitVec& v) const {
    for (const auto& r : rows_) {
      std::size_t p = pivot(r);
      if (p && v.get(p - 1)) v ^= r;
    }
  }

  std::size_t dim_;
  std::vector<BitVec> rows_;
};

// FNV-1a over bytes; used for canonical fingerprints in certificates.
inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string fnv_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[h & 0xf];
    h >>= 4;
  }
  return s;
}

}  // namespace chab
