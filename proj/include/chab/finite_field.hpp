#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "chab/errors.hpp"

namespace chab {

class FqCtx;
using FqCtxPtr = std::shared_ptr<const FqCtx>;

// Exact finite field F_q of odd characteristic, table driven. Elements are
// indices 0..q-1 encoding digit vectors base p over a fixed monic irreducible
// modulus (the lexicographically smallest one for the degree).
class FqCtx : public std::enable_shared_from_this<FqCtx> {
 public:
  static FqCtxPtr make(int p, int m = 1);

  int p() const { return p_; }
  int m() const { return m_; }
  int q() const { return q_; }

  std::uint16_t add(std::uint16_t a, std::uint16_t b) const { return add_[idx(a, b)]; }
  std::uint16_t mul(std::uint16_t a, std::uint16_t b) const { return mul_[idx(a, b)]; }
  std::uint16_t neg(std::uint16_t a) const { return neg_[a]; }
  std::uint16_t sub(std::uint16_t a, std::uint16_t b) const { return add(a, neg(b)); }
  std::uint16_t inv(std::uint16_t a) const {
    if (a == 0) raise(ErrorCode::kDivisionByApparentZero, "inverse of 0 in F_q");
    return inv_[a];
  }
  std::uint16_t pow(std::uint16_t a, long e) const;
  bool is_square(std::uint16_t a) const { return sqrt_[a] != kNoRoot; }
  // One square root; the other is its negative. kNoRoot marker when none.
  std::uint16_t sqrt(std::uint16_t a) const { return sqrt_[a]; }
  static constexpr std::uint16_t kNoRoot = 0xffff;

  std::uint16_t from_int(long v) const;
  std::string canonical_string() const;

 private:
  FqCtx() = default;
  std::size_t idx(std::uint16_t a, std::uint16_t b) const {
    return std::size_t(a) * q_ + b;
  }

  int p_ = 3, m_ = 1, q_ = 3;
  std::vector<std::uint16_t> add_, mul_, neg_, inv_, sqrt_;
};

// Value-semantic element; carries its field context.
struct FqElem {
  FqCtxPtr F;
  std::uint16_t v = 0;

  friend FqElem operator+(const FqElem& a, const FqElem& b) {
    return {a.F, a.F->add(a.v, b.v)};
  }
  friend FqElem operator-(const FqElem& a, const FqElem& b) {
    return {a.F, a.F->sub(a.v, b.v)};
  }
  friend FqElem operator-(const FqElem& a) { return {a.F, a.F->neg(a.v)}; }
  friend FqElem operator*(const FqElem& a, const FqElem& b) {
    return {a.F, a.F->mul(a.v, b.v)};
  }
  friend FqElem operator/(const FqElem& a, const FqElem& b) {
    return {a.F, a.F->mul(a.v, b.F->inv(b.v))};
  }
  friend bool operator==(const FqElem& a, const FqElem& b) { return a.v == b.v; }
};

}  // namespace chab
