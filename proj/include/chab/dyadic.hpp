#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <limits>
#include <string>

#include "chab/errors.hpp"

namespace chab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

constexpr long kValInfinity = std::numeric_limits<long>::max() / 4;

// Exact dyadic rational m * 2^e, normalized so m is odd (or m = 0, e = 0).
// These are the coefficients of local-field elements in the power basis;
// truncation to a 2-power modulus is the only lossy operation.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(Int m, long e) : m_(std::move(m)), e_(e) { normalize(); }
  explicit Dyadic(long v) : m_(v), e_(0) { normalize(); }
  explicit Dyadic(const Int& v) : m_(v), e_(0) { normalize(); }

  static Dyadic zero() { return Dyadic(); }
  static Dyadic one() { return Dyadic(Int(1), 0); }

  bool is_zero() const { return m_ == 0; }
  const Int& mantissa() const { return m_; }
  long exponent() const { return e_; }

  long val2() const { return m_ == 0 ? kValInfinity : e_; }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    if (a.m_ == 0) return b;
    if (b.m_ == 0) return a;
    long e = std::min(a.e_, b.e_);
    return Dyadic((a.m_ << unsigned(a.e_ - e)) + (b.m_ << unsigned(b.e_ - e)), e);
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator-(const Dyadic& a) { return Dyadic(-a.m_, a.e_); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    if (a.m_ == 0 || b.m_ == 0) return Dyadic();
    return Dyadic(a.m_ * b.m_, a.e_ + b.e_);
  }

  Dyadic shifted(long k) const { return m_ == 0 ? Dyadic() : Dyadic(m_, e_ + k); }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.m_ == b.m_ && a.e_ == b.e_;
  }

  // Canonical representative modulo 2^beta, in [0, 2^beta).
  Dyadic reduced_mod(long beta) const {
    if (m_ == 0 || e_ >= beta) return Dyadic();
    unsigned long k = (unsigned long)(beta - e_);
    Int mask = (Int(1) << k) - 1;
    Int r = m_ & mask;
    if (m_ < 0 && r != 0) r = (r + (Int(1) << k)) & mask;
    return Dyadic(r, e_);
  }

  // Inverse of an odd-mantissa dyadic modulo 2^beta (beta > e of result is
  // caller's concern; the returned value satisfies x*inv == 1 mod 2^beta).
  Dyadic inverse_mod(long beta) const {
    if (m_ == 0) raise(ErrorCode::kDivisionByApparentZero, "dyadic inverse of zero");
    long re = -e_;
    long bits = beta - re;
    if (bits <= 0) return Dyadic();
    Int inv = invert_odd(m_, (unsigned long)bits);
    return Dyadic(inv, re).reduced_mod(beta);
  }

  // 2-adic digit expansion of p/q (q odd away from 2) modulo 2^beta.
  static Dyadic from_rational(const Rat& r, long beta) {
    if (r == 0) return Dyadic();
    Int num = boost::multiprecision::numerator(r);
    Int den = boost::multiprecision::denominator(r);
    long v = 0;
    while ((num & 1) == 0) {
      num >>= 1;
      ++v;
    }
    while ((den & 1) == 0) {
      den >>= 1;
      --v;
    }
    long bits = beta - v;
    if (bits <= 0) return Dyadic();
    Int d = invert_odd(den, (unsigned long)bits);
    return Dyadic(num * d, v).reduced_mod(beta);
  }

  // Exact rational value (only sensible on canonical representatives).
  Rat to_rational() const {
    if (m_ == 0) return Rat(0);
    if (e_ >= 0) return Rat(m_ << unsigned(e_));
    return Rat(m_, Int(1) << unsigned(-e_));
  }

  std::string str() const {
    std::string s = m_.str();
    if (e_ != 0) s += "*2^" + std::to_string(e_);
    return s;
  }

 private:
  static Int invert_odd(const Int& a, unsigned long bits) {
    Int mask = (Int(1) << bits) - 1;
    Int x(1), am = a & mask;
    if (a < 0) am = (am + (Int(1) << bits)) & mask;
    for (unsigned long k = 1; k < bits; k <<= 1) {
      x = (x * (2 - am * x)) & mask;
    }
    x = (x * (2 - am * x)) & mask;
    return x & mask;
  }

  void normalize() {
    if (m_ == 0) {
      e_ = 0;
      return;
    }
    while ((m_ & 1) == 0) {
      m_ >>= 1;
      ++e_;
    }
  }

  Int m_ = 0;
  long e_ = 0;
};

inline long val2(const Int& n) {
  if (n == 0) return kValInfinity;
  Int m = n;
  long v = 0;
  while ((m & 1) == 0) {
    m >>= 1;
    ++v;
  }
  return v;
}

inline long val2(const Rat& r) {
  if (r == 0) return kValInfinity;
  return val2(boost::multiprecision::numerator(r)) -
         val2(boost::multiprecision::denominator(r));
}

// Exact squareness test of a rational number.
inline bool is_square(const Rat& r) {
  if (r == 0) return true;
  if (r < 0) return false;
  Int n = boost::multiprecision::numerator(r);
  Int d = boost::multiprecision::denominator(r);
  Int sn = boost::multiprecision::sqrt(n);
  Int sd = boost::multiprecision::sqrt(d);
  return sn * sn == n && sd * sd == d;
}

}  // namespace chab
