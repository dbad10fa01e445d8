#pragma once

#include "chab/dyadic.hpp"
#include "chab/finite_field.hpp"
#include "chab/local_field.hpp"

namespace chab {

enum class ZeroStatus { kZero, kNonZero, kAmbiguous };

// Uniform coefficient-field interface for the generic polynomial, Jacobian
// and halving code. Exact fields never report kAmbiguous; local elements use
// the zero-band threshold tau of their field.
template <class K>
struct FieldOps;

struct RatCtx {
  bool operator==(const RatCtx&) const { return true; }
};

template <>
struct FieldOps<Rat> {
  using Ctx = RatCtx;
  static constexpr bool exact = true;
  static Ctx ctx_of(const Rat&) { return {}; }
  static Rat zero(const Ctx&) { return Rat(0); }
  static Rat one(const Ctx&) { return Rat(1); }
  static Rat from_int(const Ctx&, long v) { return Rat(v); }
  static ZeroStatus status(const Rat& x) {
    return x == 0 ? ZeroStatus::kZero : ZeroStatus::kNonZero;
  }
  static Rat add(const Rat& a, const Rat& b) { return a + b; }
  static Rat sub(const Rat& a, const Rat& b) { return a - b; }
  static Rat neg(const Rat& a) { return -a; }
  static Rat mul(const Rat& a, const Rat& b) { return a * b; }
  static Rat div(const Rat& a, const Rat& b) {
    if (b == 0) raise(ErrorCode::kDivisionByApparentZero, "rational division by zero");
    return a / b;
  }
  static bool eq(const Rat& a, const Rat& b) { return a == b; }
  static long pivot_metric(const Rat&) { return 0; }
  static std::string str(const Rat& a) {
    return boost::multiprecision::numerator(a).str() +
           (boost::multiprecision::denominator(a) == 1
                ? ""
                : "/" + boost::multiprecision::denominator(a).str());
  }
};

template <>
struct FieldOps<FqElem> {
  using Ctx = FqCtxPtr;
  static constexpr bool exact = true;
  static Ctx ctx_of(const FqElem& x) { return x.F; }
  static FqElem zero(const Ctx& F) { return {F, 0}; }
  static FqElem one(const Ctx& F) { return {F, 1}; }
  static FqElem from_int(const Ctx& F, long v) { return {F, F->from_int(v)}; }
  static ZeroStatus status(const FqElem& x) {
    return x.v == 0 ? ZeroStatus::kZero : ZeroStatus::kNonZero;
  }
  static FqElem add(const FqElem& a, const FqElem& b) { return a + b; }
  static FqElem sub(const FqElem& a, const FqElem& b) { return a - b; }
  static FqElem neg(const FqElem& a) { return -a; }
  static FqElem mul(const FqElem& a, const FqElem& b) { return a * b; }
  static FqElem div(const FqElem& a, const FqElem& b) { return a / b; }
  static bool eq(const FqElem& a, const FqElem& b) { return a.v == b.v; }
  static long pivot_metric(const FqElem&) { return 0; }
  static std::string str(const FqElem& a) { return std::to_string(a.v); }
};

template <>
struct FieldOps<LocalElement> {
  using Ctx = LocalFieldPtr;
  static constexpr bool exact = false;
  static Ctx ctx_of(const LocalElement& x) { return x.field(); }
  static LocalElement zero(const Ctx& F) { return F->zero(); }
  static LocalElement one(const Ctx& F) { return F->one(); }
  static LocalElement from_int(const Ctx& F, long v) {
    return F->from_rational(Rat(v));
  }
  static ZeroStatus status(const LocalElement& x) {
    if (x.is_apparent_zero()) return ZeroStatus::kZero;
    if (x.val() >= x.precision() - x.field()->tau()) return ZeroStatus::kAmbiguous;
    return ZeroStatus::kNonZero;
  }
  static LocalElement add(const LocalElement& a, const LocalElement& b) { return a + b; }
  static LocalElement sub(const LocalElement& a, const LocalElement& b) { return a - b; }
  static LocalElement neg(const LocalElement& a) { return -a; }
  static LocalElement mul(const LocalElement& a, const LocalElement& b) { return a * b; }
  static LocalElement div(const LocalElement& a, const LocalElement& b) { return a / b; }
  static bool eq(const LocalElement& a, const LocalElement& b) {
    return a.field()->equal_to_precision(a, b);
  }
  static long pivot_metric(const LocalElement& x) { return x.val(); }
  static std::string str(const LocalElement& a) { return a.str(); }
};

}  // namespace chab
