#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chab/field_traits.hpp"

namespace chab {

// Univariate polynomial over a coefficient field satisfying FieldOps. Stored
// ascending and trimmed; the zero polynomial has an empty coefficient vector.
// Over local fields, trimming drops apparent zeros; a leading coefficient in
// the ambiguous band surfaces as IllConditionedGcd at the operations that
// must decide degrees.
template <class K>
struct Poly {
  using Ops = FieldOps<K>;
  using Ctx = typename Ops::Ctx;

  Ctx ctx{};
  std::vector<K> c;

  Poly() = default;
  explicit Poly(Ctx context) : ctx(std::move(context)) {}
  Poly(Ctx context, std::vector<K> coeffs) : ctx(std::move(context)), c(std::move(coeffs)) {
    trim();
  }

  long deg() const { return long(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  const K& lead() const { return c.back(); }
  K coeff(std::size_t i) const {
    return i < c.size() ? c[i] : Ops::zero(ctx);
  }

  void trim() {
    while (!c.empty() && Ops::status(c.back()) == ZeroStatus::kZero) c.pop_back();
  }
  // Degree decisions require a certain leading coefficient.
  void trim_checked() {
    trim();
    if (!c.empty() && Ops::status(c.back()) == ZeroStatus::kAmbiguous)
      raise(ErrorCode::kIllConditionedGcd,
            "leading coefficient in the ambiguous zero band");
  }

  static Poly zero(Ctx ctx) { return Poly(std::move(ctx)); }
  static Poly one(Ctx ctx) {
    Poly p(ctx);
    p.c = {Ops::one(p.ctx)};
    return p;
  }
  static Poly x(Ctx ctx) {
    Poly p(ctx);
    p.c = {Ops::zero(p.ctx), Ops::one(p.ctx)};
    return p;
  }
  static Poly constant(Ctx ctx, K v) {
    Poly p(std::move(ctx));
    p.c = {std::move(v)};
    p.trim();
    return p;
  }
  static Poly from_ints(Ctx ctx, const std::vector<long>& v) {
    Poly p(ctx);
    for (long x : v) p.c.push_back(Ops::from_int(p.ctx, x));
    p.trim();
    return p;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) s += " + ";
      s += "(" + Ops::str(c[i]) + ")x^" + std::to_string(i);
    }
    return s;
  }
};

template <class K>
Poly<K> operator+(const Poly<K>& a, const Poly<K>& b) {
  using Ops = FieldOps<K>;
  Poly<K> r(a.ctx);
  r.c.resize(std::max(a.c.size(), b.c.size()), Ops::zero(a.ctx));
  for (std::size_t i = 0; i < r.c.size(); ++i)
    r.c[i] = Ops::add(a.coeff(i), b.coeff(i));
  r.trim();
  return r;
}

template <class K>
Poly<K> operator-(const Poly<K>& a) {
  using Ops = FieldOps<K>;
  Poly<K> r(a.ctx);
  r.c.reserve(a.c.size());
  for (const auto& x : a.c) r.c.push_back(Ops::neg(x));
  return r;
}

template <class K>
Poly<K> operator-(const Poly<K>& a, const Poly<K>& b) {
  return a + (-b);
}

template <class K>
Poly<K> operator*(const Poly<K>& a, const Poly<K>& b) {
  using Ops = FieldOps<K>;
  if (a.is_zero() || b.is_zero())
    return Poly<K>::zero(a.c.empty() && !b.c.empty() ? b.ctx : a.ctx);
  Poly<K> r(a.ctx);
  r.c.assign(a.c.size() + b.c.size() - 1, Ops::zero(a.ctx));
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (Ops::status(a.c[i]) == ZeroStatus::kZero) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j)
      r.c[i + j] = Ops::add(r.c[i + j], Ops::mul(a.c[i], b.c[j]));
  }
  r.trim();
  return r;
}

template <class K>
Poly<K> operator*(const Poly<K>& a, const K& s) {
  using Ops = FieldOps<K>;
  Poly<K> r(a.ctx);
  r.c.reserve(a.c.size());
  for (const auto& x : a.c) r.c.push_back(Ops::mul(x, s));
  r.trim();
  return r;
}

template <class K>
Poly<K> shift_up(const Poly<K>& a, std::size_t k) {
  using Ops = FieldOps<K>;
  if (a.is_zero()) return a;
  Poly<K> r(a.ctx);
  r.c.assign(k, Ops::zero(a.ctx));
  r.c.insert(r.c.end(), a.c.begin(), a.c.end());
  return r;
}

// Long division by a divisor whose leading coefficient is certainly nonzero.
template <class K>
std::pair<Poly<K>, Poly<K>> divmod(const Poly<K>& a, const Poly<K>& b) {
  using Ops = FieldOps<K>;
  Poly<K> bb = b;
  bb.trim_checked();
  if (bb.is_zero()) raise(ErrorCode::kDivisionByApparentZero, "polynomial division by zero");
  Poly<K> q(a.ctx), r = a;
  r.trim();
  if (r.deg() < bb.deg()) return {q, r};
  q.c.assign(std::size_t(r.deg() - bb.deg()) + 1, Ops::zero(a.ctx));
  while (!r.is_zero() && r.deg() >= bb.deg()) {
    K t = Ops::div(r.lead(), bb.lead());
    std::size_t k = std::size_t(r.deg() - bb.deg());
    q.c[k] = Ops::add(q.c[k], t);
    for (long i = 0; i <= bb.deg(); ++i)
      r.c[k + std::size_t(i)] = Ops::sub(r.c[k + std::size_t(i)], Ops::mul(t, bb.c[std::size_t(i)]));
    r.c.pop_back();
    r.trim();
  }
  q.trim();
  return {q, r};
}

template <class K>
Poly<K> rem(const Poly<K>& a, const Poly<K>& b) {
  return divmod(a, b).second;
}
template <class K>
Poly<K> quot(const Poly<K>& a, const Poly<K>& b) {
  return divmod(a, b).first;
}

// Exact-division helper; raises if a remainder survives.
template <class K>
Poly<K> divexact(const Poly<K>& a, const Poly<K>& b) {
  auto [q, r] = divmod(a, b);
  r.trim_checked();
  if (!r.is_zero())
    raise(ErrorCode::kInternalMismatch, "expected exact polynomial division");
  return q;
}

template <class K>
Poly<K> monic(const Poly<K>& a) {
  using Ops = FieldOps<K>;
  Poly<K> r = a;
  r.trim_checked();
  if (r.is_zero()) return r;
  K inv = Ops::div(Ops::one(r.ctx), r.lead());
  for (auto& x : r.c) x = Ops::mul(x, inv);
  r.c.back() = Ops::one(r.ctx);
  return r;
}

template <class K>
Poly<K> gcd_monic(Poly<K> a, Poly<K> b) {
  a.trim_checked();
  b.trim_checked();
  while (!b.is_zero()) {
    Poly<K> r = rem(a, b);
    r.trim_checked();
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return monic(a);
}

// Extended euclid: returns (g, s, t) with s*a + t*b = g, g monic when nonzero.
template <class K>
std::tuple<Poly<K>, Poly<K>, Poly<K>> ext_gcd(const Poly<K>& a, const Poly<K>& b) {
  using Ops = FieldOps<K>;
  Poly<K> r0 = a, r1 = b;
  r0.trim_checked();
  r1.trim_checked();
  Poly<K> s0 = Poly<K>::one(a.ctx), s1 = Poly<K>::zero(a.ctx);
  Poly<K> t0 = Poly<K>::zero(a.ctx), t1 = Poly<K>::one(a.ctx);
  while (!r1.is_zero()) {
    auto [q, r2] = divmod(r0, r1);
    r2.trim_checked();
    Poly<K> s2 = s0 - q * s1;
    Poly<K> t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  K inv = Ops::div(Ops::one(a.ctx), r0.lead());
  return {r0 * inv, s0 * inv, t0 * inv};
}

// Inverse of a modulo m (coprime); raises Inconsistent otherwise.
template <class K>
Poly<K> inverse_mod(const Poly<K>& a, const Poly<K>& m) {
  auto [g, s, t] = ext_gcd(a, m);
  (void)t;
  if (g.deg() != 0)
    raise(ErrorCode::kInconsistent, "inverse modulo a non-coprime polynomial");
  return rem(s, m);
}

template <class K>
Poly<K> derivative(const Poly<K>& a) {
  using Ops = FieldOps<K>;
  Poly<K> r(a.ctx);
  for (std::size_t i = 1; i < a.c.size(); ++i)
    r.c.push_back(Ops::mul(a.c[i], Ops::from_int(a.ctx, long(i))));
  r.trim();
  return r;
}

template <class K>
K eval(const Poly<K>& a, const K& x) {
  using Ops = FieldOps<K>;
  K acc = Ops::zero(a.ctx);
  for (std::size_t i = a.c.size(); i-- > 0;) acc = Ops::add(Ops::mul(acc, x), a.c[i]);
  return acc;
}

// Evaluate a polynomial after mapping its coefficients into another field.
template <class K2, class K, class Conv>
K2 eval_mapped(const Poly<K>& a, const K2& x, Conv conv, const K2& zero) {
  K2 acc = zero;
  using Ops2 = FieldOps<K2>;
  for (std::size_t i = a.c.size(); i-- > 0;)
    acc = Ops2::add(Ops2::mul(acc, x), conv(a.c[i]));
  return acc;
}

template <class K>
Poly<K> pow_mod(Poly<K> base, Int e, const Poly<K>& m) {
  Poly<K> acc = Poly<K>::one(base.ctx);
  base = rem(base, m);
  while (e > 0) {
    if ((e & 1) != 0) acc = rem(acc * base, m);
    e >>= 1;
    if (e > 0) base = rem(base * base, m);
  }
  return acc;
}

template <class K>
bool poly_equal(const Poly<K>& a, const Poly<K>& b) {
  using Ops = FieldOps<K>;
  Poly<K> d = a - b;
  d.trim();
  for (const auto& x : d.c)
    if (Ops::status(x) != ZeroStatus::kZero) return false;
  return true;
}

// Resultant via the euclidean chain.
template <class K>
K resultant(Poly<K> a, Poly<K> b) {
  using Ops = FieldOps<K>;
  a.trim_checked();
  b.trim_checked();
  K res = Ops::one(a.ctx);
  if (a.is_zero() || b.is_zero()) return Ops::zero(a.ctx);
  if (a.deg() < b.deg()) {
    if ((a.deg() % 2) && (b.deg() % 2)) res = Ops::neg(res);
    std::swap(a, b);
  }
  while (true) {
    if (b.deg() == 0) {
      K lb = b.lead();
      K acc = Ops::one(a.ctx);
      for (long i = 0; i < a.deg(); ++i) acc = Ops::mul(acc, lb);
      return Ops::mul(res, acc);
    }
    Poly<K> r = rem(a, b);
    r.trim_checked();
    if (r.is_zero()) return Ops::zero(a.ctx);
    // res(a, b) = (-1)^(deg a * deg b) * lc(b)^(deg a - deg r) * res(b, r)
    K lb = b.lead();
    K acc = Ops::one(a.ctx);
    for (long i = 0; i < a.deg() - r.deg(); ++i) acc = Ops::mul(acc, lb);
    if ((a.deg() % 2) && (b.deg() % 2)) acc = Ops::neg(acc);
    res = Ops::mul(res, acc);
    a = std::move(b);
    b = std::move(r);
  }
}

// Chinese remaindering for pairwise coprime moduli.
template <class K>
Poly<K> crt(const std::vector<std::pair<Poly<K>, Poly<K>>>& congruences) {
  if (congruences.empty()) raise(ErrorCode::kBadInput, "empty crt system");
  Poly<K> r = congruences[0].first;
  Poly<K> m = congruences[0].second;
  for (std::size_t i = 1; i < congruences.size(); ++i) {
    const auto& [ri, mi] = congruences[i];
    // r' = r + m * ((ri - r)/m mod mi)
    Poly<K> adj = rem((ri - r) * inverse_mod(rem(m, mi), mi), mi);
    r = r + m * adj;
    m = m * mi;
    r = rem(r, m);
  }
  return r;
}

// a = a0^2 * asf with asf squarefree; valid while multiplicities stay below
// the characteristic (the callers' inputs satisfy this; violations raise).
template <class K>
std::pair<Poly<K>, Poly<K>> squarefree_split(const Poly<K>& a) {
  Poly<K> d = derivative(a);
  if (d.is_zero()) {
    if (a.deg() <= 0) return {Poly<K>::one(a.ctx), a};
    raise(ErrorCode::kPreconditionViolated, "multiplicity at least the characteristic");
  }
  Poly<K> g = gcd_monic(a, d);
  if (g.deg() <= 0) return {Poly<K>::one(a.ctx), a};
  Poly<K> s = divexact(a, g);  // product of the distinct factors
  auto [g0, gsf] = squarefree_split(g);
  // a = s * g = s * g0^2 * gsf and gsf divides s
  Poly<K> asf = divexact(s, gsf);
  Poly<K> a0 = g0 * gsf;
  // exactness check doubles as the characteristic guard
  if (!poly_equal(a0 * a0 * asf, a))
    raise(ErrorCode::kPreconditionViolated, "squarefree split failed");
  return {a0, asf};
}

template <class K>
bool is_squarefree(const Poly<K>& a) {
  Poly<K> d = derivative(a);
  if (d.is_zero()) return a.deg() <= 0;
  return gcd_monic(a, d).deg() == 0;
}

}  // namespace chab
