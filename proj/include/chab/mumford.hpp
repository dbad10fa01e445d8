#pragma once

#include <optional>
#include <vector>

#include "chab/etale.hpp"
#include "chab/poly.hpp"

namespace chab {

// Odd-degree hyperelliptic curve y^2 = f(x) over a coefficient field.
template <class K>
struct Curve {
  Poly<K> f;
  long genus = 0;

  const K& lead() const { return f.lead(); }
};

template <class K>
Curve<K> make_curve(Poly<K> f) {
  f.trim_checked();
  if (f.deg() < 3 || f.deg() % 2 == 0)
    raise(ErrorCode::kBadInput, "curve polynomial must have odd degree >= 3");
  if (!is_squarefree(f)) raise(ErrorCode::kBadInput, "curve polynomial must be squarefree");
  Curve<K> c{std::move(f), 0};
  c.genus = (c.f.deg() - 1) / 2;
  return c;
}

template <class K>
struct CurvePoint {
  bool at_infinity = true;
  K x{}, y{};

  static CurvePoint infinity() { return CurvePoint{}; }
  static CurvePoint affine(K x, K y) { return CurvePoint{false, std::move(x), std::move(y)}; }
};

template <class K>
bool on_curve(const Curve<K>& C, const CurvePoint<K>& P) {
  using Ops = FieldOps<K>;
  if (P.at_infinity) return true;
  K lhs = Ops::mul(P.y, P.y);
  return Ops::status(Ops::sub(lhs, eval(C.f, P.x))) == ZeroStatus::kZero;
}

// Jacobian point in Mumford form [a, b]: a monic, b reduced mod a and
// a | f - b^2. Canonical points have deg a <= genus.
template <class K>
struct MumfordPoint {
  Poly<K> a, b;

  bool is_zero() const { return a.deg() == 0; }
};

template <class K>
MumfordPoint<K> jac_zero(const Curve<K>& C) {
  return {Poly<K>::one(C.f.ctx), Poly<K>::zero(C.f.ctx)};
}

template <class K>
bool mumford_valid(const Curve<K>& C, const MumfordPoint<K>& P) {
  if (P.a.is_zero()) return false;
  Poly<K> r = rem(C.f - P.b * P.b, P.a);
  r.trim();
  return r.is_zero();
}

template <class K>
bool jac_equal(const MumfordPoint<K>& P, const MumfordPoint<K>& Q) {
  return poly_equal(P.a, Q.a) && poly_equal(P.b, Q.b);
}

template <class K>
MumfordPoint<K> jac_neg(const Curve<K>& C, const MumfordPoint<K>& P) {
  (void)C;
  return {P.a, rem(-P.b, P.a)};
}

// Cantor composition followed by reduction to canonical form.
template <class K>
MumfordPoint<K> jac_add(const Curve<K>& C, const MumfordPoint<K>& P,
                        const MumfordPoint<K>& Q) {
  auto [d1, e1, e2] = ext_gcd(P.a, Q.a);
  Poly<K> bsum = P.b + Q.b;
  auto [d, c1, c2] = ext_gcd(d1, bsum);
  // s1 a1 + s2 a2 + s3 (b1 + b2) = d
  Poly<K> s1 = c1 * e1, s2 = c1 * e2, s3 = c2;
  Poly<K> a = divexact(P.a * Q.a, d * d);
  Poly<K> num = s1 * P.a * Q.b + s2 * Q.a * P.b + s3 * (P.b * Q.b + C.f);
  Poly<K> b = rem(divexact(num, d), a);
  // reduction
  while (a.deg() > C.genus) {
    Poly<K> a2 = divexact(C.f - b * b, a);
    Poly<K> b2 = rem(-b, a2);
    a = std::move(a2);
    b = std::move(b2);
  }
  a = monic(a);
  b = rem(b, a);
  return {a, b};
}

template <class K>
MumfordPoint<K> jac_mul(const Curve<K>& C, const MumfordPoint<K>& P, long n) {
  if (n < 0) return jac_mul(C, jac_neg(C, P), -n);
  MumfordPoint<K> acc = jac_zero(C);
  MumfordPoint<K> base = P;
  while (n) {
    if (n & 1) acc = jac_add(C, acc, base);
    n >>= 1;
    if (n) base = jac_add(C, base, base);
  }
  return acc;
}

// Class of [P - base] under the usual embeddings.
template <class K>
MumfordPoint<K> embed_point(const Curve<K>& C, const CurvePoint<K>& P,
                            const CurvePoint<K>& base) {
  using Ops = FieldOps<K>;
  auto embed_inf = [&](const CurvePoint<K>& R) -> MumfordPoint<K> {
    if (R.at_infinity) return jac_zero(C);
    Poly<K> a(C.f.ctx);
    a.c = {Ops::neg(R.x), Ops::one(C.f.ctx)};
    Poly<K> b = Poly<K>::constant(C.f.ctx, R.y);
    return {a, b};
  };
  if (base.at_infinity) return embed_inf(P);
  return jac_add(C, embed_inf(P), jac_neg(C, embed_inf(base)));
}

// Descent class representative of a point, in k[x]/<f>.
template <class K>
Poly<K> point_descent_rep(const Curve<K>& C, const MumfordPoint<K>& P,
                          const K& twist) {
  return descent_rep(P.a, C.f, twist);
}
template <class K>
Poly<K> point_descent_rep(const Curve<K>& C, const MumfordPoint<K>& P) {
  return descent_rep(P.a, C.f);
}

// Relaxed re-representation [cfac - 2hb - h^2 a, -b - ha] of the same class,
// searching constant shifts h until the new a-polynomial is coprime to f and
// squarefree. Raises NoGoodShift when the deterministic search set fails.
template <class K>
MumfordPoint<K> rerepresent(const Curve<K>& C, const MumfordPoint<K>& P,
                            const std::vector<K>& shifts) {
  using Ops = FieldOps<K>;
  Poly<K> cfac = divexact(C.f - P.b * P.b, P.a);
  for (const K& h : shifts) {
    Poly<K> hp = Poly<K>::constant(C.f.ctx, h);
    Poly<K> a2 = cfac - hp * Poly<K>::constant(C.f.ctx, Ops::from_int(C.f.ctx, 2)) * P.b -
                 hp * hp * P.a;
    a2.trim();
    if (a2.is_zero() || Ops::status(a2.lead()) != ZeroStatus::kNonZero) continue;
    Poly<K> b2 = -(P.b + hp * P.a);
    K leadinv = Ops::div(Ops::one(C.f.ctx), a2.lead());
    Poly<K> a2m = monic(a2);
    b2 = rem(b2, a2m);
    (void)leadinv;
    MumfordPoint<K> out{a2m, b2};
    if (!mumford_valid(C, out)) continue;
    if (gcd_monic(a2m, C.f).deg() != 0) continue;
    if (!is_squarefree(a2m)) continue;
    return out;
  }
  raise(ErrorCode::kNoGoodShift, "no constant shift yields a coprime squarefree form");
}

template <class K>
std::vector<K> default_shift_set(const typename FieldOps<K>::Ctx& ctx, long count) {
  using Ops = FieldOps<K>;
  std::vector<K> out;
  out.push_back(Ops::zero(ctx));
  for (long i = 1; i <= count; ++i) {
    out.push_back(Ops::from_int(ctx, i));
    out.push_back(Ops::from_int(ctx, -i));
  }
  return out;
}

}  // namespace chab
