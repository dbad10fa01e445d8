#include "doctest.h"

#include "chab/etale.hpp"

#include "rng.hpp"

using namespace chab;

namespace {

// Single-factor presentation of Q2[x]/<x^l + 1/4>: the field Q2(2^(1/l))
// with theta = -lambda^(-2).
LocalFactorization quintic_style(int l, long prime_digits = 48) {
  auto prime = LocalField::make(LocalFieldDesc::q2(), prime_digits);
  RatCtx ctx;
  Poly<Rat> fmonic(ctx);
  fmonic.c.assign(std::size_t(l) + 1, Rat(0));
  fmonic.c[0] = Rat(1, 4);
  fmonic.c[std::size_t(l)] = Rat(1);
  EtaleFactorSpec spec;
  spec.field = LocalFieldDesc::ramified_2root(l);
  spec.poly.assign(std::size_t(l) + 1, Rat(0));
  spec.poly[0] = Rat(1, 4);
  spec.poly[std::size_t(l)] = Rat(1);
  spec.root.assign(std::size_t(l), Dyadic());
  spec.root[std::size_t(l) - 2] = Dyadic(Int(-1), -1);  // -lambda^(l-2)/2
  spec.newton_refine = false;
  spec.certificate.kind = "newton_polygon";
  return LocalFactorization::verify(fmonic, prime, {spec});
}

LocalFactorization two_factor_cubic(long prime_digits = 48) {
  auto prime = LocalField::make(LocalFieldDesc::q2(), prime_digits);
  RatCtx ctx;
  // (x^2 - 2)(x - 3) = x^3 - 3x^2 - 2x + 6
  Poly<Rat> fmonic = Poly<Rat>::from_ints(ctx, {6, -2, -3, 1});
  EtaleFactorSpec quad;
  quad.field = LocalFieldDesc::ramified_2root(2);
  quad.poly = {Rat(-2), Rat(0), Rat(1)};
  quad.root = {Dyadic(), Dyadic(Int(1), 0)};
  quad.newton_refine = false;
  quad.certificate.kind = "eisenstein_shift";
  quad.certificate.shift = 0;
  EtaleFactorSpec lin;
  lin.field = LocalFieldDesc::q2();
  lin.poly = {Rat(-3), Rat(1)};
  lin.root = {Dyadic(Int(3), 0)};
  lin.newton_refine = false;
  lin.certificate.kind = "residue_irreducible";
  return LocalFactorization::verify(fmonic, prime, {quad, lin});
}

}  // namespace

TEST_SUITE_BEGIN("etale");

TEST_CASE("verified single-factor embedding sends theta to -lambda^-2") {
  auto L = quintic_style(5);
  REQUIRE(L.factors().size() == 1);
  const auto& K = L.factors()[0].field;
  auto theta = L.factors()[0].root;
  CHECK(K->equal_to_precision(theta, K->neg(K->lambda_pow(-2))));

  auto ones = L.embed(Poly<LocalElement>::one(L.prime()));
  CHECK(K->equal_to_precision(ones[0], K->one()));
  CHECK(L.classify(ones).is_zero());
}

TEST_CASE("embedding is a ring homomorphism on random rationals") {
  SplitMix64 rng(0xe7a1e711ULL);
  auto L = quintic_style(5);
  RatCtx ctx;
  for (int t = 0; t < 20; ++t) {
    Poly<Rat> x(ctx), y(ctx);
    for (int i = 0; i < 5; ++i) {
      x.c.push_back(Rat(rng.range(-9, 9)));
      y.c.push_back(Rat(rng.range(-9, 9)));
    }
    x.trim();
    y.trim();
    Poly<Rat> fmonic(ctx);
    fmonic.c.assign(6, Rat(0));
    fmonic.c[0] = Rat(1, 4);
    fmonic.c[5] = Rat(1);
    auto ex = L.embed_rat(x);
    auto ey = L.embed_rat(y);
    auto exy = L.embed_rat(rem(x * y, fmonic));
    for (std::size_t j = 0; j < ex.size(); ++j) {
      const auto& K = L.factors()[j].field;
      CHECK(K->sub(K->mul(ex[j], ey[j]), exy[j]).is_apparent_zero());
    }
  }
}

TEST_CASE("verification rejects perturbed factor data") {
  auto prime = LocalField::make(LocalFieldDesc::q2(), 48);
  RatCtx ctx;
  Poly<Rat> fmonic(ctx);
  fmonic.c.assign(6, Rat(0));
  fmonic.c[0] = Rat(1, 4);
  fmonic.c[5] = Rat(1);
  EtaleFactorSpec spec;
  spec.field = LocalFieldDesc::ramified_2root(5);
  spec.poly.assign(6, Rat(0));
  spec.poly[0] = Rat(1, 4);
  spec.poly[1] = Rat(2);  // perturbation: no longer divides f
  spec.poly[5] = Rat(1);
  spec.root.assign(5, Dyadic());
  spec.root[3] = Dyadic(Int(-1), -1);
  spec.newton_refine = false;
  spec.certificate.kind = "hint_only";
  CHECK_THROWS_AS((void)LocalFactorization::verify(fmonic, prime, {spec}), Error);
}

TEST_CASE("descent value of the odd-order point class is trivial") {
  auto L = quintic_style(5);
  auto prime = L.prime();
  // curve poly 4x^5 + 1, a = x: [(0,1) - inf] has odd order 5
  Poly<LocalElement> f(prime);
  f.c.assign(6, prime->zero());
  f.c[0] = prime->one();
  f.c[5] = prime->from_rational(Rat(4));
  auto a = Poly<LocalElement>::x(prime);
  auto repv = descent_rep(a, f);
  // -4*theta = lambda^8, a square
  const auto& K = L.factors()[0].field;
  auto val = L.embed(repv)[0];
  CHECK(K->equal_to_precision(val, K->lambda_pow(8)));
  CHECK(L.class_of_rep(repv).is_zero());
}

TEST_CASE("twisted descent value lands on the stated class") {
  for (int l : {7, 9}) {
    auto L = quintic_style(l);
    auto prime = L.prime();
    const auto& K = L.factors()[0].field;
    Poly<LocalElement> F(prime);  // 20x^l + 5
    F.c.assign(std::size_t(l) + 1, prime->zero());
    F.c[0] = prime->from_rational(Rat(5));
    F.c[std::size_t(l)] = prime->from_rational(Rat(20));
    auto five = K->from_rational(Rat(5));
    auto expect = K->mul(
        five, K->add(K->add(K->one(), K->lambda_pow(2)), K->lambda_pow(l + 2)));
    BitVec want = L.factors()[0].basis->decompose(expect);
    for (long uu : {1, 3, -1}) {
      Poly<LocalElement> a(prime);
      a.c = {prime->from_rational(Rat(-(1 + 2 * uu))), prime->one()};
      auto repv = descent_rep(a, F);
      CHECK(L.class_of_rep(repv) == want);
    }
  }
}

TEST_CASE("square roots modulo f across a split algebra") {
  SplitMix64 rng(0xfaceb00cULL);
  auto L = two_factor_cubic();
  auto prime = L.prime();
  RatCtx ctx;
  Poly<Rat> fr = Poly<Rat>::from_ints(ctx, {6, -2, -3, 1});
  auto f = L.lift_poly(fr);
  for (int t = 0; t < 8; ++t) {
    Poly<LocalElement> s(prime);
    for (int i = 0; i < 3; ++i)
      s.c.push_back(prime->from_rational(Rat(rng.range(-9, 9))));
    s.trim();
    if (s.is_zero()) continue;
    auto sq = rem(s * s, f);
    auto roots = L.sqrts_mod_f(sq);
    REQUIRE(roots.size() == 2);
    bool one_matches = false;
    for (const auto& r : roots) {
      auto back = rem(r * r, f);
      CHECK(poly_equal(back, sq));
      if (poly_equal(r, s) || poly_equal(-r, s)) one_matches = true;
    }
    CHECK(one_matches);
  }
  // a value that is a square in one factor only has no root
  auto five = Poly<LocalElement>::constant(prime, prime->from_rational(Rat(5)));
  // 5 is a square in Q2(sqrt 2)? 5 = 1 + 4 has val(4) = v(lambda^4), not
  // beyond the threshold; decompose decides. Either way the joint answer is
  // consistent with per-factor squareness.
  auto roots5 = L.sqrts_mod_f(five);
  bool sq0 = L.factors()[0].basis->is_square(L.embed(five)[0]);
  bool sq1 = L.factors()[1].basis->is_square(L.embed(five)[1]);
  CHECK((roots5.empty() == !(sq0 && sq1)));
}

TEST_CASE("finite field etale classes and roots") {
  SplitMix64 rng(0x0ddba11ULL);
  for (int q : {3, 7, 11}) {
    auto F = FqCtx::make(q);
    auto f = Poly<FqElem>::from_ints(F, {1, 0, 0, 0, 0, 1});  // x^5 + 1
    if (!is_squarefree(f)) continue;
    FqEtale E(F, f);
    Poly<FqElem> prod = Poly<FqElem>::one(F);
    for (const auto& g : E.factors()) prod = prod * g;
    CHECK(poly_equal(prod, monic(f)));
    for (int t = 0; t < 20; ++t) {
      Poly<FqElem> s(F);
      for (int i = 0; i < 5; ++i)
        s.c.push_back(FieldOps<FqElem>::from_int(F, rng.range(0, q - 1)));
      s.trim();
      if (s.is_zero() || gcd_monic(s, f).deg() != 0) continue;
      auto sq = rem(s * s, f);
      auto roots = E.sqrts_mod_f(sq);
      REQUIRE(roots.size() == (std::size_t(1) << (E.factors().size() - 1)));
      for (const auto& r : roots) CHECK(poly_equal(rem(r * r, f), sq));
      CHECK(E.class_of_rep(sq).is_zero());
      // homomorphism
      Poly<FqElem> s2(F);
      for (int i = 0; i < 5; ++i)
        s2.c.push_back(FieldOps<FqElem>::from_int(F, rng.range(0, q - 1)));
      s2.trim();
      if (s2.is_zero() || gcd_monic(s2, f).deg() != 0) continue;
      CHECK((E.class_of_rep(s) ^ E.class_of_rep(s2)) ==
            E.class_of_rep(rem(s * s2, f)));
    }
  }
}

TEST_SUITE_END();
