#include "doctest.h"

#include "chab/linalg.hpp"
#include "chab/poly.hpp"

#include "rng.hpp"

using namespace chab;

namespace {

template <class K>
Poly<K> rpoly(SplitMix64& rng, const typename FieldOps<K>::Ctx& ctx, long deg) {
  Poly<K> p(ctx);
  for (long i = 0; i <= deg; ++i)
    p.c.push_back(FieldOps<K>::from_int(ctx, rng.range(-20, 20)));
  p.trim();
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("poly");

TEST_CASE("gcd over F7") {
  auto F = FqCtx::make(7);
  auto a = Poly<FqElem>::from_ints(F, {-1, 0, 1});     // x^2 - 1
  auto b = Poly<FqElem>::from_ints(F, {1, 2, 1});      // x^2 + 2x + 1
  auto g = gcd_monic(a, b);
  CHECK(poly_equal(g, Poly<FqElem>::from_ints(F, {1, 1})));
}

TEST_CASE("divmod of the quintic model by x") {
  RatCtx ctx;
  auto f = Poly<Rat>::from_ints(ctx, {1, 0, 0, 0, 0, 4});  // 4x^5 + 1
  auto a = Poly<Rat>::x(ctx);
  auto [q, r] = divmod(f, a);
  CHECK(poly_equal(q, Poly<Rat>::from_ints(ctx, {0, 0, 0, 0, 4})));
  CHECK(poly_equal(r, Poly<Rat>::one(ctx)));
}

TEST_CASE("extended gcd bezout identity") {
  SplitMix64 rng(0x9e11aaULL);
  auto F = FqCtx::make(11);
  for (int t = 0; t < 40; ++t) {
    auto a = rpoly<FqElem>(rng, F, rng.range(1, 5));
    auto b = rpoly<FqElem>(rng, F, rng.range(1, 5));
    if (a.is_zero() || b.is_zero()) continue;
    auto [g, s, tt] = ext_gcd(a, b);
    CHECK(poly_equal(s * a + tt * b, g));
  }
}

TEST_CASE("resultant matches product over roots") {
  RatCtx ctx;
  // res(x^2-1, x-3) = (3-1)(3+1) up to sign convention: prod g(alpha) over
  // roots alpha of a, a monic: g(1)*g(-1) = (1-3)(-1-3) = 8.
  auto a = Poly<Rat>::from_ints(ctx, {-1, 0, 1});
  auto g = Poly<Rat>::from_ints(ctx, {-3, 1});
  CHECK(resultant(a, g) == Rat(8));
  // norm-style check: res(x^5-2, x-1) = prod (alpha - 1) = (-1)^5 m(1) = 1,
  // i.e. lambda - 1 is a unit in Z[2^(1/5)].
  auto m = Poly<Rat>::from_ints(ctx, {-2, 0, 0, 0, 0, 1});
  auto u = Poly<Rat>::from_ints(ctx, {-1, 1});
  CHECK(resultant(m, u) == Rat(1));
}

TEST_CASE("crt over F7") {
  auto F = FqCtx::make(7);
  auto m1 = Poly<FqElem>::from_ints(F, {1, 1});        // x+1
  auto m2 = Poly<FqElem>::from_ints(F, {3, 1});        // x+3
  auto m3 = Poly<FqElem>::from_ints(F, {1, 0, 1});     // x^2+1
  auto target = Poly<FqElem>::from_ints(F, {2, 5, 1, 3});
  std::vector<std::pair<Poly<FqElem>, Poly<FqElem>>> sys = {
      {rem(target, m1), m1}, {rem(target, m2), m2}, {rem(target, m3), m3}};
  auto r = crt(sys);
  CHECK(poly_equal(rem(r - target, m1 * m2 * m3), Poly<FqElem>::zero(F)));
}

TEST_CASE("squarefree split") {
  auto F = FqCtx::make(5);
  auto p1 = Poly<FqElem>::from_ints(F, {1, 1});
  auto p2 = Poly<FqElem>::from_ints(F, {2, 1});
  auto p3 = Poly<FqElem>::from_ints(F, {3, 1});
  auto a = p1 * p1 * p2 * p3 * p3 * p3;  // (x+1)^2 (x+2) (x+3)^3
  auto [a0, asf] = squarefree_split(a);
  CHECK(poly_equal(a0, p1 * p3));
  CHECK(poly_equal(asf, p2 * p3));
  CHECK(is_squarefree(asf));
}

TEST_CASE("polynomial arithmetic over a local field with exact cancellation") {
  auto F = LocalField::make(LocalFieldDesc::ramified_2root(5));
  auto x = Poly<LocalElement>::x(F);
  auto one = Poly<LocalElement>::one(F);
  auto a = (x + one) * (x - one);
  auto b = (x + one) * (x + one);
  auto g = gcd_monic(a, b);
  CHECK(g.deg() == 1);
  CHECK(FieldOps<LocalElement>::eq(g.coeff(0), F->one()));
}

TEST_CASE("linear solve over F13 agrees with substitution") {
  SplitMix64 rng(0x50135013ULL);
  auto F = FqCtx::make(13);
  for (int t = 0; t < 30; ++t) {
    std::size_t n = 1 + rng.below(5);
    Matrix<FqElem> A(n, n, FieldOps<FqElem>::zero(F));
    std::vector<FqElem> xs, b;
    for (std::size_t i = 0; i < n; ++i)
      xs.push_back(FieldOps<FqElem>::from_int(F, rng.range(0, 12)));
    for (std::size_t i = 0; i < n; ++i) {
      FqElem acc = FieldOps<FqElem>::zero(F);
      for (std::size_t j = 0; j < n; ++j) {
        A.at(i, j) = FieldOps<FqElem>::from_int(F, rng.range(0, 12));
        acc = acc + A.at(i, j) * xs[j];
      }
      b.push_back(acc);
    }
    auto sol = solve_linear(A, b, F);
    REQUIRE(sol.has_value());
    for (std::size_t i = 0; i < n; ++i) {
      FqElem acc = FieldOps<FqElem>::zero(F);
      for (std::size_t j = 0; j < n; ++j) acc = acc + A.at(i, j) * (*sol)[j];
      CHECK(acc == b[i]);
    }
  }
}

TEST_CASE("linear solve detects inconsistency") {
  auto F = FqCtx::make(7);
  Matrix<FqElem> A(2, 2, FieldOps<FqElem>::zero(F));
  A.at(0, 0) = FieldOps<FqElem>::from_int(F, 1);
  A.at(0, 1) = FieldOps<FqElem>::from_int(F, 2);
  A.at(1, 0) = FieldOps<FqElem>::from_int(F, 2);
  A.at(1, 1) = FieldOps<FqElem>::from_int(F, 4);
  std::vector<FqElem> b = {FieldOps<FqElem>::from_int(F, 1),
                           FieldOps<FqElem>::from_int(F, 3)};
  CHECK_FALSE(solve_linear(A, b, F).has_value());
}

TEST_CASE("valuation-aware solve over the local field") {
  auto F = LocalField::make(LocalFieldDesc::q2(), 40);
  // x + 2y = 1, 2x + 2y = 6 -> x = 5, y = -2
  Matrix<LocalElement> A(2, 2, F->zero());
  A.at(0, 0) = F->one();
  A.at(0, 1) = F->from_rational(Rat(2));
  A.at(1, 0) = F->from_rational(Rat(2));
  A.at(1, 1) = F->from_rational(Rat(2));
  std::vector<LocalElement> b = {F->one(), F->from_rational(Rat(6))};
  auto sol = solve_linear(A, b, LocalFieldPtr(F));
  REQUIRE(sol.has_value());
  CHECK(F->equal_to_precision((*sol)[0], F->from_rational(Rat(5))));
  CHECK(F->equal_to_precision((*sol)[1], F->from_rational(Rat(-2))));
}

TEST_SUITE_END();
