#include "doctest.h"

#include "chab/mumford.hpp"
#include "chab/oracle.hpp"

#include "rng.hpp"

using namespace chab;

TEST_SUITE_BEGIN("mumford");

TEST_CASE("group table closure, inverses and Lagrange") {
  for (int q : {3, 5, 7}) {
    auto F = FqCtx::make(q);
    auto f = Poly<FqElem>::from_ints(F, {1, 0, 0, 0, 0, 1});  // x^5 + 1, genus 2
    if (!is_squarefree(f)) continue;
    auto C = make_curve(f);
    GroupTable T(C);
    CHECK(T.order() >= 1);
    std::size_t zero = T.index_of(jac_zero(C));
    SplitMix64 rng(0xc0ffee00ULL + std::uint64_t(q));
    for (int t = 0; t < 40; ++t) {
      std::size_t i = rng.below(T.order());
      std::size_t j = rng.below(T.order());
      std::size_t k = rng.below(T.order());
      CHECK(T.add(T.add(i, j), k) == T.add(i, T.add(j, k)));
      CHECK(T.add(i, T.neg(i)) == zero);
      CHECK(T.add(i, j) == T.add(j, i));
    }
    // |J| kills every element
    for (std::size_t i = 0; i < T.order(); ++i) {
      std::size_t acc = zero;
      for (std::size_t n = 0; n < T.order(); ++n) acc = T.add(acc, i);
      CHECK(acc == zero);
    }
  }
}

TEST_CASE("the fermat-style curve has an odd-order point at x = 0") {
  RatCtx ctx;
  for (int l : {5, 7}) {
    Poly<Rat> f(ctx);
    f.c.assign(std::size_t(l) + 1, Rat(0));
    f.c[0] = Rat(1);
    f.c[std::size_t(l)] = Rat(4);
    auto C = make_curve(f);
    auto P = embed_point(C, CurvePoint<Rat>::affine(Rat(0), Rat(1)),
                         CurvePoint<Rat>::infinity());
    CHECK(poly_equal(P.a, Poly<Rat>::x(ctx)));
    CHECK(poly_equal(P.b, Poly<Rat>::one(ctx)));
    CHECK(jac_mul(C, P, l).is_zero());
    for (int n = 1; n < l; ++n) CHECK_FALSE(jac_mul(C, P, n).is_zero());
  }
}

TEST_CASE("embedding identities") {
  auto F = FqCtx::make(11);
  auto f = Poly<FqElem>::from_ints(F, {3, 1, 0, 0, 0, 1});  // x^5 + x + 3
  auto C = make_curve(f);
  // find two affine points
  std::vector<CurvePoint<FqElem>> pts;
  for (int x = 0; x < 11 && pts.size() < 3; ++x) {
    FqElem xv{F, std::uint16_t(x)};
    FqElem rhs = eval(f, xv);
    if (F->is_square(rhs.v)) {
      pts.push_back(CurvePoint<FqElem>::affine(xv, FqElem{F, F->sqrt(rhs.v)}));
    }
  }
  REQUIRE(pts.size() >= 2);
  auto inf = CurvePoint<FqElem>::infinity();
  CHECK(embed_point(C, pts[0], pts[0]).is_zero());
  // base-change difference is constant in P
  auto d0 = jac_add(C, embed_point(C, pts[0], pts[0]),
                    jac_neg(C, embed_point(C, pts[0], pts[1])));
  auto d1 = jac_add(C, embed_point(C, pts[1], pts[0]),
                    jac_neg(C, embed_point(C, pts[1], pts[1])));
  auto d2 = jac_add(C, embed_point(C, inf, pts[0]),
                    jac_neg(C, embed_point(C, inf, pts[1])));
  CHECK(jac_equal(d0, d1));
  CHECK(jac_equal(d0, d2));
}

TEST_CASE("descent map vanishes exactly on 2J, exhaustively") {
  auto F = FqCtx::make(7);
  auto f = Poly<FqElem>::from_ints(F, {1, 0, 0, 0, 0, 1});
  auto C = make_curve(f);
  GroupTable T(C);
  std::set<std::size_t> doubles;
  for (std::size_t i = 0; i < T.order(); ++i) doubles.insert(T.dbl(i));
  for (std::size_t i = 0; i < T.order(); ++i) {
    bool in2J = doubles.count(i) > 0;
    CHECK(T.mu_class(i).is_zero() == in2J);
  }
  // homomorphism on all pairs of a subsample
  SplitMix64 rng(0x5113ULL);
  for (int t = 0; t < 60; ++t) {
    std::size_t i = rng.below(T.order()), j = rng.below(T.order());
    CHECK((T.mu_class(i) ^ T.mu_class(j)) == T.mu_class(T.add(i, j)));
  }
}

TEST_CASE("rerepresentation preserves the class and bounds degrees") {
  auto F9 = FqCtx::make(3, 2);
  auto f = Poly<FqElem>::from_ints(F9, {1, 2, 0, 0, 0, 1});  // over F9
  if (!is_squarefree(f)) return;
  auto C = make_curve(f);
  GroupTable T(C);
  SplitMix64 rng(0x9999ULL);
  int tested = 0;
  for (int t = 0; t < 200 && tested < 25; ++t) {
    std::size_t i = rng.below(T.order());
    const auto& P = T.elements()[i];
    if (P.is_zero()) continue;
    std::vector<FqElem> shifts;
    for (int v = 0; v < F9->q(); ++v) shifts.push_back(FqElem{F9, std::uint16_t(v)});
    auto Q = rerepresent(C, P, shifts);
    ++tested;
    CHECK(gcd_monic(Q.a, C.f).deg() == 0);
    CHECK(is_squarefree(Q.a));
    if (P.a.deg() == C.genus) CHECK(Q.a.deg() <= C.genus + 1);
    // same class: reduce Q to canonical form via adding zero
    auto Qred = jac_add(C, Q, jac_zero(C));
    CHECK(jac_equal(Qred, P));
  }
  CHECK(tested >= 25);
}

TEST_CASE("h = 0 flip gives the cofactor representation") {
  auto F = FqCtx::make(5);
  auto f = Poly<FqElem>::from_ints(F, {2, 1, 0, 1});  // cubic: genus 1
  auto C = make_curve(f);
  GroupTable T(C);
  for (std::size_t i = 0; i < T.order(); ++i) {
    const auto& P = T.elements()[i];
    if (P.is_zero()) continue;
    Poly<FqElem> cfac = divexact(C.f - P.b * P.b, P.a);
    MumfordPoint<FqElem> flip{monic(cfac), rem(-P.b, monic(cfac))};
    CHECK(mumford_valid(C, flip));
    auto red = jac_add(C, flip, jac_zero(C));
    CHECK(jac_equal(red, P));
  }
}

TEST_SUITE_END();
