#include "doctest.h"

#include "chab/halving.hpp"
#include "chab/oracle.hpp"

#include <set>

#include "rng.hpp"

using namespace chab;

namespace {

std::optional<Curve<FqElem>> random_curve(SplitMix64& rng, const FqCtxPtr& F, long genus) {
  for (int tries = 0; tries < 60; ++tries) {
    Poly<FqElem> f(F);
    for (long i = 0; i < 2 * genus + 1; ++i)
      f.c.push_back(FqElem{F, std::uint16_t(rng.below(std::uint64_t(F->q())))});
    f.c.push_back(FqElem{F, 1});
    f.trim();
    if (f.deg() != 2 * genus + 1 || !is_squarefree(f)) continue;
    return make_curve(f);
  }
  return std::nullopt;
}

std::set<std::size_t> half_set(const GroupTable& T, const FqEtale& E,
                               const Curve<FqElem>& C, std::size_t p) {
  std::set<std::size_t> out;
  for (const auto& h : halve_all(C, E, T.elements()[p])) out.insert(T.index_of(h.point));
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("halving");

TEST_CASE("halves agree with the brute-force doubling preimage") {
  SplitMix64 rng(0xd17171deULL);
  int instances = 0;
  for (int q : {3, 5, 7, 9, 11, 13}) {
    auto F = q == 9 ? FqCtx::make(3, 2) : FqCtx::make(q);
    for (long genus : {1L, 2L}) {
      auto C = random_curve(rng, F, genus);
      if (!C) continue;
      GroupTable T(*C);
      FqEtale E(F, C->f);
      for (int t = 0; t < 12; ++t) {
        std::size_t p = rng.below(T.order());
        std::set<std::size_t> brute;
        for (auto h : T.halves(p)) brute.insert(h);
        CHECK(half_set(T, E, *C, p) == brute);
        ++instances;
      }
    }
  }
  CHECK(instances >= 100);
}

TEST_CASE("halves of zero are exactly the two-torsion") {
  SplitMix64 rng(0x2222ULL);
  auto F = FqCtx::make(7);
  // f with three linear factors over F7 gives |J[2]| = 4 on a genus-1 model
  auto f = Poly<FqElem>::from_ints(F, {0, -1, 0, 1});  // x(x-1)(x+1)
  auto C = make_curve(f);
  GroupTable T(C);
  FqEtale E(F, C.f);
  REQUIRE(E.factors().size() == 3);
  auto zero = T.index_of(jac_zero(C));
  auto halves = half_set(T, E, C, zero);
  std::set<std::size_t> torsion;
  for (std::size_t i = 0; i < T.order(); ++i)
    if (T.dbl(i) == zero) torsion.insert(i);
  CHECK(halves == torsion);
  CHECK(halves.size() == 4);  // 2^(3-1) square roots, all distinct
}

TEST_CASE("non-divisible points yield no square root") {
  auto F = FqCtx::make(11);
  auto f = Poly<FqElem>::from_ints(F, {3, 1, 0, 0, 0, 1});
  auto C = make_curve(f);
  GroupTable T(C);
  FqEtale E(F, C.f);
  int seen = 0;
  for (std::size_t i = 0; i < T.order() && seen < 10; ++i) {
    if (!T.mu_class(i).is_zero()) {
      CHECK(halve_all(C, E, T.elements()[i]).empty());
      ++seen;
    }
  }
  CHECK(seen > 0);
}

TEST_CASE("witness degree bounds and relation") {
  SplitMix64 rng(0xabba00ULL);
  auto F = FqCtx::make(13);
  auto C = random_curve(rng, F, 2);
  REQUIRE(C.has_value());
  GroupTable T(*C);
  FqEtale E(F, C->f);
  int checked = 0;
  for (int t = 0; t < 60 && checked < 20; ++t) {
    std::size_t q = rng.below(T.order());
    std::size_t p = T.dbl(q);
    const auto& P = T.elements()[p];
    for (const auto& h : halve_all(*C, E, P)) {
      const auto& w = h.witness;
      CHECK(w.u.deg() * 2 < w.deg_a_total);
      CHECK(w.w.deg() <= C->genus);
      // E:rel, checked externally as well
      FqElem sign = FieldOps<FqElem>::one(F);
      FqElem mc = -C->f.lead();
      for (long i = 0; i < w.deg_a_total; ++i) sign = sign * mc;
      CHECK(poly_equal(w.u * w.u * w.f1, w.d * w.v * w.v - w.a1 * w.w * w.w * sign));
      ++checked;
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("class-only images match the full halving") {
  SplitMix64 rng(0x777123ULL);
  int agreed = 0;
  for (int q : {5, 9, 13}) {
    auto F = q == 9 ? FqCtx::make(3, 2) : FqCtx::make(q);
    auto C = random_curve(rng, F, 2);
    if (!C) continue;
    GroupTable T(*C);
    FqEtale E(F, C->f);
    for (int t = 0; t < 40 && agreed < 100; ++t) {
      std::size_t qq = rng.below(T.order());
      std::size_t p = T.dbl(qq);
      const auto& P = T.elements()[p];
      if (P.is_zero()) continue;
      auto full = halve_all(*C, E, P);
      auto classes = half_class_images(*C, E, P);
      REQUIRE(full.size() == classes.size());
      for (std::size_t i = 0; i < full.size(); ++i) {
        CHECK(T.mu_class(T.index_of(full[i].point)) == classes[i]);
        ++agreed;
      }
    }
  }
  CHECK(agreed >= 60);
}

TEST_CASE("shifted halving by a two-torsion divisor matches the plain route") {
  SplitMix64 rng(0x515151ULL);
  auto F = FqCtx::make(7);
  auto f = Poly<FqElem>::from_ints(F, {0, -1, 0, 0, 0, 1});  // x^5 - x = x(x^2-1)(x^2+1)
  REQUIRE(is_squarefree(f));
  auto C = make_curve(f);
  GroupTable T(C);
  FqEtale E(F, C.f);
  Poly<FqElem> h = Poly<FqElem>::from_ints(F, {0, 1});  // [x, 0] two-torsion
  REQUIRE(rem(C.f, h).is_zero());
  MumfordPoint<FqElem> Tt{h, Poly<FqElem>::zero(F)};
  int done = 0;
  for (int t = 0; t < 200 && done < 12; ++t) {
    std::size_t i = rng.below(T.order());
    const auto& P = T.elements()[i];
    if (P.a.deg() < 1 || gcd_monic(P.a, C.f).deg() != 0 || !is_squarefree(P.a))
      continue;
    if (gcd_monic(P.a, h).deg() != 0) continue;
    auto sum = jac_add(C, P, Tt);
    std::set<std::size_t> brute;
    for (auto hh : T.halves(T.index_of(sum))) brute.insert(hh);
    std::set<std::size_t> mine;
    for (const auto& r : halve_shifted_torsion(C, E, P, h))
      mine.insert(T.index_of(r.point));
    CHECK(mine == brute);
    ++done;
  }
  CHECK(done >= 12);
}

TEST_CASE("shifted halving of a sum of two points matches the plain route") {
  SplitMix64 rng(0x616161ULL);
  auto F = FqCtx::make(11);
  auto f = Poly<FqElem>::from_ints(F, {3, 1, 0, 0, 0, 1});
  auto C = make_curve(f);
  GroupTable T(C);
  FqEtale E(F, C.f);
  int done = 0;
  for (int t = 0; t < 400 && done < 10; ++t) {
    std::size_t i = rng.below(T.order());
    std::size_t j = rng.below(T.order());
    const auto& P = T.elements()[i];
    const auto& Q = T.elements()[j];
    if (P.a.deg() < 1 || Q.a.deg() < 1) continue;
    if (P.a.deg() + Q.a.deg() > 2 * C.genus + 1) continue;
    if (gcd_monic(P.a, Q.a).deg() != 0) continue;
    if (gcd_monic(P.a, C.f).deg() != 0 || gcd_monic(Q.a, C.f).deg() != 0) continue;
    auto sum = jac_add(C, P, Q);
    std::set<std::size_t> brute;
    for (auto hh : T.halves(T.index_of(sum))) brute.insert(hh);
    std::set<std::size_t> mine;
    for (const auto& r : halve_shifted_pair(C, E, P, Q)) mine.insert(T.index_of(r.point));
    CHECK(mine == brute);
    ++done;
  }
  CHECK(done >= 10);
}

TEST_CASE("2-adic halving on the quintic fermat curve hits the product class") {
  // Single-factor algebra Q2(2^(1/5)), curve y^2 = 4x^5 + 1, point with x = 4
  // in the disk around (0,1); its half generates the product class
  // (1+lambda^7)(1+lambda^9).
  auto prime = LocalField::make(LocalFieldDesc::q2(), 64);
  RatCtx rctx;
  Poly<Rat> fmonic(rctx);
  fmonic.c.assign(6, Rat(0));
  fmonic.c[0] = Rat(1, 4);
  fmonic.c[5] = Rat(1);
  EtaleFactorSpec spec;
  spec.field = LocalFieldDesc::ramified_2root(5);
  spec.poly = fmonic.c;
  spec.root.assign(5, Dyadic());
  spec.root[3] = Dyadic(Int(-1), -1);
  spec.newton_refine = false;
  spec.certificate.kind = "newton_polygon";
  auto L = LocalFactorization::verify(fmonic, prime, {spec});

  Poly<LocalElement> f(prime);
  f.c.assign(6, prime->zero());
  f.c[0] = prime->one();
  f.c[5] = prime->from_rational(Rat(4));
  auto C = make_curve(f);
  const auto& K = L.factors()[0].field;
  const auto& B = *L.factors()[0].basis;

  // y^2 = f(4) = 4097, a 2-adic square
  SquareClassBasis Bq2(prime);
  auto y = Bq2.sqrt(prime->from_rational(Rat(4097)));
  REQUIRE(y.has_value());
  auto P = embed_point(C, CurvePoint<LocalElement>::affine(prime->from_rational(Rat(4)), *y),
                       CurvePoint<LocalElement>::infinity());
  CHECK(L.class_of_rep(point_descent_rep(C, P)).is_zero());
  auto halves = halve_all(C, L, P);
  REQUIRE(halves.size() == 1);
  auto cls = L.class_of_rep(point_descent_rep(C, halves[0].point));
  auto expect = B.decompose(
      K->mul(K->one_plus(1, 7), K->one_plus(1, 9)));
  CHECK(cls == expect);
}

TEST_SUITE_END();
