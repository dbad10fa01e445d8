#include "doctest.h"

#include "chab/squareclass.hpp"

#include "rng.hpp"

using namespace chab;

namespace {

LocalElement random_unitish(SplitMix64& rng, const LocalFieldPtr& F) {
  std::vector<Dyadic> c(F->degree());
  for (auto& d : c) d = Dyadic(Int(rng.range(-7, 7)), rng.range(0, 2));
  c[0] = c[0] + Dyadic(Int(2 * rng.range(0, 3) + 1), 0);
  return F->from_coords(std::move(c));
}

}  // namespace

TEST_SUITE_BEGIN("squareclass");

TEST_CASE("canonical basis of Q2 is {2, 3, 5}") {
  auto F = LocalField::make(LocalFieldDesc::q2());
  SquareClassBasis B(F);
  REQUIRE(B.dim() == 3);
  CHECK(F->equal_to_precision(B.representatives()[0], F->from_rational(Rat(2))));
  CHECK(F->equal_to_precision(B.representatives()[1], F->from_rational(Rat(3))));
  CHECK(F->equal_to_precision(B.representatives()[2], F->from_rational(Rat(5))));
}

TEST_CASE("basis of the ramified quintic matches the filtration list") {
  auto F = LocalField::make(LocalFieldDesc::ramified_2root(5));
  SquareClassBasis B(F);
  REQUIRE(B.dim() == 7);
  const auto& r = B.representatives();
  CHECK(F->equal_to_precision(r[0], F->uniformizer()));
  long levels[] = {1, 3, 5, 7, 9};
  for (int i = 0; i < 5; ++i)
    CHECK(F->equal_to_precision(r[i + 1], F->one_plus(1, levels[i])));
  CHECK(F->equal_to_precision(r[6], F->one_plus(1, 10)));
}

TEST_CASE("dimension formula n+2 across descriptors") {
  std::vector<LocalFieldDesc> descs;
  descs.push_back(LocalFieldDesc::q2());
  for (int e : {2, 3, 4, 5, 6, 7, 9, 11, 13, 21, 25})
    descs.push_back(LocalFieldDesc::ramified_2root(e));
  LocalFieldDesc gauss;
  gauss.residue_degree = 1;
  gauss.eisenstein = {{Int(2)}, {Int(2)}, {Int(1)}};
  descs.push_back(gauss);
  LocalFieldDesc mixed;  // e=3 over residue degree 2
  mixed.residue_degree = 2;
  mixed.eisenstein = {{Int(-2)}, {Int(0)}, {Int(2)}, {Int(1)}};
  descs.push_back(mixed);
  for (int f : {2, 3, 4}) {
    LocalFieldDesc d;
    d.residue_degree = f;
    d.eisenstein = {{Int(-2)}, {Int(1)}};
    descs.push_back(d);
    LocalFieldDesc d2;
    d2.residue_degree = f;
    d2.eisenstein = {{Int(2), Int(2)}, {Int(0)}, {Int(1)}};
    descs.push_back(d2);
  }
  for (const auto& d : descs) {
    auto F = LocalField::make(d);
    SquareClassBasis B(F);
    CHECK(B.dim() == std::size_t(F->degree()) + 2);
  }
}

TEST_CASE("2-adic squares and non-squares") {
  auto F = LocalField::make(LocalFieldDesc::q2());
  SquareClassBasis B(F);
  CHECK(B.decompose(F->from_rational(Rat(17))).is_zero());
  CHECK_FALSE(B.decompose(F->from_rational(Rat(5))).is_zero());
  CHECK_FALSE(B.sqrt(F->from_rational(Rat(5))).has_value());

  auto r = B.sqrt(F->from_rational(Rat(9)));
  REQUIRE(r.has_value());
  bool plus = F->equal_to_precision(*r, F->from_rational(Rat(3)));
  bool minus = F->equal_to_precision(*r, F->from_rational(Rat(-3)));
  CHECK((plus || minus));
}

TEST_CASE("filtration reduction of (2u)^-2 + lambda^-2 lands on level 2l-1") {
  auto F = LocalField::make(LocalFieldDesc::ramified_2root(5));
  SquareClassBasis B(F);
  for (long uval : {1, 3, -5, 7}) {
    auto u = F->from_rational(Rat(uval));
    auto x = F->add(F->inverse(F->mul_dyadic(F->mul(u, u), Dyadic(4))),
                    F->lambda_pow(-2));
    BitVec cls = B.decompose(x);
    BitVec want(B.dim());
    want.set(B.index_level(9, 0), true);  // 1 + lambda^(2l-1)
    CHECK(cls == want);
  }
}

TEST_CASE("tail units beyond level 2e are squares") {
  auto F = LocalField::make(LocalFieldDesc::ramified_2root(5));
  SquareClassBasis B(F);
  // 1 + 4*lambda has valuation 2l+1 in the tail and must be a square.
  auto x = F->add(F->one(), F->mul_dyadic(F->uniformizer(), Dyadic(4)));
  auto r = B.sqrt(x);
  REQUIRE(r.has_value());
  auto back = F->mul(*r, *r);
  CHECK(F->sub(back, x.with_precision(back.precision())).is_apparent_zero());
}

TEST_CASE("decomposition is a homomorphism and kills squares") {
  SplitMix64 rng(0x1234777ULL);
  for (auto desc : {LocalFieldDesc::q2(), LocalFieldDesc::ramified_2root(5),
                    LocalFieldDesc::ramified_2root(7)}) {
    auto F = LocalField::make(desc);
    SquareClassBasis B(F);
    for (int t = 0; t < 50; ++t) {
      auto a = random_unitish(rng, F);
      auto b = random_unitish(rng, F);
      auto ab = F->mul(a, b);
      CHECK((B.decompose(a) ^ B.decompose(b)) == B.decompose(ab));
      CHECK(B.decompose(F->mul(a, a)).is_zero());
    }
  }
}

TEST_CASE("sqrt round trip within the documented precision budget") {
  SplitMix64 rng(0x983211ULL);
  auto F = LocalField::make(LocalFieldDesc::ramified_2root(7));
  SquareClassBasis B(F);
  int found = 0;
  for (int t = 0; t < 60 && found < 20; ++t) {
    auto a = random_unitish(rng, F);
    auto x = F->mul(a, a);
    auto r = B.sqrt(x);
    REQUIRE(r.has_value());
    ++found;
    auto back = F->mul(*r, *r);
    long budget = 2 * F->e() + 1;
    CHECK(back.precision() >= x.precision() - budget);
    CHECK(F->sub(back, x.with_precision(back.precision())).is_apparent_zero());
  }
  CHECK(found >= 20);
}

TEST_CASE("fingerprints are stable and distinguish fields") {
  auto F5 = LocalField::make(LocalFieldDesc::ramified_2root(5));
  auto F7 = LocalField::make(LocalFieldDesc::ramified_2root(7));
  SquareClassBasis B5a(F5), B5b(F5), B7(F7);
  CHECK(B5a.fingerprint() == B5b.fingerprint());
  CHECK(B5a.fingerprint() != B7.fingerprint());
}

TEST_SUITE_END();
