#include "doctest.h"

#include "chab/local_field.hpp"

#include "rng.hpp"

using namespace chab;

namespace {

LocalElement random_element(SplitMix64& rng, const LocalFieldPtr& F) {
  std::vector<Dyadic> c(F->degree());
  for (auto& d : c) {
    long m = rng.range(-9, 9);
    long e = rng.range(0, 3);
    d = Dyadic(Int(m), e);
  }
  return F->from_coords(std::move(c));
}

}  // namespace

TEST_SUITE_BEGIN("fields");

TEST_CASE("uniformizer arithmetic in a totally ramified quintic field") {
  auto F = LocalField::make(LocalFieldDesc::ramified_2root(5));
  auto lam = F->uniformizer();
  // 2*lambda = lambda^6 since 2 = lambda^5.
  auto s = F->add(lam, lam);
  CHECK(s.val() == 6);
  CHECK(F->equal_to_precision(s, F->lambda_pow(6)));

  // theta = -lambda^{-2}; theta^2 = lambda^{-4}.
  auto theta = F->neg(F->lambda_pow(-2));
  auto t2 = F->mul(theta, theta);
  CHECK(t2.val() == -4);
  CHECK(F->equal_to_precision(t2, F->lambda_pow(-4)));

  // v(4*theta) = 2*5 - 2 = 8.
  auto x = F->mul(F->from_rational(Rat(4)), theta);
  CHECK(x.val() == 8);
}

TEST_CASE("geometric series inverse at stated precision") {
  auto F = LocalField::make(LocalFieldDesc::ramified_2root(5), 20);
  auto one_plus = F->add(F->one(), F->uniformizer());
  auto inv = F->inverse(one_plus);
  CHECK(inv.precision() >= 20);
  auto prod = F->mul(one_plus, inv);
  CHECK(F->sub(prod, F->one(20)).is_apparent_zero());
  // 1 - lambda + lambda^2 - ... : check the first digits.
  auto series = F->one(20);
  LocalElement term = F->one(20);
  for (int k = 1; k <= 21; ++k) {
    term = F->mul(term, F->neg(F->uniformizer()));
    series = F->add(series, term);
  }
  CHECK(F->equal_to_precision(inv, series));
}

TEST_CASE("valuation normalization v(2) = e") {
  auto F7 = LocalField::make(LocalFieldDesc::ramified_2root(7));
  CHECK(F7->from_rational(Rat(2)).val() == 7);
  CHECK(F7->add(F7->one(), F7->uniformizer()).val() == 0);
  auto Fq2 = LocalField::make(LocalFieldDesc::q2());
  CHECK(Fq2->from_rational(Rat(2)).val() == 1);
  CHECK(Fq2->from_rational(Rat(12, 5)).val() == 2);
}

TEST_CASE("apparent zero poisons valuation") {
  auto F = LocalField::make(LocalFieldDesc::q2(), 10);
  auto z = F->sub(F->one(), F->one());
  CHECK(z.is_apparent_zero());
  CHECK_THROWS_AS((void)z.val(), Error);
  CHECK_THROWS_AS((void)F->inverse(z), Error);
}

TEST_CASE("ultrametric inequality with equality on distinct valuations") {
  SplitMix64 rng(0x5eedf1e1d5ULL);
  for (auto desc : {LocalFieldDesc::q2(), LocalFieldDesc::ramified_2root(3),
                    LocalFieldDesc::ramified_2root(5)}) {
    auto F = LocalField::make(desc);
    for (int t = 0; t < 60; ++t) {
      auto a = random_element(rng, F);
      auto b = random_element(rng, F);
      if (a.is_apparent_zero() || b.is_apparent_zero()) continue;
      auto s = F->add(a, b);
      if (s.is_apparent_zero()) continue;
      long va = a.val(), vb = b.val();
      CHECK(s.val() >= std::min(va, vb));
      if (va != vb) CHECK(s.val() == std::min(va, vb));
    }
  }
}

TEST_CASE("ring axioms hold modulo the reported precision") {
  SplitMix64 rng(0xabcdef12ULL);
  LocalFieldDesc gauss;  // Q2(i): z^2 + 2z + 2
  gauss.residue_degree = 1;
  gauss.eisenstein = {{Int(2)}, {Int(2)}, {Int(1)}};
  LocalFieldDesc unram;  // residue degree 2 over a ramified quadratic
  unram.residue_degree = 2;
  unram.eisenstein = {{Int(-2)}, {Int(0)}, {Int(1)}};
  for (auto desc : {LocalFieldDesc::ramified_2root(5), gauss, unram}) {
    auto F = LocalField::make(desc);
    for (int t = 0; t < 40; ++t) {
      auto a = random_element(rng, F);
      auto b = random_element(rng, F);
      auto c = random_element(rng, F);
      auto lhs = F->mul(F->add(a, b), c);
      auto rhs = F->add(F->mul(a, c), F->mul(b, c));
      CHECK(F->sub(lhs, rhs).is_apparent_zero());
      CHECK(F->sub(F->mul(a, b), F->mul(b, a)).is_apparent_zero());
    }
  }
}

TEST_CASE("division round trip and precision accounting") {
  SplitMix64 rng(0x77aa88bb11ULL);
  auto F = LocalField::make(LocalFieldDesc::ramified_2root(7));
  for (int t = 0; t < 40; ++t) {
    auto a = random_element(rng, F);
    auto b = random_element(rng, F);
    if (b.is_apparent_zero()) continue;
    auto q = F->div(a, b);
    CHECK(q.precision() <= F->default_precision());
    auto back = F->mul(q, b);
    CHECK(F->sub(back, a.with_precision(back.precision())).is_apparent_zero());
  }
}

TEST_CASE("precision monotonicity of products") {
  auto F = LocalField::make(LocalFieldDesc::ramified_2root(5), 30);
  auto a = F->lambda_pow(4);     // val 4
  auto b = F->from_rational(Rat(3));
  auto p = F->mul(a, b);
  CHECK(p.precision() <= 30 + 4);
  CHECK(p.val() == 4);
  auto inv = F->inverse(a);
  CHECK(inv.precision() == 30 - 8);
}

TEST_CASE("eisenstein validation rejects bad descriptors") {
  LocalFieldDesc bad;
  bad.residue_degree = 1;
  bad.eisenstein = {{Int(-3)}, {Int(1)}};  // constant term odd
  CHECK_THROWS_AS((void)LocalField::make(bad), Error);
  LocalFieldDesc bad2;
  bad2.residue_degree = 1;
  bad2.eisenstein = {{Int(-4)}, {Int(1)}};  // constant term 4, not 2*unit
  CHECK_THROWS_AS((void)LocalField::make(bad2), Error);
  LocalFieldDesc bad3;
  bad3.residue_degree = 1;
  bad3.eisenstein = {{Int(-2)}, {Int(1)}, {Int(2)}};  // not monic
  CHECK_THROWS_AS((void)LocalField::make(bad3), Error);
}

TEST_SUITE_END();
