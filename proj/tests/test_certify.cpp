#include "doctest.h"

#include "chab/certify.hpp"

using namespace chab;

namespace {

// Problem skeleton for y^2 = 4 x^l + 1 with the standard single-factor
// presentation; the selmer input starts empty and tests fill it in.
CertificationProblem fermat_problem(int l) {
  CertificationProblem prob;
  RatCtx ctx;
  prob.f_input = Poly<Rat>(ctx);
  prob.f_input.c.assign(std::size_t(l) + 1, Rat(0));
  prob.f_input.c[0] = Rat(1);
  prob.f_input.c[std::size_t(l)] = Rat(4);
  GoodReductionWitness W;
  W.h = Poly<Rat>::one(ctx);
  W.k = Poly<Rat>(ctx);
  W.k.c.assign(std::size_t(l) + 1, Rat(0));
  W.k.c[std::size_t(l)] = Rat(1);
  W.k.trim();
  prob.witness = W;
  EtaleFactorSpec spec;
  spec.field = LocalFieldDesc::ramified_2root(l);
  spec.poly.assign(std::size_t(l) + 1, Rat(0));
  spec.poly[0] = Rat(1, 4);
  spec.poly[std::size_t(l)] = Rat(1);
  spec.root.assign(std::size_t(l), Dyadic());
  spec.root[std::size_t(l) - 2] = Dyadic(Int(-1), -1);
  spec.newton_refine = false;
  spec.certificate.kind = "newton_polygon";
  prob.factorization = {spec};
  prob.selmer.provenance.tool = "unit-test";
  prob.known_points.push_back({true, Rat(0), Rat(0)});
  prob.known_points.push_back({false, Rat(0), Rat(1)});
  prob.known_points.push_back({false, Rat(0), Rat(-1)});
  prob.options.precision_digits = 256;
  return prob;
}

}  // namespace

TEST_SUITE_BEGIN("certify");

TEST_CASE("exclusion sets match the stated closed forms") {
  auto z5 = z_set(5, 224);
  const auto& K = z5.pipeline.fac->factors()[0].field;
  const auto& B = *z5.pipeline.fac->factors()[0].basis;
  std::set<BitVec> expect;
  expect.insert(B.decompose(K->one_plus(1, 7)));
  expect.insert(B.decompose(K->one_plus(1, 9)));
  expect.insert(B.decompose(K->mul(K->one_plus(1, 7), K->one_plus(1, 9))));
  std::set<BitVec> got(z5.closed_form.begin(), z5.closed_form.end());
  CHECK(got == expect);
  CHECK(z5.from_pipeline == z5.closed_form);

  auto z7 = z_set(7, 224);
  const auto& K7 = z7.pipeline.fac->factors()[0].field;
  const auto& B7 = *z7.pipeline.fac->factors()[0].basis;
  std::set<BitVec> expect7;
  expect7.insert(B7.decompose(K7->one_plus(1, 9)));
  expect7.insert(B7.decompose(K7->one_plus(1, 13)));
  expect7.insert(B7.decompose(K7->mul(K7->one_plus(1, 9), K7->one_plus(1, 11))));
  std::set<BitVec> got7(z7.closed_form.begin(), z7.closed_form.end());
  CHECK(got7 == expect7);
}

TEST_CASE("twisted exclusion set and the sigma report") {
  auto zp = zprime_set(7, 256);
  REQUIRE(zp.classes.size() == 4);
  // the first two entries are the stated closed forms
  LocalPipeline pipe = fermat_pipeline(7, 224, Rat(5));
  const auto& K = pipe.fac->factors()[0].field;
  const auto& B = *pipe.fac->factors()[0].basis;
  CHECK(zp.classes[0] == B.decompose(K->one_plus(1, 13)));
  auto quot = K->add(K->one(), K->div(K->lambda_pow(9), K->one_plus(1, 2)));
  CHECK(zp.classes[1] == B.decompose(quot));
  // infinity disk image: {0, 1 + lambda^(2l-1)}
  std::set<BitVec> inf_expect{BitVec(B.dim()), B.decompose(K->one_plus(1, 13))};
  std::set<BitVec> inf_got(zp.infinity_image.begin(), zp.infinity_image.end());
  CHECK(inf_got == inf_expect);
  // image of the (1,1) disk under the infinity-based embedding
  auto five = K->from_rational(Rat(5));
  std::set<BitVec> unit_expect{
      B.decompose(K->mul(five, K->one_plus(1, 2))),
      B.decompose(K->mul(five, K->add(K->one_plus(1, 2), K->lambda_pow(9))))};
  std::set<BitVec> unit_got(zp.unit_disk_image.begin(), zp.unit_disk_image.end());
  CHECK(unit_got == unit_expect);
  // sigma versus sigma' and the binary-valuation product are reported, and
  // on these curves the observed values agree
  CHECK(zp.sigma_equal);
  CHECK(zp.conjecture_matches_sigma);
}

TEST_CASE("certification succeeds when the selmer bound misses the images") {
  auto prob = fermat_problem(5);
  Certificate cert = certify_curve(prob);
  REQUIRE(cert.verdict == "POINTS_DETERMINED");
  CHECK(cert.points.size() == 3);
  CHECK(cert.disks.size() >= 3);
  CHECK(verify_certificate(prob, cert).empty());
}

TEST_CASE("a selmer generator inside the image forces FAIL") {
  auto prob = fermat_problem(5);
  RatCtx ctx;
  // 2 - theta has square class 1 + lambda^(l+2), which lies in the image
  prob.selmer.base_elements.push_back(Poly<Rat>::from_ints(ctx, {2, -1}));
  prob.selmer.generators.push_back({1});
  Certificate cert = certify_curve(prob);
  CHECK(cert.verdict == "FAIL");
  CHECK(cert.fail_step == "image");
  // FAIL is monotone under enlarging the group
  prob.selmer.base_elements.push_back(Poly<Rat>::from_ints(ctx, {3}));
  prob.selmer.generators[0] = {1, 0};
  prob.selmer.generators.push_back({0, 1});
  Certificate cert2 = certify_curve(prob);
  CHECK(cert2.verdict == "FAIL");
}

TEST_CASE("a dependent generator forces FAIL at the injectivity step") {
  auto prob = fermat_problem(5);
  RatCtx ctx;
  prob.selmer.base_elements.push_back(Poly<Rat>::from_ints(ctx, {3}));
  prob.selmer.generators.push_back({1});
  prob.selmer.generators.push_back({1});  // same class twice
  Certificate cert = certify_curve(prob);
  CHECK(cert.verdict == "FAIL");
  CHECK(cert.fail_step == "injectivity");
}

TEST_CASE("an unaccounted rational point forces FAIL on its part") {
  auto prob = fermat_problem(5);
  prob.known_points.resize(1);  // keep only infinity; (0, +-1) unaccounted
  Certificate cert = certify_curve(prob);
  CHECK(cert.verdict == "FAIL");
  CHECK(cert.fail_step == "selmer-set");
}

TEST_CASE("thread count does not change the records") {
  auto prob = fermat_problem(5);
  prob.options.threads = 1;
  Certificate a = certify_curve(prob);
  prob.options.threads = 4;
  Certificate b = certify_curve(prob);
  REQUIRE(a.disks.size() == b.disks.size());
  for (std::size_t i = 0; i < a.disks.size(); ++i) {
    CHECK(a.disks[i].disk_id == b.disks[i].disk_id);
    CHECK(a.disks[i].part == b.disks[i].part);
    CHECK(a.disks[i].classes == b.disks[i].classes);
  }
}

TEST_CASE("wieferich guard") {
  SelmerInput empty;
  empty.provenance.class_number_odd = true;
  auto r = flt_criterion(1093, empty, 64);
  CHECK_FALSE(r.holds);
  CHECK(r.failed_condition == "wieferich");
}

TEST_SUITE_END();
