#pragma once

#include <string>

#include "chab/certify.hpp"

namespace chab {

// JSON document formats. All numbers are exact strings: rationals as "p/q",
// dyadic coordinates as [mantissa, exponent] string/int pairs. Documents are
// serialized with sorted keys, so equal inputs produce identical bytes.

CertificationProblem problem_from_json_text(const std::string& text);
CertificationProblem load_problem(const std::string& path);
std::string problem_to_json_text(const CertificationProblem& problem);

std::string certificate_to_json_text(const Certificate& cert,
                                     const std::string& problem_fingerprint);
std::string problem_fingerprint(const CertificationProblem& problem);

struct SelmerFixture {
  int p = 0;
  std::string kind;  // "flt" or "gfe"
  SelmerInput selmer;
};

SelmerFixture selmer_fixture_from_json_text(const std::string& text);
SelmerFixture load_selmer_fixture(const std::string& path);

// Compute documents: a curve plus factorization and one Mumford point, used
// by the direct sub-computation commands.
struct ComputeDoc {
  Poly<Rat> f_input;
  std::optional<GoodReductionWitness> witness;
  std::vector<EtaleFactorSpec> factorization;
  Rat twist = Rat(1);
  Rat twist_multiplier = Rat(1);  // optional extra multiplier for mu
  long precision_digits = 0;
  Poly<Rat> point_a, point_b;
};

ComputeDoc compute_doc_from_json_text(const std::string& text);
ComputeDoc load_compute_doc(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace chab
