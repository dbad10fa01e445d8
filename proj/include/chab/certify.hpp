#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chab/qmap.hpp"

namespace chab {

struct SelmerProvenance {
  std::string tool;
  bool grh = false;
  std::vector<std::string> sigma;
  bool class_number_odd = false;
  bool class_number_grh = false;
  std::string notes;
};

// A subgroup S of L^x/(L^x)^2 containing the image of the 2-Selmer group,
// presented as formal F2-products of small global elements. Global support
// conditions are trusted fixture data; everything 2-adically checkable is
// verified at load.
struct SelmerInput {
  std::vector<Poly<Rat>> base_elements;
  std::vector<std::vector<int>> generators;  // exponent vectors mod 2
  SelmerProvenance provenance;
  std::optional<std::vector<std::vector<int>>> curve_subset;
  // generators of the ambient support lattice (for the completeness rank
  // certificate); exponent vectors over base_elements
  std::optional<std::vector<std::vector<int>>> lattice_generators;
  // expected F2-dimension of the full lattice the generators are claimed to
  // span (0 = no claim); used for the completeness certificate
  long claimed_dim = 0;
};

struct KnownPoint {
  bool infinity = false;
  Rat x = Rat(0), y = Rat(0);
};

struct TorsionPoint {
  Poly<Rat> a, b;
  long order = 1;  // claimed 2-power order
};

struct ProblemOptions {
  Rat twist = Rat(1);
  long depth_cap = 0;
  long refinement_cap = 8;
  bool strict = false;
  long precision_digits = 0;
  bool integral_disks_only = false;
  int threads = 1;
  std::string scope_note;
};

struct OddOrderClaim {
  std::size_t point_index = 0;
  long order = 1;  // odd order of [P - infinity]
};

struct CertificationProblem {
  Poly<Rat> f_input;
  std::optional<GoodReductionWitness> witness;
  std::vector<EtaleFactorSpec> factorization;
  SelmerInput selmer;
  std::vector<TorsionPoint> torsion_2primary;
  std::vector<KnownPoint> known_points;
  std::vector<OddOrderClaim> odd_orders;
  ProblemOptions options;

  Poly<Rat> effective_curve() const;  // twist * f_input
};

struct DiskRecord {
  std::string disk_id;
  std::string part;  // parameter condition, e.g. "t=2 mod 2^2"
  std::string status;  // KNOWN_POINT | NO_RATIONAL_POINT | EXCLUDED_BY_SCOPE
  std::optional<std::size_t> known_point;
  std::vector<std::string> classes;  // mu2 image or the q-set, hex
  std::string method;
  long certified_stratum = -1;
  std::vector<std::string> audit;
};

struct Certificate {
  std::string verdict;  // POINTS_DETERMINED | FAIL
  std::string fail_step, fail_reason;
  std::vector<KnownPoint> points;
  std::vector<DiskRecord> disks;
  std::map<std::string, std::string> environment;
  std::map<std::string, std::string> metadata;
  std::vector<std::string> generator_classes;  // hex, for the verifier
  std::vector<std::string> torsion_classes;
};

Certificate certify_curve(const CertificationProblem& problem);

// Re-verification of a certificate from the problem data: independent F2
// reduction, subset re-checks and partition coverage. Returns diagnostics
// for anything that does not re-verify.
std::vector<std::string> verify_certificate(const CertificationProblem& problem,
                                            const Certificate& cert);

// ---------------------------------------------------------------------------
// Packaged criteria.

struct ZSetResult {
  long l = 0;
  std::vector<BitVec> closed_form;   // canonical order
  std::vector<BitVec> from_pipeline;
  std::string basis_fingerprint;
  LocalPipeline pipeline;  // kept for downstream reuse
};

// The three nontrivial classes of the image of q over C_l: y^2 = 4x^l + 1,
// computed in closed form and independently through the disk pipeline; the
// two routes are asserted equal.
ZSetResult z_set(int l, long digits = 0);

struct ZPrimeResult {
  long l = 0;
  std::vector<BitVec> classes;  // 1+lambda^(2l-1), quotient class, sigma, sigma'
  bool sigma_equal;
  bool conjecture_matches_sigma;
  bool conjecture_matches_sigma_prime;
  std::vector<BitVec> infinity_image;     // q image over the disk at infinity
  std::vector<BitVec> unit_disk_image;    // base infinity, disk at (1,1)
  std::string basis_fingerprint;
};

// The exclusion set for 5y^2 = 4x^l + 1 together with the reported
// sigma/sigma' comparisons.
ZPrimeResult zprime_set(int l, long digits = 0);

struct CriterionResult {
  bool holds = false;
  std::string failed_condition;
  std::map<std::string, std::string> details;
};

CriterionResult flt_criterion(int p, const SelmerInput& fixture, long digits = 0);
CriterionResult gfe_criterion(int p, const SelmerInput& fixture, long digits = 0);

// Helpers shared with the CLI and tests.
LocalPipeline fermat_pipeline(int l, long digits = 0, const Rat& twist = Rat(1));
long default_prime_digits();

}  // namespace chab
