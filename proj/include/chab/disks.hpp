#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chab/etale.hpp"
#include "chab/mumford.hpp"

namespace chab {

// Integral model data: f = h^2 + 4k with h, k integer polynomials. The
// reduction Y^2 + h Y = k mod 2 must be smooth; its F2-points index the
// residue disks of C(Q2).
struct GoodReductionWitness {
  Poly<Rat> h, k;
};

struct ReducedModelInfo {
  std::uint64_t hbar = 0, kbar = 0;
  long genus = 0;
  std::vector<Int> point_counts;  // over F_2, F_4, ..., F_{2^g}
  Int jacobian_order_f2 = 0;      // L(1)
  bool two_torsion_trivial_f2 = false;
};

// Validates the witness against F and computes the special-fiber data.
ReducedModelInfo analyze_witness(const Poly<Rat>& F, const GoodReductionWitness& W);

struct DiskDescriptor {
  enum class Kind { kAffineOrdinary, kAffineWeierstrass, kInfinity };
  Kind kind = Kind::kInfinity;
  std::string id;
  bool odd_symmetric = false;
  long depth = 1;  // parameters range over 2^depth Z2
  Rat x0 = Rat(0);
  int ytag = 1;  // affine: y == ytag (mod 4)
  long u = 1;    // infinity: x = u / t^2
};

std::vector<DiskDescriptor> enumerate_disks(const Poly<Rat>& F,
                                            const ReducedModelInfo& info);

// Bundle of the 2-adic instantiation of one certification problem: the curve
// over Q2, the verified etale data, and the residue-disk structure.
struct LocalPipeline {
  LocalFieldPtr prime;
  std::shared_ptr<SquareClassBasis> prime_basis;
  Poly<Rat> curve_rat;
  Curve<LocalElement> curve;
  std::shared_ptr<LocalFactorization> fac;
  std::optional<GoodReductionWitness> witness;
  ReducedModelInfo model;
  std::vector<DiskDescriptor> disks;
  std::vector<LocalElement> infinity_w0;  // per disk; identity for affine
  long torsion_level = 0;                 // smallest n with J(Q2)[2^inf] in J[2^n]
  bool hypdisk_ok = false;
  long depth_cap = 0;

  static LocalPipeline make(const Poly<Rat>& F,
                            std::shared_ptr<LocalFactorization> fac,
                            std::optional<GoodReductionWitness> W,
                            long depth_cap = 0,
                            std::optional<long> torsion_level_hint = std::nullopt);

  const DiskDescriptor& disk_by_id(const std::string& id) const;

  // Point of a disk at an exact dyadic parameter.
  CurvePoint<LocalElement> disk_point(std::size_t disk_index, const Rat& t) const;
  // 2-adic parameter of a rational point lying in the disk.
  LocalElement rational_point_parameter(std::size_t disk_index, const Rat& x,
                                        const Rat& y) const;
  // Disk membership of a rational point (infinity handled by the caller).
  bool rational_point_in_disk(std::size_t disk_index, const Rat& x, const Rat& y) const;

  BitVec mu_class(const MumfordPoint<LocalElement>& P) const {
    return fac->class_of_rep(point_descent_rep(curve, P));
  }
  std::size_t class_dim() const { return fac->class_dim(); }
};

// y mod 4 of a 2-adic unit (mantissa of the constant coordinate).
int unit_mod4(const LocalElement& y);
int rational_mod4(const Rat& y);

}  // namespace chab
