#pragma once

#include <set>
#include <string>
#include <vector>

#include "chab/disks.hpp"
#include "chab/halving.hpp"

namespace chab {

struct QAudit {
  long depth = 0;
  std::string note;
};

// Image of the iterated-halving map: all classes pi(Q) over chains 2^n Q = P
// (or the coset variant), together with the maximal divisibility depth.
struct QResult {
  std::set<BitVec> classes;
  long divisibility = 0;
  long recursion_depth = 0;
  std::vector<QAudit> audit;
};

template <class K, class Etale>
struct QContext {
  const Curve<K>& C;
  const Etale& E;
  long depth_cap;

  QContext(const Curve<K>& c, const Etale& e, long cap = 0)
      : C(c), E(e), depth_cap(cap > 0 ? cap : 4 * c.genus + 16) {}
};

namespace qmap_detail {

template <class K, class Etale>
long q_point_rec(const QContext<K, Etale>& ctx, const MumfordPoint<K>& P,
                 long depth, QResult& out) {
  if (depth > ctx.depth_cap)
    raise(ErrorCode::kDivergenceSuspected,
          "halving recursion exceeded the depth cap; point is torsion-adjacent");
  BitVec cls = ctx.E.class_of_rep(point_descent_rep(ctx.C, P));
  out.classes.insert(cls);
  out.recursion_depth = std::max(out.recursion_depth, depth);
  if (!cls.is_zero()) return 0;
  auto halves = halve_all(ctx.C, ctx.E, P);
  if (halves.empty())
    raise(ErrorCode::kInternalMismatch, "trivial class without halves");
  long nu = 0;
  for (const auto& h : halves)
    nu = std::max(nu, 1 + q_point_rec(ctx, h.point, depth + 1, out));
  return nu;
}

}  // namespace qmap_detail

template <class K, class Etale>
QResult q_point(const QContext<K, Etale>& ctx, const MumfordPoint<K>& P) {
  QResult out;
  out.divisibility = qmap_detail::q_point_rec(ctx, P, 0, out);
  return out;
}

// Finitely generated shift subgroup for the coset variants.
template <class K, class Etale>
class CosetContext {
 public:
  CosetContext(const QContext<K, Etale>& base, std::vector<MumfordPoint<K>> gens,
               bool strict = false, long multiple_bound = 32)
      : base_(base), gens_(std::move(gens)), strict_(strict) {
    const std::size_t k = gens_.size();
    // representatives of Gamma / 2Gamma and their classes
    for (std::size_t mask = 0; mask < (std::size_t(1) << k); ++mask) {
      MumfordPoint<K> T = jac_zero(base_.C);
      for (std::size_t j = 0; j < k; ++j)
        if ((mask >> j) & 1u) T = jac_add(base_.C, T, gens_[j]);
      reps_.push_back(T);
      rep_classes_.push_back(base_.E.class_of_rep(point_descent_rep(base_.C, T)));
    }
    // bounded multiples for the membership test
    long B = k == 0 ? 0 : (k == 1 ? multiple_bound : (k == 2 ? 8 : 3));
    std::vector<long> idx(k, -B);
    if (k > 0) {
      while (true) {
        MumfordPoint<K> T = jac_zero(base_.C);
        for (std::size_t j = 0; j < k; ++j) T = jac_add(base_.C, T, jac_mul(base_.C, gens_[j], idx[j]));
        multiples_.push_back(T);
        std::size_t j = 0;
        for (; j < k; ++j) {
          if (idx[j] < B) {
            ++idx[j];
            break;
          }
          idx[j] = -B;
        }
        if (j == k) break;
      }
    } else {
      multiples_.push_back(jac_zero(base_.C));
    }
    for (std::size_t j = 0; j < k; ++j)
      class_span_.add(rep_classes_[std::size_t(1) << j]);
  }

  const QContext<K, Etale>& base() const { return base_; }
  const std::vector<MumfordPoint<K>>& reps() const { return reps_; }
  const std::vector<BitVec>& rep_classes() const { return rep_classes_; }
  const F2Span& class_span() const { return class_span_; }
  bool strict() const { return strict_; }

  // Decides D in Gamma via the class prefilter and bounded multiples.
  // Undecided cases return false (keep both representatives) unless strict.
  bool in_gamma(const MumfordPoint<K>& D) const {
    BitVec cls = base_.E.class_of_rep(point_descent_rep(base_.C, D));
    if (!class_span_.contains(cls)) return false;
    for (const auto& M : multiples_)
      if (jac_equal(M, D)) return true;
    if (strict_)
      raise(ErrorCode::kDeduplicationUnsound,
            "coset membership undecided within the bounded search");
    return false;
  }

 private:
  QContext<K, Etale> base_;
  std::vector<MumfordPoint<K>> gens_;
  bool strict_;
  std::vector<MumfordPoint<K>> reps_;
  std::vector<BitVec> rep_classes_;
  std::vector<MumfordPoint<K>> multiples_;
  F2Span class_span_{0};
};

namespace qmap_detail {

template <class K, class Etale>
long q_coset_rec(const CosetContext<K, Etale>& ctx, const MumfordPoint<K>& P,
                 long depth, QResult& out) {
  const auto& base = ctx.base();
  if (depth > base.depth_cap)
    raise(ErrorCode::kDivergenceSuspected,
          "coset halving recursion exceeded the depth cap");
  BitVec cls = base.E.class_of_rep(point_descent_rep(base.C, P));
  for (const auto& rc : ctx.rep_classes()) out.classes.insert(cls ^ rc);
  out.recursion_depth = std::max(out.recursion_depth, depth);

  std::vector<MumfordPoint<K>> branch;
  for (std::size_t i = 0; i < ctx.reps().size(); ++i) {
    if (!(cls == ctx.rep_classes()[i])) continue;  // P + T not divisible
    MumfordPoint<K> PT = jac_add(base.C, P, ctx.reps()[i]);
    for (const auto& h : halve_all(base.C, base.E, PT)) {
      bool dup = false;
      for (const auto& kept : branch)
        if (ctx.in_gamma(jac_add(base.C, h.point, jac_neg(base.C, kept)))) {
          dup = true;
          break;
        }
      if (!dup) branch.push_back(h.point);
    }
  }
  long nu = 0;
  for (const auto& Q : branch)
    nu = std::max(nu, 1 + q_coset_rec(ctx, Q, depth + 1, out));
  return nu;
}

}  // namespace qmap_detail

template <class K, class Etale>
QResult q_coset(const CosetContext<K, Etale>& ctx, const MumfordPoint<K>& P) {
  QResult out;
  out.divisibility = qmap_detail::q_coset_rec(ctx, P, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Disk images over Q2.

struct QDiskOptions {
  bool strict = false;
  long stratum_cap = 24;
  long sample_cap = 1 << 12;
  long min_depth = 1;
  // parameter shift: the effective parameterization is t -> phi(shift + t),
  // used to recenter sub-disks at a known point
  Rat param_shift = Rat(0);
  std::vector<MumfordPoint<LocalElement>> gamma;
  // claimed 2-power orders of the gamma generators; required for the tail
  // term of a centered coset run
  std::vector<long> gamma_torsion_orders;
  // verified odd order of [center - base] when the base point is a torsion
  // translate of the disk center (0 = not supplied)
  long center_shift_odd_order = 0;
};

struct QDiskResult {
  QResult q;
  std::vector<std::pair<long, long>> stratum_divisibility;  // (m, n_m)
  long certified_stratum = -1;
  std::string method;  // "finite-divisibility" or "stopping-rule"
};

// Image of q over a residue disk with the stated base point. The base is a
// rational point or infinity; center-torsion situations need either
// base == center or a verified odd-order shift.
QDiskResult q_disk(const LocalPipeline& pipe, std::size_t disk_index,
                   const CurvePoint<LocalElement>& base, const QDiskOptions& opts);

}  // namespace chab
