#include "chab/qmap.hpp"

#include <deque>
#include <sstream>

namespace chab {

namespace {

using LF = LocalFactorization;

struct StratumCover {
  long n_m = 0;
  long samples = 0;
};

Rat pow2_rat(long m) {
  if (m >= 0) return Rat(Int(1) << m);
  return Rat(Int(1), Int(1) << (-m));
}

}  // namespace

QDiskResult q_disk(const LocalPipeline& pipe, std::size_t disk_index,
                   const CurvePoint<LocalElement>& base, const QDiskOptions& opts) {
  const DiskDescriptor& D = pipe.disks[disk_index];
  QContext<LocalElement, LF> qctx(pipe.curve, *pipe.fac, pipe.depth_cap);
  const bool coset = !opts.gamma.empty();
  std::optional<CosetContext<LocalElement, LF>> cctx;
  if (coset) cctx.emplace(qctx, opts.gamma, opts.strict);

  auto q_of = [&](const MumfordPoint<LocalElement>& P) -> QResult {
    return coset ? q_coset(*cctx, P) : q_point(qctx, P);
  };
  auto param_point = [&](const Rat& s) {
    return pipe.disk_point(disk_index, opts.param_shift + s);
  };
  auto embed_param = [&](const Rat& s) {
    return embed_point(pipe.curve, param_point(s), base);
  };

  QDiskResult R;
  auto merge = [&](const QResult& q, long m, const std::string& who) {
    R.q.classes.insert(q.classes.begin(), q.classes.end());
    R.q.recursion_depth = std::max(R.q.recursion_depth, q.recursion_depth);
    R.q.divisibility = std::max(R.q.divisibility, q.divisibility);
    std::ostringstream os;
    os << who << " divisibility=" << q.divisibility << " classes=" << q.classes.size();
    R.q.audit.push_back({m, os.str()});
  };

  // Covers the stratum v2(s) = m by canonical unit residues, widening the
  // residue modulus until each sample certifies its own neighborhood.
  long total_samples = 0;
  auto cover_stratum = [&](long m) -> long {
    long n_m = 0;
    std::deque<std::pair<long, Int>> work;  // (rr, odd residue mod 2^rr)
    work.push_back({1, Int(1)});
    while (!work.empty()) {
      auto [rr, u] = work.front();
      work.pop_front();
      if (++total_samples > opts.sample_cap)
        raise(ErrorCode::kStoppingRuleUnmet, "stratum sampling budget exhausted");
      Rat s = pow2_rat(m) * Rat(u);
      QResult qr = q_of(embed_param(s));
      long needed = std::max(1L, qr.divisibility + 3 - m);
      if (rr >= needed) {
        merge(qr, m, "sample s=2^" + std::to_string(m) + "*" + u.str());
        n_m = std::max(n_m, qr.divisibility);
      } else {
        work.push_back({rr + 1, u});
        work.push_back({rr + 1, u + (Int(1) << rr)});
      }
    }
    return n_m;
  };

  // Center analysis at the (possibly shifted) parameterization origin.
  CurvePoint<LocalElement> center = param_point(Rat(0));
  MumfordPoint<LocalElement> T0 = embed_point(pipe.curve, center, base);
  bool centered = T0.is_zero();
  if (!centered && opts.center_shift_odd_order > 0) {
    long n = opts.center_shift_odd_order;
    if (n % 2 == 0)
      raise(ErrorCode::kBadInput, "center shift order must be odd");
    if (!jac_mul(pipe.curve, T0, n).is_zero())
      raise(ErrorCode::kBadInput, "claimed odd order of the center shift fails");
    centered = true;
  }
  const long depth = std::max(D.depth, opts.min_depth);

  if (!centered) {
    QResult c = q_of(T0);
    merge(c, 0, "center");
    long cover_to = c.divisibility + 2;
    for (long m = depth; m <= cover_to; ++m) {
      long nm = cover_stratum(m);
      R.stratum_divisibility.push_back({m, nm});
    }
    R.method = "finite-divisibility";
    return R;
  }

  long ntors = pipe.torsion_level;
  if (ntors < 0)
    raise(ErrorCode::kStoppingRuleUnmet, "local 2-primary torsion level unknown");
  bool weier = D.odd_symmetric && opts.param_shift == 0;
  long m0 = ntors == 0 ? (coset ? 2 : 1) : ntors + 3;
  for (long m = depth; m <= opts.stratum_cap; ++m) {
    long nm = cover_stratum(m);
    R.stratum_divisibility.push_back({m, nm});
    if (m >= m0) {
      bool ok = weier ? (3 * m - 2 >= nm) : (2 * m - 3 >= nm);
      if (ok) {
        R.certified_stratum = m;
        break;
      }
    }
  }
  if (R.certified_stratum < 0)
    raise(ErrorCode::kStoppingRuleUnmet,
          "no stratum satisfied the stopping inequality up to the cap");
  // tail: the center contributes the trivial class; a torsion shift group
  // contributes its class span, enumerated through the representatives.
  if (!coset) {
    R.q.classes.insert(BitVec(pipe.class_dim()));
  } else {
    if (opts.gamma_torsion_orders.size() != opts.gamma.size())
      raise(ErrorCode::kStoppingRuleUnmet,
            "centered coset tail needs 2-power torsion generators");
    for (std::size_t j = 0; j < opts.gamma.size(); ++j) {
      long n = opts.gamma_torsion_orders[j];
      if (n <= 0 || (n & (n - 1)) != 0 ||
          !jac_mul(pipe.curve, opts.gamma[j], n).is_zero())
        raise(ErrorCode::kBadInput, "gamma generator order claim fails");
    }
    for (const auto& rc : cctx->rep_classes()) R.q.classes.insert(rc);
  }
  R.method = "stopping-rule";
  return R;
}

}  // namespace chab
