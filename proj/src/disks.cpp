#include "chab/disks.hpp"

#include "chab/f2poly.hpp"

namespace chab {

namespace {

std::uint64_t mask_mod2(const Poly<Rat>& p) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < p.c.size(); ++i) {
    if (p.c[i] == 0) continue;
    if (val2(p.c[i]) < 0) raise(ErrorCode::kBadInput, "witness polynomial not integral");
    if (val2(p.c[i]) == 0) m |= std::uint64_t(1) << i;
  }
  return m;
}

// Trace of an element of F_{2^m} presented modulo g.
bool trace_f2m(std::uint64_t z, std::uint64_t g, int m) {
  std::uint64_t acc = 0, cur = z;
  for (int i = 0; i < m; ++i) {
    acc ^= cur;
    cur = f2::mulmod(cur, cur, g);
  }
  return acc & 1;  // trace lands in F2 = {0,1}
}

}  // namespace

int unit_mod4(const LocalElement& y) {
  const Dyadic& c = y.coords()[0];
  if (c.is_zero() || c.val2() != 0)
    raise(ErrorCode::kBadInput, "mod-4 tag of a non-unit");
  Int m = c.mantissa() & 3;
  return int(m);
}

int rational_mod4(const Rat& y) {
  if (val2(y) != 0) raise(ErrorCode::kBadInput, "mod-4 tag of a non-unit rational");
  Dyadic d = Dyadic::from_rational(y, 2);
  return int(d.mantissa() & 3);
}

ReducedModelInfo analyze_witness(const Poly<Rat>& F, const GoodReductionWitness& W) {
  RatCtx ctx;
  Poly<Rat> four = Poly<Rat>::constant(ctx, Rat(4));
  if (!poly_equal(W.h * W.h + four * W.k, F))
    raise(ErrorCode::kBadInput, "witness does not satisfy f = h^2 + 4k");
  ReducedModelInfo info;
  info.genus = (F.deg() - 1) / 2;
  info.hbar = mask_mod2(W.h);
  info.kbar = mask_mod2(W.k);
  if (W.h.deg() > info.genus || W.k.deg() != F.deg())
    raise(ErrorCode::kBadInput, "witness degrees incompatible with an odd model");
  if (f2::deg(info.kbar) != F.deg())
    raise(ErrorCode::kBadInput, "reduced model degenerates at infinity");
  // affine smoothness: no common root of hbar and (hbar')^2 kbar + (kbar')^2
  std::uint64_t hd = f2::derivative(info.hbar);
  std::uint64_t kd = f2::derivative(info.kbar);
  std::uint64_t crit = f2::mul(f2::mul(hd, hd), info.kbar) ^ f2::mul(kd, kd);
  if (f2::gcd(info.hbar, crit) != 1)
    raise(ErrorCode::kBadInput, "reduced model is singular");

  // point counts over F_{2^m}, m = 1..genus
  for (int m = 1; m <= info.genus; ++m) {
    std::uint64_t g = m == 1 ? 0b10 : f2::smallest_irreducible(m);
    Int count = 1;  // the point at infinity
    for (std::uint64_t x = 0; x < (std::uint64_t(1) << m); ++x) {
      std::uint64_t hv = f2::eval_poly(info.hbar, x, g);
      std::uint64_t kv = f2::eval_poly(info.kbar, x, g);
      if (hv == 0) {
        count += 1;  // unique y
      } else {
        // y^2 + hv y = kv: with y = hv z this is z^2 + z = kv / hv^2,
        // solvable iff the trace vanishes, then with two solutions
        std::uint64_t hv2 = f2::mulmod(hv, hv, g);
        std::uint64_t acc = 1, base = hv2;
        std::uint64_t e = (std::uint64_t(1) << m) - 2;
        while (e) {
          if (e & 1) acc = f2::mulmod(acc, base, g);
          e >>= 1;
          base = f2::mulmod(base, base, g);
        }
        std::uint64_t z = f2::mulmod(kv, acc, g);
        count += trace_f2m(z, g, m) ? 0 : 2;
      }
    }
    info.point_counts.push_back(count);
  }

  // L-polynomial coefficients via Newton's identities, then L(1).
  std::vector<Int> c(std::size_t(2 * info.genus) + 1, Int(0));
  c[0] = 1;
  for (int k = 1; k <= info.genus; ++k) {
    // p_k = 2^k + 1 - N_k
    Int pk = (Int(1) << k) + 1 - info.point_counts[std::size_t(k - 1)];
    Int acc = pk;
    for (int j = 1; j < k; ++j) {
      Int pj = (Int(1) << (k - j)) + 1 - info.point_counts[std::size_t(k - j - 1)];
      acc += c[std::size_t(j)] * pj;
    }
    if (acc % k != 0)
      raise(ErrorCode::kInternalMismatch, "newton identity division is not exact");
    c[std::size_t(k)] = -acc / k;
  }
  for (int i = 0; i < info.genus; ++i)
    c[std::size_t(2 * info.genus - i)] = (Int(1) << (info.genus - i)) * c[std::size_t(i)];
  Int l1 = 0;
  for (const auto& ci : c) l1 += ci;
  if (l1 <= 0) raise(ErrorCode::kInternalMismatch, "nonpositive special-fiber order");
  info.jacobian_order_f2 = l1;
  info.two_torsion_trivial_f2 = (l1 % 2) != 0;
  return info;
}

std::vector<DiskDescriptor> enumerate_disks(const Poly<Rat>& F,
                                            const ReducedModelInfo& info) {
  std::vector<DiskDescriptor> out;
  DiskDescriptor inf;
  inf.kind = DiskDescriptor::Kind::kInfinity;
  inf.id = "inf";
  inf.odd_symmetric = true;
  // u with lead(k) * u == 1 (mod 8); lead(F) = 4 lead(k)
  Rat ck = F.lead() / 4;
  Dyadic ckd = Dyadic::from_rational(ck, 3);
  if (ckd.is_zero() || ckd.val2() != 0)
    raise(ErrorCode::kBadInput, "leading coefficient is not 4 * unit");
  long ckm = long(ckd.mantissa() & 7);
  for (long u : {1L, 3L, 5L, 7L})
    if ((ckm * u) % 8 == 1) inf.u = u;
  out.push_back(inf);

  for (long xb = 0; xb <= 1; ++xb) {
    auto evalf2 = [&](std::uint64_t mask) {
      if (xb == 0) return std::uint64_t(mask & 1);
      return std::uint64_t(__builtin_popcountll(mask) & 1);
    };
    std::uint64_t hv = evalf2(info.hbar);
    std::uint64_t kv = evalf2(info.kbar);
    if (hv != 0) {
      if (kv != 0) continue;  // no F2 point over this x
      for (int yb = 0; yb <= 1; ++yb) {
        DiskDescriptor d;
        d.kind = DiskDescriptor::Kind::kAffineOrdinary;
        d.id = "x" + std::to_string(xb) + "y" + std::to_string(yb);
        d.x0 = Rat(xb);
        d.ytag = 0;  // branch tag finalized by LocalPipeline::make via h
        out.push_back(d);
      }
    } else {
      // Weierstrass-type reduction point; smoothness was checked globally.
      // A rational-center parameterization is not derived automatically.
      DiskDescriptor d;
      d.kind = DiskDescriptor::Kind::kAffineWeierstrass;
      d.id = "x" + std::to_string(xb) + "w";
      d.x0 = Rat(xb);
      d.odd_symmetric = true;
      out.push_back(d);
    }
  }
  return out;
}

const DiskDescriptor& LocalPipeline::disk_by_id(const std::string& id) const {
  for (const auto& d : disks)
    if (d.id == id) return d;
  raise(ErrorCode::kBadInput, "unknown disk id: " + id);
}

LocalPipeline LocalPipeline::make(const Poly<Rat>& F,
                                  std::shared_ptr<LocalFactorization> fac,
                                  std::optional<GoodReductionWitness> W,
                                  long depth_cap,
                                  std::optional<long> torsion_level_hint) {
  LocalPipeline P;
  P.prime = fac->prime();
  P.prime_basis = std::make_shared<SquareClassBasis>(P.prime);
  P.curve_rat = F;
  P.fac = fac;
  P.curve = make_curve(fac->lift_poly(F));
  P.witness = std::move(W);
  if (!P.witness) raise(ErrorCode::kNoModel, "no good-reduction witness supplied");
  P.model = analyze_witness(F, *P.witness);
  P.disks = enumerate_disks(F, P.model);
  // finalize branch tags from the witness and precompute infinity data
  for (auto& d : P.disks) {
    if (d.kind == DiskDescriptor::Kind::kAffineOrdinary) {
      Rat hval = eval(P.witness->h, d.x0);
      int base = rational_mod4(hval);
      // the two disks over this x differ by 2 mod 4
      int yb = d.id.back() - '0';
      d.ytag = ((base + 2 * yb) % 4 + 4) % 4;
    }
  }
  P.infinity_w0.clear();
  for (const auto& d : P.disks) {
    if (d.kind != DiskDescriptor::Kind::kInfinity) {
      P.infinity_w0.push_back(P.prime->one());
      continue;
    }
    Rat target = P.curve_rat.lead();
    for (long i = 0; i < P.curve_rat.deg(); ++i) target *= Rat(d.u);
    auto w0 = P.prime_basis->sqrt(P.prime->from_rational(target));
    if (!w0) raise(ErrorCode::kInternalMismatch, "infinity series constant is not a square");
    // canonical sign: odd part congruent to 1 mod 4
    LocalElement w = *w0;
    Dyadic c0 = w.coords()[0];
    if ((c0.mantissa() & 3) != 1) w = P.prime->neg(w);
    P.infinity_w0.push_back(w);
  }
  // local 2-primary torsion level: trivial exactly when f stays irreducible
  if (P.fac->factors().size() == 1) {
    P.torsion_level = 0;
  } else if (torsion_level_hint) {
    P.torsion_level = *torsion_level_hint;
  } else {
    P.torsion_level = -1;  // unknown; the stopping rules will refuse
  }
  P.hypdisk_ok = P.fac->factors().size() == 1 && P.model.two_torsion_trivial_f2;
  P.depth_cap = depth_cap > 0 ? depth_cap : 4 * P.curve.genus + 16;
  return P;
}

CurvePoint<LocalElement> LocalPipeline::disk_point(std::size_t disk_index,
                                                   const Rat& t) const {
  const DiskDescriptor& D = disks[disk_index];
  if (D.kind == DiskDescriptor::Kind::kAffineOrdinary) {
    Rat x = D.x0 + t;
    Rat fx = eval(curve_rat, x);
    auto r = prime_basis->sqrt(prime->from_rational(fx));
    if (!r) raise(ErrorCode::kInternalMismatch, "disk point off the curve");
    LocalElement y = *r;
    if (unit_mod4(y) != D.ytag) y = prime->neg(y);
    if (unit_mod4(y) != D.ytag)
      raise(ErrorCode::kInternalMismatch, "no branch matches the disk tag");
    return CurvePoint<LocalElement>::affine(prime->from_rational(x), y);
  }
  if (D.kind == DiskDescriptor::Kind::kInfinity) {
    if (t == 0) return CurvePoint<LocalElement>::infinity();
    Rat x = Rat(D.u) / (t * t);
    Rat fx = eval(curve_rat, x);
    // branch certification: the series tail must sit beyond the square
    // threshold relative to the leading constant
    Rat tpow(1);
    for (long i = 0; i < curve_rat.deg(); ++i) tpow *= t;
    Rat lead_const = curve_rat.lead();
    for (long i = 0; i < curve_rat.deg(); ++i) lead_const *= Rat(D.u);
    Rat scaled = fx * tpow * tpow;  // = G(t^2), constant term lead_const
    if (val2(scaled - lead_const) < val2(lead_const) + 3)
      raise(ErrorCode::kNoModel, "infinity parameterization ambiguous at this depth");
    auto r = prime_basis->sqrt(prime->from_rational(fx));
    if (!r) raise(ErrorCode::kInternalMismatch, "disk point off the curve");
    LocalElement y = *r;
    const LocalElement& w0 = infinity_w0[disk_index];
    LocalElement probe = prime->sub(prime->mul(y, prime->from_rational(tpow)), w0);
    long vplus = probe.is_apparent_zero() ? kValInfinity : probe.val();
    if (vplus <= w0.val() + 1) {
      y = prime->neg(y);
      LocalElement probe2 = prime->sub(prime->mul(y, prime->from_rational(tpow)), w0);
      long v2 = probe2.is_apparent_zero() ? kValInfinity : probe2.val();
      if (v2 <= w0.val() + 1)
        raise(ErrorCode::kInternalMismatch, "no branch matches the infinity series");
    }
    return CurvePoint<LocalElement>::affine(prime->from_rational(x), y);
  }
  raise(ErrorCode::kNoModel,
        "no automatic parameterization at a Weierstrass-type reduction point");
}

bool LocalPipeline::rational_point_in_disk(std::size_t disk_index, const Rat& x,
                                           const Rat& y) const {
  const DiskDescriptor& D = disks[disk_index];
  if (D.kind == DiskDescriptor::Kind::kInfinity) return val2(x) < 0;
  if (D.kind != DiskDescriptor::Kind::kAffineOrdinary) return false;
  if (val2(x) < 0) return false;
  if (val2(x - D.x0) < 1) return false;
  return rational_mod4(y) == D.ytag;
}

LocalElement LocalPipeline::rational_point_parameter(std::size_t disk_index,
                                                     const Rat& x, const Rat& y) const {
  const DiskDescriptor& D = disks[disk_index];
  if (D.kind == DiskDescriptor::Kind::kAffineOrdinary)
    return prime->from_rational(x - D.x0);
  if (D.kind != DiskDescriptor::Kind::kInfinity)
    raise(ErrorCode::kNoModel, "no parameterization available");
  auto r = prime_basis->sqrt(prime->from_rational(Rat(D.u) / x));
  if (!r) raise(ErrorCode::kBadInput, "point is not on the infinity disk");
  auto ysq = prime_basis->sqrt(prime->from_rational(eval(curve_rat, x)));
  if (!ysq) raise(ErrorCode::kBadInput, "x-coordinate is not on the curve");
  const LocalElement& w0 = infinity_w0[disk_index];
  // choose the sign whose branch reproduces y
  for (int sgn = 0; sgn < 2; ++sgn) {
    LocalElement t = sgn ? prime->neg(*r) : *r;
    LocalElement tpow = prime->one(t.precision());
    for (long i = 0; i < curve_rat.deg(); ++i) tpow = prime->mul(tpow, t);
    LocalElement cand = *ysq;
    LocalElement probe = prime->sub(prime->mul(cand, tpow), w0);
    long vp = probe.is_apparent_zero() ? kValInfinity : probe.val();
    if (vp <= w0.val() + 1) cand = prime->neg(cand);
    if (prime->sub(cand, prime->from_rational(y)).is_apparent_zero()) return t;
  }
  raise(ErrorCode::kBadInput, "point does not match either branch");
}

}  // namespace chab
