#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "chab/linalg.hpp"
#include "chab/mumford.hpp"

namespace chab {

// Witness of a halving 2Q = P: the square root s of the descent value, the
// solved triple (u, v, w) of the congruence system, the derived gcd splits
// and the b-polynomial r of the half. Serialized into certificates for audit.
template <class K>
struct HalvingWitness {
  Poly<K> s, u, v, w, r;
  Poly<K> d, a1, f1;        // inputs of the system
  Poly<K> d1, df, da;       // gcd split of (u, w)
  Poly<K> a0;               // square part of the original a-polynomial
  long deg_a_total = 0;     // degree of the (composite) a-part
};

template <class K>
struct HalfResult {
  MumfordPoint<K> point;
  HalvingWitness<K> witness;
};

namespace halving_detail {

// One congruence  alpha_u u + alpha_v v + alpha_w w == 0 (mod modulus),
// where w carries a fixed monic top term x^deg_w.
template <class K>
struct Congruence {
  Poly<K> alpha_u, alpha_v, alpha_w, modulus;
};

template <class K>
struct SystemShape {
  long nu = 0;  // number of u coefficients (deg u < nu)
  long nv = 0;  // number of v coefficients (deg v <= nv - 1)
};

// Solve at fixed deg(w) = dw with w monic; unknowns are the u, v
// coefficients and the dw lower coefficients of w.
template <class K>
std::optional<std::tuple<Poly<K>, Poly<K>, Poly<K>>> solve_at_degree(
    const typename FieldOps<K>::Ctx& ctx, const std::vector<Congruence<K>>& congs,
    const SystemShape<K>& shape, long dw) {
  using Ops = FieldOps<K>;
  long rows = 0;
  for (const auto& cg : congs) rows += cg.modulus.deg();
  long cols = shape.nu + shape.nv + dw;
  Matrix<K> A{std::size_t(std::max(rows, 1L)), std::size_t(std::max(cols, 1L)),
              Ops::zero(ctx)};
  std::vector<K> rhs(std::size_t(std::max(rows, 1L)), Ops::zero(ctx));

  long row0 = 0;
  for (const auto& cg : congs) {
    long mdeg = cg.modulus.deg();
    if (mdeg == 0) continue;
    auto put_column = [&](long col, const Poly<K>& alpha, long power) {
      Poly<K> contrib = rem(shift_up(alpha, std::size_t(power)), cg.modulus);
      for (long i = 0; i < mdeg; ++i)
        A.at(std::size_t(row0 + i), std::size_t(col)) =
            Ops::add(A.at(std::size_t(row0 + i), std::size_t(col)),
                     contrib.coeff(std::size_t(i)));
    };
    for (long i = 0; i < shape.nu; ++i) put_column(i, cg.alpha_u, i);
    for (long i = 0; i < shape.nv; ++i) put_column(shape.nu + i, cg.alpha_v, i);
    for (long i = 0; i < dw; ++i) put_column(shape.nu + shape.nv + i, cg.alpha_w, i);
    // monic top term of w moves to the right hand side
    Poly<K> top = rem(shift_up(cg.alpha_w, std::size_t(dw)), cg.modulus);
    for (long i = 0; i < mdeg; ++i)
      rhs[std::size_t(row0 + i)] =
          Ops::sub(rhs[std::size_t(row0 + i)], top.coeff(std::size_t(i)));
    row0 += mdeg;
  }

  auto sol = solve_linear(A, rhs, ctx);
  if (!sol) return std::nullopt;
  Poly<K> u(ctx), v(ctx), w(ctx);
  for (long i = 0; i < shape.nu; ++i) u.c.push_back((*sol)[std::size_t(i)]);
  for (long i = 0; i < shape.nv; ++i) v.c.push_back((*sol)[std::size_t(shape.nu + i)]);
  for (long i = 0; i < dw; ++i)
    w.c.push_back((*sol)[std::size_t(shape.nu + shape.nv + i)]);
  w.c.resize(std::size_t(dw) + 1, Ops::zero(ctx));
  w.c[std::size_t(dw)] = Ops::one(ctx);
  u.trim();
  v.trim();
  return std::make_tuple(u, v, w);
}

// gcd(u, w) with a resultant fast path before the thresholded euclid.
template <class K>
Poly<K> robust_gcd(const Poly<K>& u, const Poly<K>& w) {
  using Ops = FieldOps<K>;
  if (u.is_zero()) return monic(w);
  if (w.is_zero()) return monic(u);
  if (Ops::status(resultant(u, w)) == ZeroStatus::kNonZero)
    return Poly<K>::one(u.ctx);
  return gcd_monic(u, w);
}

}  // namespace halving_detail

// Internal driver shared by plain halving and the shifted variants:
// the proposition's system with inputs (d, a1, f1, s) and the b-congruences
// supplied by the caller. deg_a_total is the degree of the composite a-part.
template <class K>
class HalvingSolver {
 public:
  using Ctx = typename FieldOps<K>::Ctx;

  HalvingSolver(const Curve<K>& C, Poly<K> d, Poly<K> a1, Poly<K> f1, Poly<K> s,
                long deg_a_total)
      : C_(C), d_(std::move(d)), a1_(std::move(a1)), f1_(std::move(f1)),
        s_(std::move(s)), deg_a_(deg_a_total) {}

  // b-style congruences v*d == u*b (mod m); the plain case passes (b, a1).
  void add_b_congruence(const Poly<K>& b, const Poly<K>& m) {
    bcongs_.push_back({b, m});
  }

  std::optional<HalfResult<K>> run() const {
    using Ops = FieldOps<K>;
    const Ctx& ctx = C_.f.ctx;
    halving_detail::SystemShape<K> shape;
    shape.nu = (deg_a_ + 1) / 2;                       // deg u < deg a / 2
    shape.nv = C_.genus + deg_a_ / 2 - d_.deg() + 1;   // deg v bound
    if (shape.nv < 0) shape.nv = 0;

    std::vector<halving_detail::Congruence<K>> congs;
    // v d == w s (mod f1)
    congs.push_back({Poly<K>::zero(ctx), d_, -s_, f1_});
    // v d == u b (mod m) for each supplied pair
    for (const auto& [b, m] : bcongs_) congs.push_back({-b, d_, Poly<K>::zero(ctx), m});
    // u f1 == w s (mod d)
    congs.push_back({f1_, Poly<K>::zero(ctx), -s_, d_});

    for (long dw = 0; dw <= C_.genus; ++dw) {
      auto sol = halving_detail::solve_at_degree(ctx, congs, shape, dw);
      if (!sol) continue;
      auto [u, v, w] = *sol;
      // E:rel  u^2 f1 = d v^2 - (-c)^deg(a) a1 w^2
      K sign = Ops::one(ctx);
      K mc = Ops::neg(C_.f.lead());
      for (long i = 0; i < deg_a_; ++i) sign = Ops::mul(sign, mc);
      Poly<K> rel = u * u * f1_ - (d_ * v * v - a1_ * w * w * sign);
      rel.trim();
      if (!rel.is_zero())
        raise(ErrorCode::kInternalMismatch, "halving relation fails on a solution");

      // gcd split and the b-polynomial of the half
      Poly<K> d1 = halving_detail::robust_gcd(u, w);
      Poly<K> df = gcd_monic(d1, C_.f);
      Poly<K> da = gcd_monic(d1, a1_);
      if (!poly_equal(df * da, d1))
        raise(ErrorCode::kInternalMismatch, "gcd(u, w) does not split over f*a1");
      Poly<K> w1 = divexact(w, d1);
      Poly<K> u1 = divexact(u, d1);
      Poly<K> v1 = divexact(v, d1);
      Poly<K> m1 = w1 * da;
      Poly<K> r(ctx);
      if (m1.deg() > 0) {
        auto [g, su, tv] = ext_gcd(rem(u1, m1), m1);
        (void)tv;
        if (g.deg() != 0) return std::nullopt;  // degenerate; caller retries
        Poly<K> r1 = rem(-(v1 * d_) * su, m1);
        if (df.deg() > 0)
          r = crt<K>({{r1, m1}, {Poly<K>::zero(ctx), df}});
        else
          r = r1;
      }
      MumfordPoint<K> Q{w, rem(r, w)};
      if (!mumford_valid(C_, Q))
        raise(ErrorCode::kInternalMismatch, "half fails the Mumford condition");
      HalvingWitness<K> wit{s_, u, v, w, Q.b, d_, a1_, f1_,
                            d1, df, da, Poly<K>::one(ctx), deg_a_};
      return HalfResult<K>{Q, wit};
    }
    raise(ErrorCode::kInconsistent, "no solution with deg(w) <= genus");
  }

 private:
  const Curve<K>& C_;
  Poly<K> d_, a1_, f1_, s_;
  long deg_a_;
  std::vector<std::pair<Poly<K>, Poly<K>>> bcongs_;
};

// All halves of P, one per square root of the descent value modulo global
// sign. Empty result signals P not divisible by 2 (NotDivisible). The Etale
// side provides square roots in k[x]/<f>.
template <class K, class Etale>
std::vector<HalfResult<K>> halve_all(const Curve<K>& C, const Etale& E,
                                     const MumfordPoint<K>& P, int retry = 1) {
  using Ops = FieldOps<K>;
  const auto& ctx = C.f.ctx;
  auto [a0, asf] = squarefree_split(P.a);
  MumfordPoint<K> P2{asf, rem(P.b, asf)};
  MumfordPoint<K> P2canon = jac_add(C, P2, jac_zero(C));
  if constexpr (!FieldOps<K>::exact) {
    // precision remedy: re-represent when the a-part sits near a root of f
    if (asf.deg() > 0 &&
        Ops::status(resultant(asf, C.f)) == ZeroStatus::kAmbiguous) {
      MumfordPoint<K> Pb =
          rerepresent(C, P2, default_shift_set<K>(ctx, 2 * C.genus + 8));
      auto sub = halve_all(C, E, Pb, retry);
      if (a0.deg() > 0)
        for (auto& h : sub)
          h.point = jac_add(C, h.point, MumfordPoint<K>{a0, rem(P.b, a0)});
      return sub;
    }
  }
  Poly<K> rep = descent_rep(asf, C.f);
  std::vector<Poly<K>> roots = E.sqrts_mod_f(rep);
  std::vector<HalfResult<K>> out;
  for (const auto& s : roots) {
    Poly<K> d = gcd_monic(asf, C.f);
    Poly<K> a1 = divexact(asf, d);
    Poly<K> f1 = divexact(C.f, d);
    HalvingSolver<K> solver(C, d, a1, f1, s, asf.deg());
    if (a1.deg() > 0) solver.add_b_congruence(rem(P2.b, a1), a1);
    std::optional<HalfResult<K>> res;
    try {
      res = solver.run();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kIllConditionedGcd || retry <= 0) throw;
      res = std::nullopt;
    }
    if (!res) {
      if (retry <= 0)
        raise(ErrorCode::kInconsistent, "halving degenerate and retries exhausted");
      // re-representation remedy; the class is unchanged, so the halves are
      MumfordPoint<K> P2b =
          rerepresent(C, P2, default_shift_set<K>(ctx, 2 * C.genus + 8));
      auto sub = halve_all(C, E, P2b, retry - 1);
      for (auto& h : sub) {
        if (a0.deg() > 0)
          h.point = jac_add(C, h.point, MumfordPoint<K>{a0, rem(P.b, a0)});
        out.push_back(std::move(h));
      }
      return out;
    }
    // doubling audit
    MumfordPoint<K> dbl = jac_add(C, res->point, res->point);
    if (!jac_equal(dbl, P2canon))
      raise(ErrorCode::kInternalMismatch, "doubling audit failed for a half");
    res->witness.a0 = a0;
    if (a0.deg() > 0)
      res->point = jac_add(C, res->point, MumfordPoint<K>{a0, rem(P.b, a0)});
    out.push_back(std::move(*res));
  }
  // distinct square roots must give distinct halves
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (jac_equal(out[i].point, out[j].point))
        raise(ErrorCode::kInternalMismatch, "coincident halves from distinct roots");
  return out;
}

// Class of the half without constructing its b-polynomial: the image is
// mu~(a0) * mu~(w). Returns one class per square root.
template <class K, class Etale>
std::vector<BitVec> half_class_images(const Curve<K>& C, const Etale& E,
                                      const MumfordPoint<K>& P) {
  auto [a0, asf] = squarefree_split(P.a);
  Poly<K> rep = descent_rep(asf, C.f);
  std::vector<Poly<K>> roots = E.sqrts_mod_f(rep);
  std::vector<BitVec> out;
  for (const auto& s : roots) {
    Poly<K> d = gcd_monic(asf, C.f);
    Poly<K> a1 = divexact(asf, d);
    Poly<K> f1 = divexact(C.f, d);
    HalvingSolver<K> solver(C, d, a1, f1, s, asf.deg());
    if (a1.deg() > 0) solver.add_b_congruence(rem(P.b, a1), a1);
    auto res = solver.run();
    if (!res) raise(ErrorCode::kInconsistent, "degenerate class-only halving");
    BitVec cls = E.class_of_rep(descent_rep(res->witness.w, C.f));
    if (a0.deg() > 0) cls ^= E.class_of_rep(descent_rep(a0, C.f));
    out.push_back(cls);
  }
  return out;
}

// Halves of P + T for T = [h, 0] two-torsion, without forming the sum.
template <class K, class Etale>
std::vector<HalfResult<K>> halve_shifted_torsion(const Curve<K>& C, const Etale& E,
                                                 const MumfordPoint<K>& P,
                                                 const Poly<K>& h) {
  using Ops = FieldOps<K>;
  const auto& ctx = C.f.ctx;
  if (h.deg() < 1 || h.deg() > C.genus || !rem(C.f, h).is_zero())
    raise(ErrorCode::kPreconditionViolated, "shift is not a two-torsion divisor of f");
  if (gcd_monic(P.a, C.f).deg() != 0 || !is_squarefree(P.a) ||
      P.a.deg() > C.genus + 1 || gcd_monic(P.a, h).deg() != 0)
    raise(ErrorCode::kPreconditionViolated, "shifted halving needs a coprime squarefree a");
  Poly<K> fh = divexact(C.f, h);
  long deg_total = P.a.deg() + h.deg();
  // descent value of the composite [a*h, *]: d = h, a1 = a, f1 = f/h
  Poly<K> comp = rem(P.a * h - P.a * fh, C.f);
  K sign = Ops::one(ctx);
  K mc = Ops::neg(C.f.lead());
  for (long i = 0; i < deg_total; ++i) sign = Ops::mul(sign, mc);
  comp = comp * sign;
  std::vector<Poly<K>> roots = E.sqrts_mod_f(comp);
  std::vector<HalfResult<K>> out;
  for (const auto& s : roots) {
    HalvingSolver<K> solver(C, h, P.a, fh, s, deg_total);
    solver.add_b_congruence(rem(P.b, P.a), P.a);
    auto res = solver.run();
    if (!res) raise(ErrorCode::kInconsistent, "degenerate shifted halving");
    out.push_back(std::move(*res));
  }
  return out;
}

// Halves of P + P' for coprime squarefree parts with deg a + deg a' <= 2g+1.
template <class K, class Etale>
std::vector<HalfResult<K>> halve_shifted_pair(const Curve<K>& C, const Etale& E,
                                              const MumfordPoint<K>& P,
                                              const MumfordPoint<K>& Q) {
  using Ops = FieldOps<K>;
  const auto& ctx = C.f.ctx;
  if (P.a.deg() + Q.a.deg() > 2 * C.genus + 1 ||
      gcd_monic(P.a, Q.a).deg() != 0 || gcd_monic(P.a, C.f).deg() != 0 ||
      gcd_monic(Q.a, C.f).deg() != 0)
    raise(ErrorCode::kPreconditionViolated, "pair halving needs pairwise coprime parts");
  long deg_total = P.a.deg() + Q.a.deg();
  Poly<K> comp = rem(P.a * Q.a, C.f);
  K sign = Ops::one(ctx);
  K mc = Ops::neg(C.f.lead());
  for (long i = 0; i < deg_total; ++i) sign = Ops::mul(sign, mc);
  comp = comp * sign;
  std::vector<Poly<K>> roots = E.sqrts_mod_f(comp);
  std::vector<HalfResult<K>> out;
  for (const auto& s : roots) {
    HalvingSolver<K> solver(C, Poly<K>::one(ctx), P.a * Q.a, C.f, s, deg_total);
    solver.add_b_congruence(rem(P.b, P.a), P.a);
    solver.add_b_congruence(rem(Q.b, Q.a), Q.a);
    auto res = solver.run();
    if (!res) raise(ErrorCode::kInconsistent, "degenerate pair halving");
    out.push_back(std::move(*res));
  }
  return out;
}

}  // namespace chab
