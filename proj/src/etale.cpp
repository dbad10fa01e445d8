#include "chab/etale.hpp"

#include "chab/f2poly.hpp"

#include <numeric>
#include <sstream>

namespace chab {

namespace {

LocalElement lift_prime_to(const LocalFieldPtr& K, const LocalElement& q2v) {
  std::vector<Dyadic> c(K->degree());
  c[0] = q2v.coords()[0];
  long prec = K->e() * q2v.precision();
  return K->from_coords(std::move(c), prec);
}

void check_newton_polygon(const std::vector<Rat>& poly) {
  long deg = long(poly.size()) - 1;
  if (deg < 1 || poly[0] == 0)
    raise(ErrorCode::kBadInput, "newton polygon certificate needs a nonzero constant term");
  long v0 = val2(poly[0]);
  if (v0 == 0 || std::gcd(std::abs(v0), deg) != 1)
    raise(ErrorCode::kBadInput, "newton polygon is not a pure prime slope");
  for (long i = 1; i < deg; ++i) {
    if (poly[std::size_t(i)] == 0) continue;
    if (deg * val2(poly[std::size_t(i)]) < v0 * (deg - i))
      raise(ErrorCode::kBadInput, "coefficient below the pure newton slope");
  }
}

void check_eisenstein_shift(const std::vector<Rat>& poly, const Int& shift) {
  RatCtx ctx;
  Poly<Rat> g(ctx, poly);
  Poly<Rat> xs = Poly<Rat>::from_ints(ctx, {0, 1});
  xs.c[0] = Rat(shift);
  // g(x + shift) by Horner on polynomial argument
  Poly<Rat> acc = Poly<Rat>::zero(ctx);
  for (std::size_t i = g.c.size(); i-- > 0;)
    acc = acc * xs + Poly<Rat>::constant(ctx, g.c[i]);
  for (long i = 0; i < acc.deg(); ++i) {
    Rat c = acc.coeff(std::size_t(i));
    long v = c == 0 ? kValInfinity : val2(c);
    if (v < 1 || (i == 0 && v != 1))
      raise(ErrorCode::kBadInput, "shifted polynomial is not eisenstein at 2");
  }
}

void check_residue_irreducible(const std::vector<Rat>& poly) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (poly[i] == 0) continue;
    if (val2(poly[i]) < 0)
      raise(ErrorCode::kBadInput, "non-integral coefficient in residue certificate");
    if (val2(poly[i]) == 0) mask |= std::uint64_t(1) << i;
  }
  if (!f2::irreducible(mask))
    raise(ErrorCode::kBadInput, "reduction mod 2 is not irreducible");
}

}  // namespace

Poly<LocalElement> LocalFactorization::lift_poly(const Poly<Rat>& p) const {
  Poly<LocalElement> out(prime_);
  for (const auto& c : p.c) out.c.push_back(prime_->from_rational(c));
  out.trim();
  return out;
}

LocalFactorization LocalFactorization::verify(const Poly<Rat>& fmonic,
                                              LocalFieldPtr prime,
                                              const std::vector<EtaleFactorSpec>& specs) {
  LocalFactorization L;
  L.prime_ = std::move(prime);
  L.degree_ = fmonic.deg();
  if (specs.empty()) raise(ErrorCode::kBadInput, "empty factorization");

  std::ostringstream fp;
  fp << "etale{";
  long total_deg = 0;
  for (const auto& spec : specs) {
    EtaleFactor fac;
    long e = long(spec.field.eisenstein.size()) - 1;
    fac.field = LocalField::make(spec.field, e * L.prime_->default_precision());
    fac.basis = std::make_shared<SquareClassBasis>(fac.field);
    if (spec.poly.empty() || spec.poly.back() != 1)
      raise(ErrorCode::kBadInput, "factor polynomial must be monic");
    if (long(spec.poly.size()) - 1 != fac.field->degree())
      raise(ErrorCode::kBadInput, "factor degree does not match its field");
    {
      Poly<Rat> rp(RatCtx{}, spec.poly);
      L.factors_.push_back(fac);  // placeholder; fill below
      L.factors_.back().poly = L.lift_poly(rp);
    }
    EtaleFactor& F = L.factors_.back();
    F.cert_kind = spec.certificate.kind;
    if (spec.certificate.kind == "newton_polygon") {
      check_newton_polygon(spec.poly);
      F.certified = true;
    } else if (spec.certificate.kind == "eisenstein_shift") {
      check_eisenstein_shift(spec.poly, spec.certificate.shift);
      F.certified = true;
    } else if (spec.certificate.kind == "residue_irreducible") {
      check_residue_irreducible(spec.poly);
      F.certified = true;
    } else if (spec.certificate.kind == "hint_only") {
      F.certified = false;
      L.certified_ = false;
    } else {
      raise(ErrorCode::kBadInput, "unknown irreducibility certificate kind");
    }

    // Embedding of theta: seed plus optional verified Newton refinement.
    const auto& K = F.field;
    if (long(spec.root.size()) != K->degree())
      raise(ErrorCode::kBadInput, "root seed coordinate count");
    LocalElement root = K->from_coords(spec.root, K->default_precision());
    Poly<Rat> grat(RatCtx{}, spec.poly);
    auto evalg = [&](const Poly<Rat>& g, const LocalElement& x) {
      return eval_mapped(
          g, x, [&](const Rat& c) { return K->from_rational(c); }, K->zero());
    };
    if (spec.newton_refine) {
      Poly<Rat> gder = derivative(grat);
      for (int iter = 0; iter < 80; ++iter) {
        LocalElement val = evalg(grat, root);
        if (val.is_apparent_zero()) break;
        LocalElement der = evalg(gder, root);
        if (val.val() <= 2 * der.val())
          raise(ErrorCode::kBadInput, "root seed outside the hensel range");
        root = K->sub(root, K->div(val, der));
      }
    }
    if (!evalg(grat, root).is_apparent_zero())
      raise(ErrorCode::kBadInput, "embedding data does not kill the factor");
    F.root = root;

    total_deg += K->degree();
    L.class_dim_ += F.basis->dim();
    fp << F.basis->fingerprint() << ":" << F.cert_kind << ";";
  }
  fp << "}";
  if (total_deg != fmonic.deg())
    raise(ErrorCode::kBadInput, "factor degrees do not sum to deg f");

  // Product check over Q2 at working precision.
  Poly<LocalElement> prod = Poly<LocalElement>::one(L.prime_);
  for (const auto& F : L.factors_) prod = prod * F.poly;
  if (!poly_equal(prod, L.lift_poly(fmonic)))
    raise(ErrorCode::kBadInput, "factor product does not match f");

  // Pairwise coprimality: resultants must be units times bounded 2-powers.
  for (std::size_t i = 0; i < L.factors_.size(); ++i)
    for (std::size_t j = i + 1; j < L.factors_.size(); ++j) {
      LocalElement r = resultant(L.factors_[i].poly, L.factors_[j].poly);
      if (r.is_apparent_zero() || r.val() > L.prime_->default_precision() / 2)
        raise(ErrorCode::kBadInput, "factors are not coprime at working precision");
    }

  // Change of basis for the inverse embedding: columns are the concatenated
  // coordinates of root^t across factors.
  {
    long n = fmonic.deg();
    Matrix<LocalElement> M{std::size_t(n), std::size_t(n), L.prime_->zero()};
    std::size_t row0 = 0;
    for (const auto& F : L.factors_) {
      const auto& K = F.field;
      LocalElement p = K->one();
      for (long t = 0; t < n; ++t) {
        for (int k = 0; k < K->degree(); ++k) {
          long beta_prec = std::max(1L, (p.precision() - (k / K->f())) / K->e());
          std::vector<Dyadic> cc{p.coords()[std::size_t(k)]};
          M.at(row0 + std::size_t(k), std::size_t(t)) =
              L.prime_->from_coords(std::move(cc), beta_prec);
        }
        if (t + 1 < n) p = K->mul(p, F.root);
      }
      row0 += std::size_t(K->degree());
    }
    for (long k = 0; k < n; ++k) {
      std::vector<LocalElement> rhs(std::size_t(n), L.prime_->zero());
      rhs[std::size_t(k)] = L.prime_->one();
      auto sol = solve_linear(M, rhs, L.prime_);
      if (!sol) raise(ErrorCode::kBadInput, "embedding basis is singular");
      L.inv_cols_.push_back(*sol);
    }
  }

  L.fingerprint_ = fnv_hex(fnv1a(fp.str()));
  return L;
}

std::vector<LocalElement> LocalFactorization::embed(const Poly<LocalElement>& rep) const {
  std::vector<LocalElement> out;
  out.reserve(factors_.size());
  for (const auto& F : factors_) {
    out.push_back(eval_mapped(
        rep, F.root, [&](const LocalElement& c) { return lift_prime_to(F.field, c); },
        F.field->zero()));
  }
  return out;
}

std::vector<LocalElement> LocalFactorization::embed_rat(const Poly<Rat>& rep) const {
  std::vector<LocalElement> out;
  out.reserve(factors_.size());
  for (const auto& F : factors_) {
    out.push_back(eval_mapped(
        rep, F.root, [&](const Rat& c) { return F.field->from_rational(c); },
        F.field->zero()));
  }
  return out;
}

BitVec LocalFactorization::classify(const std::vector<LocalElement>& values) const {
  BitVec out(0);
  for (std::size_t j = 0; j < factors_.size(); ++j)
    out = concat(out, factors_[j].basis->decompose(values[j]));
  return out;
}

BitVec LocalFactorization::class_of_rep(const Poly<LocalElement>& rep) const {
  return classify(embed(rep));
}

Poly<LocalElement> LocalFactorization::rep_from_values(
    const std::vector<LocalElement>& values) const {
  long n = degree_;
  std::vector<LocalElement> coordvec;
  coordvec.reserve(std::size_t(n));
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    const auto& K = factors_[j].field;
    const auto& v = values[j];
    for (int k = 0; k < K->degree(); ++k) {
      long beta_prec = std::max(1L, (v.precision() - (k / K->f())) / K->e());
      std::vector<Dyadic> cc{v.coords()[std::size_t(k)]};
      coordvec.push_back(prime_->from_coords(std::move(cc), beta_prec));
    }
  }
  Poly<LocalElement> out(prime_);
  out.c.assign(std::size_t(n), prime_->zero());
  for (long t = 0; t < n; ++t) {
    LocalElement acc = prime_->zero();
    for (long k = 0; k < n; ++k)
      acc = prime_->add(acc, prime_->mul(inv_cols_[std::size_t(k)][std::size_t(t)],
                                         coordvec[std::size_t(k)]));
    out.c[std::size_t(t)] = acc;
  }
  out.trim();
  return out;
}

std::vector<Poly<LocalElement>> LocalFactorization::sqrts_mod_f(
    const Poly<LocalElement>& rep) const {
  std::vector<LocalElement> values = embed(rep);
  std::vector<LocalElement> roots;
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    auto r = factors_[j].basis->sqrt(values[j]);
    if (!r) return {};
    roots.push_back(*r);
  }
  std::size_t k = factors_.size();
  std::vector<Poly<LocalElement>> out;
  for (std::size_t mask = 0; mask < (std::size_t(1) << (k - 1)); ++mask) {
    std::vector<LocalElement> vals;
    vals.push_back(roots[0]);
    for (std::size_t j = 1; j < k; ++j) {
      bool flip = (mask >> (j - 1)) & 1u;
      vals.push_back(flip ? factors_[j].field->neg(roots[j]) : roots[j]);
    }
    out.push_back(rep_from_values(vals));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite field etale algebra

std::vector<Poly<FqElem>> factor_squarefree_fq(const Poly<FqElem>& f) {
  const FqCtxPtr F = f.ctx;
  std::vector<Poly<FqElem>> out;
  Poly<FqElem> rest = monic(f);
  // linear factors
  for (int x0 = 0; x0 < F->q(); ++x0) {
    FqElem xv{F, std::uint16_t(x0)};
    while (rest.deg() >= 1 && eval(rest, xv).v == 0) {
      Poly<FqElem> lin(F, {FqElem{F, F->neg(std::uint16_t(x0))}, FqElem{F, 1}});
      out.push_back(lin);
      rest = divexact(rest, lin);
    }
  }
  // higher-degree factors by trial division with minimal-degree divisors
  for (long d = 2; rest.deg() >= 2 * d; ) {
    bool found = false;
    long total = 1;
    for (long i = 0; i < d; ++i) total *= F->q();
    for (long code = 0; code < total && !found; ++code) {
      Poly<FqElem> cand(F);
      long c = code;
      for (long i = 0; i < d; ++i) {
        cand.c.push_back(FqElem{F, std::uint16_t(c % F->q())});
        c /= F->q();
      }
      cand.c.push_back(FqElem{F, 1});
      auto [q, r] = divmod(rest, cand);
      if (r.is_zero()) {
        out.push_back(cand);
        rest = q;
        found = true;
      }
    }
    if (!found) ++d;
  }
  if (rest.deg() >= 1) out.push_back(rest);
  return out;
}

FqEtale::FqEtale(FqCtxPtr F, Poly<FqElem> f) : F_(std::move(F)), f_(std::move(f)) {
  if (!is_squarefree(f_)) raise(ErrorCode::kBadInput, "etale algebra needs squarefree f");
  factors_ = factor_squarefree_fq(f_);
}

namespace {

Int q_power(const FqCtxPtr& F, long d) {
  Int v = 1;
  for (long i = 0; i < d; ++i) v *= F->q();
  return v;
}

// Square root in Fq[x]/(g), g irreducible, by Tonelli-Shanks; nullopt when
// the element is not a square.
std::optional<Poly<FqElem>> quotient_sqrt(const Poly<FqElem>& z, const Poly<FqElem>& g) {
  const FqCtxPtr F = z.ctx;
  Int ord = q_power(F, g.deg()) - 1;
  auto one = Poly<FqElem>::one(F);
  auto is_one = [&](const Poly<FqElem>& p) { return poly_equal(p, one); };
  if (z.is_zero()) return Poly<FqElem>::zero(F);
  if (!is_one(pow_mod(z, ord / 2, g))) return std::nullopt;
  Int t = ord;
  long s = 0;
  while ((t & 1) == 0) {
    t >>= 1;
    ++s;
  }
  // non-residue search in a deterministic order
  Poly<FqElem> n(F);
  for (long code = 1;; ++code) {
    Poly<FqElem> cand(F);
    long c = code;
    for (long i = 0; i <= g.deg() && c; ++i) {
      cand.c.resize(std::size_t(i) + 1, FieldOps<FqElem>::zero(F));
      cand.c[std::size_t(i)] = FqElem{F, std::uint16_t(c % F->q())};
      c /= F->q();
    }
    cand.trim();
    if (cand.is_zero() || cand.deg() >= g.deg()) continue;
    auto e = pow_mod(cand, ord / 2, g);
    if (!is_one(e) && !e.is_zero()) {
      n = cand;
      break;
    }
  }
  Poly<FqElem> c = pow_mod(n, t, g);
  Poly<FqElem> tt = pow_mod(z, t, g);
  Poly<FqElem> r = pow_mod(z, (t + 1) / 2, g);
  long m = s;
  while (!is_one(tt)) {
    Poly<FqElem> probe = tt;
    long i = 0;
    while (!is_one(probe)) {
      probe = rem(probe * probe, g);
      ++i;
      if (i >= m) return std::nullopt;
    }
    Poly<FqElem> b = c;
    for (long k = 0; k < m - i - 1; ++k) b = rem(b * b, g);
    m = i;
    c = rem(b * b, g);
    tt = rem(tt * c, g);
    r = rem(r * b, g);
  }
  return r;
}

}  // namespace

BitVec FqEtale::class_of_rep(const Poly<FqElem>& rep) const {
  BitVec out(factors_.size());
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    Poly<FqElem> z = rem(rep, factors_[j]);
    if (z.is_zero())
      raise(ErrorCode::kBadInput, "class of a non-unit in the etale algebra");
    Int ord = q_power(F_, factors_[j].deg()) - 1;
    auto e = pow_mod(z, ord / 2, factors_[j]);
    out.set(j, !poly_equal(e, Poly<FqElem>::one(F_)));
  }
  return out;
}

std::vector<Poly<FqElem>> FqEtale::sqrts_mod_f(const Poly<FqElem>& rep) const {
  std::vector<Poly<FqElem>> roots;
  for (const auto& g : factors_) {
    auto r = quotient_sqrt(rem(rep, g), g);
    if (!r) return {};
    roots.push_back(*r);
  }
  std::size_t k = factors_.size();
  std::vector<Poly<FqElem>> out;
  for (std::size_t mask = 0; mask < (std::size_t(1) << (k - 1)); ++mask) {
    std::vector<std::pair<Poly<FqElem>, Poly<FqElem>>> sys;
    sys.push_back({roots[0], factors_[0]});
    for (std::size_t j = 1; j < k; ++j) {
      bool flip = (mask >> (j - 1)) & 1u;
      sys.push_back({flip ? -roots[j] : roots[j], factors_[j]});
    }
    out.push_back(k == 1 ? roots[0] : crt(sys));
  }
  return out;
}

}  // namespace chab
