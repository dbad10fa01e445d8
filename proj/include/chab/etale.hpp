#pragma once

#include <memory>
#include <string>
#include <vector>

#include "chab/bitvec.hpp"
#include "chab/linalg.hpp"
#include "chab/poly.hpp"
#include "chab/squareclass.hpp"

namespace chab {

// The descent-map value of a Mumford a-polynomial, as a representative in
// k[x]/<f>: (-c)^deg(a) * (a - a1*f1) reduced mod f, where d = gcd(a, f),
// a1 = a/d, f1 = f/d and c is the leading coefficient of f. When a is
// coprime to f this is just (-c)^deg(a) * a. The optional multiplier scales
// odd-degree values (quadratic twists).
template <class K>
Poly<K> descent_rep(const Poly<K>& a, const Poly<K>& f, const K& twist) {
  using Ops = FieldOps<K>;
  if (a.is_zero()) raise(ErrorCode::kBadInput, "descent value of zero polynomial");
  Poly<K> d = gcd_monic(a, f);
  Poly<K> rep;
  if (d.deg() == 0) {
    rep = rem(a, f);
  } else {
    Poly<K> a1 = divexact(a, d);
    Poly<K> f1 = divexact(f, d);
    rep = rem(a - a1 * f1, f);
  }
  K scale = Ops::one(a.ctx);
  K mc = Ops::neg(f.lead());
  if ((a.deg() % 2) != 0) mc = Ops::mul(mc, twist);
  for (long i = 0; i < a.deg(); ++i) scale = Ops::mul(scale, mc);
  return rep * scale;
}

template <class K>
Poly<K> descent_rep(const Poly<K>& a, const Poly<K>& f) {
  return descent_rep(a, f, FieldOps<K>::one(a.ctx));
}

// ---------------------------------------------------------------------------
// Local side: L2 = L (x) Q2 as a verified product of local fields.

struct FactorCertificateSpec {
  // "newton_polygon", "eisenstein_shift", "residue_irreducible", "hint_only"
  std::string kind = "hint_only";
  Int shift = 0;  // for eisenstein_shift: x -> x + shift
};

struct EtaleFactorSpec {
  LocalFieldDesc field;
  std::vector<Rat> poly;        // monic factor of f/lc over Q2, ascending
  std::vector<Dyadic> root;     // seed coordinates for the image of theta
  bool newton_refine = true;
  FactorCertificateSpec certificate;
};

struct EtaleFactor {
  LocalFieldPtr field;
  std::shared_ptr<SquareClassBasis> basis;
  Poly<LocalElement> poly;  // over the prime field
  LocalElement root;
  std::string cert_kind;
  bool certified = false;
};

// Verified presentation of Q2[x]/<f/lc> as a product of local fields,
// with the embedding of theta into each factor and the change of basis
// needed to pull products of factor values back to polynomials in theta.
class LocalFactorization {
 public:
  // prime: the Q2 context used for polynomial arithmetic on the curve side.
  // fmonic: f divided by its leading coefficient, with rational coefficients.
  static LocalFactorization verify(const Poly<Rat>& fmonic, LocalFieldPtr prime,
                                   const std::vector<EtaleFactorSpec>& specs);

  const LocalFieldPtr& prime() const { return prime_; }
  const std::vector<EtaleFactor>& factors() const { return factors_; }
  std::size_t class_dim() const { return class_dim_; }
  bool fully_certified() const { return certified_; }
  const std::string& fingerprint() const { return fingerprint_; }
  long degree() const { return degree_; }

  // Component-wise image of a theta-polynomial value.
  std::vector<LocalElement> embed(const Poly<LocalElement>& rep) const;
  std::vector<LocalElement> embed_rat(const Poly<Rat>& rep) const;
  // Concatenated square class over the factor bases.
  BitVec classify(const std::vector<LocalElement>& values) const;
  BitVec class_of_rep(const Poly<LocalElement>& rep) const;
  // Inverse of embed: the unique polynomial of degree < deg f with the given
  // factor values.
  Poly<LocalElement> rep_from_values(const std::vector<LocalElement>& values) const;
  // Square roots of rep modulo f, one per sign vector modulo global sign;
  // empty when rep is not a square in some factor.
  std::vector<Poly<LocalElement>> sqrts_mod_f(const Poly<LocalElement>& rep) const;

  LocalElement lift_to_prime(const Rat& r) const { return prime_->from_rational(r); }
  Poly<LocalElement> lift_poly(const Poly<Rat>& p) const;

 private:
  LocalFieldPtr prime_;
  std::vector<EtaleFactor> factors_;
  std::size_t class_dim_ = 0;
  long degree_ = 0;
  bool certified_ = true;
  std::string fingerprint_;
  // Columns of the inverse change-of-basis matrix: coefficient t of the
  // preimage is sum_k inv_cols_[k][t] * coordvec[k], with coordvec the
  // concatenated factor-value coordinates as prime-field scalars.
  std::vector<std::vector<LocalElement>> inv_cols_;
};

// ---------------------------------------------------------------------------
// Finite-field side: Fq[x]/<f> with exact square classes, used by the oracle
// and the finite-field instantiations of the halving and q-map code.

class FqEtale {
 public:
  FqEtale(FqCtxPtr F, Poly<FqElem> f);

  const FqCtxPtr& field() const { return F_; }
  const Poly<FqElem>& fpoly() const { return f_; }
  const std::vector<Poly<FqElem>>& factors() const { return factors_; }
  std::size_t class_dim() const { return factors_.size(); }

  BitVec class_of_rep(const Poly<FqElem>& rep) const;
  std::vector<Poly<FqElem>> sqrts_mod_f(const Poly<FqElem>& rep) const;

 private:
  FqCtxPtr F_;
  Poly<FqElem> f_;
  std::vector<Poly<FqElem>> factors_;
};

// Monic irreducible factors over Fq by root extraction and trial division.
std::vector<Poly<FqElem>> factor_squarefree_fq(const Poly<FqElem>& f);

}  // namespace chab
