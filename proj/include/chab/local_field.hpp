#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chab/dyadic.hpp"
#include "chab/errors.hpp"

namespace chab {

// Descriptor of a 2-adic local field, presented as an Eisenstein extension of
// an unramified subfield. The unramified subfield of residue degree f is
// Q2[w]/(g(w)) for a fixed integer lift g of an irreducible polynomial over
// F2; the Eisenstein polynomial has coefficients that are integer polynomials
// in w. Total degree over Q2 is e*f and v(lambda) = 1, v(2) = e.
struct LocalFieldDesc {
  int residue_degree = 1;
  // eisenstein[i] = coefficient of z^i as an integer vector in the w-power
  // basis (ascending); size e+1, leading coefficient must be the constant 1.
  std::vector<std::vector<Int>> eisenstein;

  static LocalFieldDesc q2();
  // z^e - 2, the totally ramified field Q2(2^(1/e)).
  static LocalFieldDesc ramified_2root(int e);

  std::string canonical_string() const;
};

class LocalField;
using LocalFieldPtr = std::shared_ptr<const LocalField>;

// Element of the unramified subfield: f dyadic coordinates in the w-basis.
using UCoef = std::vector<Dyadic>;

// Element of a local field carried with explicit absolute precision: the
// element is known modulo lambda^prec. Coordinates are stored for the basis
// lambda^i * w^j, i < e, j < f, canonically reduced against prec.
class LocalElement {
 public:
  LocalElement() = default;
  LocalElement(LocalFieldPtr field, std::vector<Dyadic> coords, long prec);

  const LocalFieldPtr& field() const { return field_; }
  long precision() const { return prec_; }
  const std::vector<Dyadic>& coords() const { return coords_; }

  bool is_apparent_zero() const;
  // lambda-adic valuation; error on apparent zero.
  long val() const;
  // Lower bound on valuation (= prec for apparent zeros).
  long val_lb() const;

  LocalElement with_precision(long prec) const;

  std::string str() const;

 private:
  friend class LocalField;
  LocalFieldPtr field_;
  std::vector<Dyadic> coords_;
  long prec_ = 0;
};

// Field context: validated descriptor plus precomputed reduction data.
// Immutable and shareable; all element operations are free of hidden state.
class LocalField : public std::enable_shared_from_this<LocalField> {
 public:
  static LocalFieldPtr make(const LocalFieldDesc& desc, long precision = 0);

  const LocalFieldDesc& desc() const { return desc_; }
  int e() const { return e_; }
  int f() const { return f_; }
  int degree() const { return n_; }
  long default_precision() const { return prec_; }
  // Zero-band width for ill-conditioned gcd detection, default prec/3.
  long tau() const { return prec_ / 3; }

  LocalElement zero(long prec = 0) const;
  LocalElement one(long prec = 0) const;
  LocalElement uniformizer(long prec = 0) const;
  LocalElement from_rational(const Rat& r, long prec = 0) const;
  LocalElement from_coords(std::vector<Dyadic> coords, long prec = 0) const;
  // 1 + (residue mask lifted) * lambda^k.
  LocalElement one_plus(unsigned mask, long k, long prec = 0) const;
  LocalElement lambda_pow(long k, long prec = 0) const;

  LocalElement add(const LocalElement& a, const LocalElement& b) const;
  LocalElement sub(const LocalElement& a, const LocalElement& b) const;
  LocalElement neg(const LocalElement& a) const;
  LocalElement mul(const LocalElement& a, const LocalElement& b) const;
  LocalElement mul_dyadic(const LocalElement& a, const Dyadic& d) const;
  LocalElement inverse(const LocalElement& a) const;
  LocalElement div(const LocalElement& a, const LocalElement& b) const;
  LocalElement pow(const LocalElement& a, long n) const;

  bool equal_to_precision(const LocalElement& a, const LocalElement& b) const;

  // Residue of a (valuation >= 0) element in F_{2^f}, as a bit mask over the
  // w-power basis of the residue field.
  unsigned residue_mask(const LocalElement& a) const;

  // Residue field helpers (masks over F_{2^f}).
  unsigned res_mul(unsigned a, unsigned b) const;
  unsigned res_inv(unsigned a) const;
  unsigned res_sqrt(unsigned a) const;  // Frobenius inverse, unique.
  unsigned res_pow(unsigned a, unsigned long k) const;
  // Artin-Schreier-type map at level 2e: c -> c^2 + h0*c.
  unsigned level2e_map(unsigned c) const;
  bool level2e_solvable(unsigned delta, unsigned* sol) const;
  unsigned level2e_coset_rep() const { return as_rep_; }

  std::string canonical_string() const { return desc_.canonical_string(); }

 private:
  LocalField() = default;

  std::vector<Dyadic> reduce_coords(std::vector<Dyadic> coords, long prec) const;
  UCoef umul(const UCoef& a, const UCoef& b) const;

  LocalElement inverse_unit(const LocalElement& u) const;
  LocalElement lift_mask(unsigned mask, long prec) const;

  LocalFieldDesc desc_;
  int e_ = 1, f_ = 1, n_ = 1;
  long prec_ = 0;
  unsigned conway_mask_ = 0;  // low f bits of x^f expressed over lower powers
  // w^(f+t) = sum_i urows_[t][i] w^i with exact integer entries, t = 0..f-2.
  std::vector<std::vector<Dyadic>> urows_;
  // lambda^(e+t) = sum_i rows_[t][i] lambda^i, t = 0..e-2.
  std::vector<std::vector<UCoef>> rows_;
  unsigned as_h0_ = 0;   // residue of (lambda^e / 2)^(-1)
  unsigned as_rep_ = 0;  // canonical coset representative outside the image
  std::vector<bool> as_image_;
  std::vector<Dyadic> h_coords_;  // H = lambda^e / 2, a unit

};

// Convenience operators; both operands must share the field.
inline LocalElement operator+(const LocalElement& a, const LocalElement& b) {
  return a.field()->add(a, b);
}
inline LocalElement operator-(const LocalElement& a, const LocalElement& b) {
  return a.field()->sub(a, b);
}
inline LocalElement operator-(const LocalElement& a) { return a.field()->neg(a); }
inline LocalElement operator*(const LocalElement& a, const LocalElement& b) {
  return a.field()->mul(a, b);
}
inline LocalElement operator/(const LocalElement& a, const LocalElement& b) {
  return a.field()->div(a, b);
}

}  // namespace chab
