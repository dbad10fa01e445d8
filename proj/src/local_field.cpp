#include "chab/local_field.hpp"

#include <algorithm>
#include <sstream>

namespace chab {

namespace {

long ceil_div(long a, long b) {
  long q = a / b, r = a % b;
  return r > 0 ? q + 1 : q;
}

// Fixed lifts of the standard irreducible polynomials over F2 (all have the
// form x^f + x + 1 except the trivial degree-1 case).
unsigned conway_low_bits(int f) {
  switch (f) {
    case 1: return 0u;
    case 2: return 0b11u;
    case 3: return 0b011u;
    case 4: return 0b0011u;
    default: raise(ErrorCode::kTooLarge, "residue degree capped at 4");
  }
}

}  // namespace

LocalFieldDesc LocalFieldDesc::q2() {
  LocalFieldDesc d;
  d.residue_degree = 1;
  d.eisenstein = {{Int(-2)}, {Int(1)}};
  return d;
}

LocalFieldDesc LocalFieldDesc::ramified_2root(int e) {
  LocalFieldDesc d;
  d.residue_degree = 1;
  d.eisenstein.assign(e + 1, {Int(0)});
  d.eisenstein[0] = {Int(-2)};
  d.eisenstein[e] = {Int(1)};
  return d;
}

std::string LocalFieldDesc::canonical_string() const {
  std::ostringstream os;
  os << "localfield{f=" << residue_degree << ";E=";
  for (std::size_t i = 0; i < eisenstein.size(); ++i) {
    if (i) os << "|";
    for (std::size_t j = 0; j < eisenstein[i].size(); ++j) {
      if (j) os << ",";
      os << eisenstein[i][j].str();
    }
  }
  os << "}";
  return os.str();
}

// ---------------------------------------------------------------------------
// LocalElement

LocalElement::LocalElement(LocalFieldPtr field, std::vector<Dyadic> coords, long prec)
    : field_(std::move(field)), coords_(std::move(coords)), prec_(prec) {}

bool LocalElement::is_apparent_zero() const {
  for (const auto& c : coords_)
    if (!c.is_zero()) return false;
  return true;
}

long LocalElement::val() const {
  long v = kValInfinity;
  int e = field_->e(), f = field_->f();
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < f; ++j) {
      const Dyadic& c = coords_[std::size_t(i) * f + j];
      if (!c.is_zero()) v = std::min(v, e * c.val2() + i);
    }
  if (v == kValInfinity)
    raise(ErrorCode::kApparentZero, "valuation of element with no known digits");
  return v;
}

long LocalElement::val_lb() const { return is_apparent_zero() ? prec_ : val(); }

LocalElement LocalElement::with_precision(long prec) const {
  return field_->from_coords(coords_, std::min(prec, prec_));
}

std::string LocalElement::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (k) os << ", ";
    os << coords_[k].str();
  }
  os << " ;mod l^" << prec_ << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// LocalField

LocalFieldPtr LocalField::make(const LocalFieldDesc& desc, long precision) {
  auto F = std::shared_ptr<LocalField>(new LocalField());
  F->desc_ = desc;
  F->f_ = desc.residue_degree;
  if (F->f_ < 1 || F->f_ > 4)
    raise(ErrorCode::kTooLarge, "residue degree must be in 1..4");
  if (desc.eisenstein.size() < 2) raise(ErrorCode::kBadInput, "eisenstein degree < 1");
  F->e_ = int(desc.eisenstein.size()) - 1;
  F->n_ = F->e_ * F->f_;
  if (F->n_ > 64) raise(ErrorCode::kTooLarge, "field degree capped at 64");
  F->prec_ = precision > 0 ? precision : 12 * F->e_ + 24;
  F->conway_mask_ = conway_low_bits(F->f_);

  // Eisenstein invariants: leading coefficient 1, all lower coefficients
  // even, constant term exactly 2*unit.
  const auto& E = desc.eisenstein;
  auto coeff_at = [&](int i, int j) -> Int {
    return j < int(E[i].size()) ? E[i][j] : Int(0);
  };
  for (int j = 0; j < F->f_; ++j) {
    Int lead = coeff_at(F->e_, j);
    if (lead != (j == 0 ? 1 : 0))
      raise(ErrorCode::kBadInput, "eisenstein polynomial must be monic");
  }
  unsigned c0_half_mask = 0;
  for (int i = 0; i < F->e_; ++i)
    for (int j = 0; j < F->f_; ++j) {
      Int c = coeff_at(i, j);
      if (c != 0 && (c & 1) != 0)
        raise(ErrorCode::kBadInput, "eisenstein coefficient with odd entry");
      if (i == 0 && c != 0 && ((c >> 1) & 1) != 0) c0_half_mask |= 1u << j;
    }
  if (c0_half_mask == 0)
    raise(ErrorCode::kBadInput, "constant term of eisenstein polynomial is not 2*unit");

  // w^(f+t) reduction rows from the fixed lift x^f + x + 1 (f >= 2).
  if (F->f_ >= 2) {
    std::vector<Dyadic> base(F->f_);
    base[0] = Dyadic(-1);
    base[1] = Dyadic(-1);
    F->urows_.push_back(base);
    for (int t = 1; t <= F->f_ - 2; ++t) {
      const auto& prev = F->urows_.back();
      std::vector<Dyadic> next(F->f_);
      for (int i = 1; i < F->f_; ++i) next[i] = prev[i - 1];
      for (int i = 0; i < F->f_; ++i)
        next[i] = next[i] + prev[F->f_ - 1] * base[i];
      F->urows_.push_back(next);
    }
  }

  // lambda^(e+t) reduction rows. R_0[i] = -E_i as an unramified element.
  {
    std::vector<UCoef> r0(F->e_);
    for (int i = 0; i < F->e_; ++i) {
      UCoef u(F->f_);
      for (int j = 0; j < F->f_; ++j) u[j] = Dyadic(-coeff_at(i, j));
      r0[i] = u;
    }
    F->rows_.push_back(r0);
    for (int t = 1; t <= F->e_ - 2; ++t) {
      const auto& prev = F->rows_.back();
      std::vector<UCoef> next(F->e_, UCoef(F->f_));
      for (int i = 1; i < F->e_; ++i) next[i] = prev[i - 1];
      for (int i = 0; i < F->e_; ++i) {
        UCoef prod = F->umul(prev[F->e_ - 1], r0[i]);
        for (int j = 0; j < F->f_; ++j) next[i][j] = next[i][j] + prod[j];
      }
      F->rows_.push_back(next);
    }
  }

  // H = lambda^e / 2 = -(sum_i E_i lambda^i)/2, a unit by the Eisenstein
  // condition; used for negative lambda powers and the level-2e map.
  F->h_coords_.assign(F->n_, Dyadic());
  for (int i = 0; i < F->e_; ++i)
    for (int j = 0; j < F->f_; ++j) {
      Int c = coeff_at(i, j);
      if (c != 0) F->h_coords_[std::size_t(i) * F->f_ + j] = Dyadic(-c, -1);
    }

  // Level-2e data: 2 = lambda^e * H^{-1}; the squaring map on the level-2e
  // graded piece is c -> c^2 + h0 c with h0 = res(H)^-1.
  F->as_h0_ = F->res_inv(c0_half_mask);
  F->as_image_.assign(std::size_t(1) << F->f_, false);
  for (unsigned c = 0; c < (1u << F->f_); ++c)
    F->as_image_[F->res_mul(c, c) ^ F->res_mul(F->as_h0_, c)] = true;
  unsigned count = 0;
  F->as_rep_ = 0;
  for (unsigned c = 0; c < (1u << F->f_); ++c) {
    if (F->as_image_[c]) ++count;
    else if (F->as_rep_ == 0) F->as_rep_ = c;
  }
  if (count != (1u << (F->f_ - 1)) || F->as_rep_ == 0)
    raise(ErrorCode::kInternalMismatch, "level-2e squaring image has wrong size");
  return F;
}

std::vector<Dyadic> LocalField::reduce_coords(std::vector<Dyadic> coords, long prec) const {
  for (int i = 0; i < e_; ++i) {
    long beta = ceil_div(prec - i, e_);
    for (int j = 0; j < f_; ++j) {
      auto& c = coords[std::size_t(i) * f_ + j];
      c = c.reduced_mod(beta);
    }
  }
  return coords;
}

UCoef LocalField::umul(const UCoef& a, const UCoef& b) const {
  if (f_ == 1) return {a[0] * b[0]};
  std::vector<Dyadic> conv(2 * f_ - 1);
  for (int i = 0; i < f_; ++i)
    for (int j = 0; j < f_; ++j) conv[i + j] = conv[i + j] + a[i] * b[j];
  UCoef out(conv.begin(), conv.begin() + f_);
  for (int t = 0; t <= f_ - 2; ++t) {
    const Dyadic& hi = conv[f_ + t];
    if (hi.is_zero()) continue;
    for (int i = 0; i < f_; ++i) out[i] = out[i] + hi * urows_[t][i];
  }
  return out;
}

LocalElement LocalField::zero(long prec) const {
  return LocalElement(shared_from_this(), std::vector<Dyadic>(n_),
                      prec > 0 ? prec : prec_);
}

LocalElement LocalField::one(long prec) const {
  std::vector<Dyadic> c(n_);
  c[0] = Dyadic::one();
  return from_coords(std::move(c), prec);
}

LocalElement LocalField::uniformizer(long prec) const {
  std::vector<Dyadic> c(n_);
  if (e_ == 1)
    c[0] = Dyadic(2);  // Q2 path: lambda is 2 itself
  else
    c[std::size_t(1) * f_] = Dyadic::one();
  return from_coords(std::move(c), prec);
}

LocalElement LocalField::from_rational(const Rat& r, long prec) const {
  long p = prec > 0 ? prec : prec_;
  std::vector<Dyadic> c(n_);
  c[0] = Dyadic::from_rational(r, ceil_div(p, e_));
  return LocalElement(shared_from_this(), std::move(c), p);
}

LocalElement LocalField::from_coords(std::vector<Dyadic> coords, long prec) const {
  long p = prec > 0 ? prec : prec_;
  if (int(coords.size()) != n_) raise(ErrorCode::kBadInput, "coordinate count");
  return LocalElement(shared_from_this(), reduce_coords(std::move(coords), p), p);
}

LocalElement LocalField::lift_mask(unsigned mask, long prec) const {
  std::vector<Dyadic> c(n_);
  for (int j = 0; j < f_; ++j)
    if ((mask >> j) & 1u) c[j] = Dyadic::one();
  return from_coords(std::move(c), prec);
}

LocalElement LocalField::one_plus(unsigned mask, long k, long prec) const {
  long p = prec > 0 ? prec : prec_;
  return add(one(p), mul(lift_mask(mask, p), lambda_pow(k, p)));
}

LocalElement LocalField::lambda_pow(long k, long prec) const {
  long p = prec > 0 ? prec : prec_;
  long r = ((k % e_) + e_) % e_;
  long q = (k - r) / e_;
  std::vector<Dyadic> mono(n_);
  mono[std::size_t(r) * f_] = Dyadic::one();
  LocalElement out(shared_from_this(), std::move(mono), p + std::max(0L, -k) + e_);
  if (q != 0) {
    // lambda^e = 2*H with H a unit; negative powers via the unit inverse.
    LocalElement H(shared_from_this(), h_coords_, p + std::abs(q) * e_ + 2 * e_);
    LocalElement Hq = pow(H, q);
    out = mul(out, Hq);
    out = mul_dyadic(out, Dyadic(Int(1), q));
  }
  return out.with_precision(p);
}

LocalElement LocalField::add(const LocalElement& a, const LocalElement& b) const {
  long p = std::min(a.precision(), b.precision());
  std::vector<Dyadic> c(n_);
  for (int k = 0; k < n_; ++k) c[k] = a.coords()[k] + b.coords()[k];
  return LocalElement(shared_from_this(), reduce_coords(std::move(c), p), p);
}

LocalElement LocalField::sub(const LocalElement& a, const LocalElement& b) const {
  return add(a, neg(b));
}

LocalElement LocalField::neg(const LocalElement& a) const {
  std::vector<Dyadic> c(n_);
  for (int k = 0; k < n_; ++k) c[k] = -a.coords()[k];
  return LocalElement(shared_from_this(), std::move(c), a.precision());
}

LocalElement LocalField::mul(const LocalElement& a, const LocalElement& b) const {
  long p = std::min(a.precision() + b.val_lb(), b.precision() + a.val_lb());
  std::vector<UCoef> conv(2 * e_ - 1, UCoef(f_));
  for (int i = 0; i < e_; ++i) {
    UCoef ai(a.coords().begin() + std::size_t(i) * f_,
             a.coords().begin() + std::size_t(i + 1) * f_);
    bool zi = true;
    for (const auto& d : ai) zi = zi && d.is_zero();
    if (zi) continue;
    for (int j = 0; j < e_; ++j) {
      UCoef bj(b.coords().begin() + std::size_t(j) * f_,
               b.coords().begin() + std::size_t(j + 1) * f_);
      UCoef prod = umul(ai, bj);
      for (int t = 0; t < f_; ++t) conv[i + j][t] = conv[i + j][t] + prod[t];
    }
  }
  std::vector<Dyadic> out(n_);
  for (int i = 0; i < e_; ++i)
    for (int j = 0; j < f_; ++j) out[std::size_t(i) * f_ + j] = conv[i][j];
  for (int t = 0; t <= e_ - 2; ++t) {
    const UCoef& hi = conv[e_ + t];
    bool z = true;
    for (const auto& d : hi) z = z && d.is_zero();
    if (z) continue;
    for (int i = 0; i < e_; ++i) {
      UCoef prod = umul(hi, rows_[t][i]);
      for (int j = 0; j < f_; ++j)
        out[std::size_t(i) * f_ + j] = out[std::size_t(i) * f_ + j] + prod[j];
    }
  }
  return LocalElement(shared_from_this(), reduce_coords(std::move(out), p), p);
}

LocalElement LocalField::mul_dyadic(const LocalElement& a, const Dyadic& d) const {
  long p = a.precision() + e_ * d.val2();
  if (d.is_zero()) raise(ErrorCode::kBadInput, "scaling by zero dyadic");
  std::vector<Dyadic> c(n_);
  for (int k = 0; k < n_; ++k) c[k] = a.coords()[k] * d;
  return LocalElement(shared_from_this(), reduce_coords(std::move(c), p), p);
}

unsigned LocalField::residue_mask(const LocalElement& a) const {
  if (a.val_lb() < 0) raise(ErrorCode::kBadInput, "residue of non-integral element");
  unsigned m = 0;
  for (int j = 0; j < f_; ++j)
    if (!a.coords()[j].is_zero() && a.coords()[j].val2() == 0) m |= 1u << j;
  return m;
}

LocalElement LocalField::inverse_unit(const LocalElement& u) const {
  long p = u.precision();
  if (p <= 0) raise(ErrorCode::kPrecisionExhausted, "inverse at nonpositive precision");
  unsigned r = residue_mask(u);
  if (r == 0) raise(ErrorCode::kDivisionByApparentZero, "unit inverse of non-unit");
  LocalElement y = lift_mask(res_inv(r), p);
  LocalElement uu = u.with_precision(p);
  for (int iter = 0; iter < 80; ++iter) {
    LocalElement t = sub(one(p), mul(uu, y));
    if (t.is_apparent_zero()) return y;
    y = add(y, mul(y, t));
  }
  raise(ErrorCode::kInternalMismatch, "unit inversion did not converge");
}

LocalElement LocalField::inverse(const LocalElement& a) const {
  if (a.is_apparent_zero())
    raise(ErrorCode::kDivisionByApparentZero, "inverse of apparent zero");
  long v = a.val();
  if (v == 0) return inverse_unit(a);
  LocalElement u = mul(a, lambda_pow(-v, a.precision() - v + e_));
  LocalElement iu = inverse_unit(u.with_precision(a.precision() - v));
  return mul(iu, lambda_pow(-v, a.precision() - 2 * v + e_))
      .with_precision(a.precision() - 2 * v);
}

LocalElement LocalField::div(const LocalElement& a, const LocalElement& b) const {
  return mul(a, inverse(b));
}

LocalElement LocalField::pow(const LocalElement& a, long nexp) const {
  if (nexp < 0) return pow(inverse(a), -nexp);
  LocalElement acc = one(a.precision() + e_ * std::max(0L, -a.val_lb()) * nexp);
  LocalElement base = a;
  unsigned long n = (unsigned long)nexp;
  while (n) {
    if (n & 1) acc = mul(acc, base);
    n >>= 1;
    if (n) base = mul(base, base);
  }
  return acc;
}

bool LocalField::equal_to_precision(const LocalElement& a, const LocalElement& b) const {
  return sub(a, b).is_apparent_zero();
}

unsigned LocalField::res_mul(unsigned a, unsigned b) const {
  unsigned acc = 0;
  for (int j = 0; j < f_; ++j)
    if ((b >> j) & 1u) acc ^= a << j;
  for (int k = 2 * f_ - 2; k >= f_; --k)
    if ((acc >> k) & 1u) acc ^= (1u << k) | (conway_mask_ << (k - f_));
  return acc & ((1u << f_) - 1);
}

unsigned LocalField::res_pow(unsigned a, unsigned long k) const {
  unsigned acc = 1, base = a;
  while (k) {
    if (k & 1) acc = res_mul(acc, base);
    k >>= 1;
    if (k) base = res_mul(base, base);
  }
  return acc;
}

unsigned LocalField::res_inv(unsigned a) const {
  if (a == 0) raise(ErrorCode::kDivisionByApparentZero, "residue inverse of 0");
  return res_pow(a, (1ul << f_) - 2);
}

unsigned LocalField::res_sqrt(unsigned a) const {
  return res_pow(a, 1ul << (f_ - 1));
}

unsigned LocalField::level2e_map(unsigned c) const {
  return res_mul(c, c) ^ res_mul(as_h0_, c);
}

bool LocalField::level2e_solvable(unsigned delta, unsigned* sol) const {
  for (unsigned c = 0; c < (1u << f_); ++c)
    if (level2e_map(c) == delta) {
      if (sol) *sol = c;
      return true;
    }
  return false;
}

}  // namespace chab
