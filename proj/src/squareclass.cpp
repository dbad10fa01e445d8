#include "chab/squareclass.hpp"

#include <sstream>

namespace chab {

SquareClassBasis::SquareClassBasis(LocalFieldPtr field) : field_(std::move(field)) {
  const auto& F = *field_;
  reps_.push_back(F.uniformizer());
  for (long k = 1; k <= 2 * F.e() - 1; k += 2)
    for (int j = 0; j < F.f(); ++j) reps_.push_back(F.one_plus(1u << j, k));
  reps_.push_back(F.one_plus(F.level2e_coset_rep(), 2 * F.e()));
  if (reps_.size() != dim())
    raise(ErrorCode::kInternalMismatch, "square class basis size");

  std::ostringstream os;
  os << F.canonical_string() << ";basis";
  for (const auto& r : reps_) os << ";" << r.str();
  fingerprint_ = fnv_hex(fnv1a(os.str()));

  // Independence certificate: each representative decomposes to its own
  // coordinate vector; the homomorphism property then rules out square
  // sub-products.
  for (std::size_t i = 0; i < reps_.size(); ++i) {
    BitVec b = decompose(reps_[i]);
    BitVec want(dim());
    want.set(i, true);
    if (!(b == want))
      raise(ErrorCode::kInternalMismatch, "basis element does not self-decompose");
  }
}

SquareClassBasis::Stripped SquareClassBasis::strip(const LocalElement& x) const {
  const auto& F = *field_;
  const long e = F.e();
  if (x.is_apparent_zero())
    raise(ErrorCode::kApparentZero, "square class of apparent zero");

  BitVec bits(dim());
  long v = x.val();
  if (((v % 2) + 2) % 2 == 1) bits.set(index_lambda(), true);
  long half = (v - (((v % 2) + 2) % 2)) / 2;
  LocalElement u = F.mul(x, F.lambda_pow(-v, x.precision() - v + e));
  LocalElement acc = F.lambda_pow(half, x.precision() + std::abs(half) + e);

  // Residue normalization: every residue is a square in characteristic 2.
  unsigned r0 = F.residue_mask(u);
  if (r0 == 0) raise(ErrorCode::kInternalMismatch, "unit with zero residue");
  if (r0 != 1) {
    std::vector<Dyadic> cc(F.degree());
    unsigned m = F.res_sqrt(r0);
    for (int j = 0; j < F.f(); ++j)
      if ((m >> j) & 1u) cc[j] = Dyadic::one();
    LocalElement c = F.from_coords(std::move(cc), u.precision() + 2 * e);
    u = F.div(u, F.mul(c, c));
    acc = F.mul(acc, c);
  }

  for (int guard = 0; guard < 4 * F.e() + 32; ++guard) {
    if (u.precision() < 2 * e + 2)
      raise(ErrorCode::kPrecisionExhausted, "square class stripping hit the precision horizon");
    LocalElement t = F.sub(u, F.one(u.precision()));
    if (t.is_apparent_zero()) return {bits, acc, u};
    long k = t.val();
    if (k >= 2 * e + 1) return {bits, acc, u};
    if (k <= 0) raise(ErrorCode::kInternalMismatch, "non-unit in stripping loop");
    unsigned delta = F.residue_mask(F.mul(t, F.lambda_pow(-k, t.precision() - k + e)));
    if (k % 2 == 1) {
      for (int j = 0; j < F.f(); ++j)
        if ((delta >> j) & 1u) {
          bits.flip(index_level(k, j));
          u = F.mul(u, F.one_plus(1u << j, k, u.precision()));
        }
    } else if (k < 2 * e) {
      LocalElement s = F.one_plus(F.res_sqrt(delta), k / 2, u.precision() + e);
      u = F.div(u, F.mul(s, s));
      acc = F.mul(acc, s);
    } else {  // k == 2e
      unsigned c;
      if (F.level2e_solvable(delta, &c)) {
        LocalElement s = F.one_plus(c, e, u.precision() + e);
        u = F.div(u, F.mul(s, s));
        acc = F.mul(acc, s);
      } else {
        bits.flip(index_top());
        u = F.mul(u, F.one_plus(F.level2e_coset_rep(), 2 * e, u.precision()));
      }
    }
  }
  raise(ErrorCode::kInternalMismatch, "stripping loop did not terminate");
}

BitVec SquareClassBasis::decompose(const LocalElement& x) const {
  return strip(x).bits;
}

std::optional<LocalElement> SquareClassBasis::sqrt(const LocalElement& x) const {
  Stripped s = strip(x);
  if (!s.bits.is_zero()) return std::nullopt;
  return field_->mul(s.square_part, sqrt_one_plus_small(s.tail));
}

LocalElement sqrt_one_plus_small(const LocalElement& u) {
  const auto& F = *u.field();
  long target = u.precision() - F.e();
  if (target <= 0) raise(ErrorCode::kPrecisionExhausted, "sqrt at exhausted precision");
  // Newton on the lifted canonical representative: interval tracking charges
  // e digits per division, but the root of the lift agrees with the root of
  // the true value modulo lambda^(prec - e), so inflate and truncate once.
  long iters = 2;
  while ((1L << iters) < u.precision() + 2) ++iters;
  long work = u.precision() + F.e() * (iters + 6);
  LocalElement ul = F.from_coords(u.coords(), work);
  LocalElement y = F.one(work);
  for (int iter = 0; iter < 140; ++iter) {
    LocalElement err = F.sub(ul, F.mul(y, y));
    if (err.is_apparent_zero() ||
        (!err.is_apparent_zero() && err.val() >= target + F.e()))
      return y.with_precision(target);
    y = F.add(y, F.div(err, F.mul_dyadic(y, Dyadic(2))));
  }
  raise(ErrorCode::kInternalMismatch, "square root iteration did not converge");
}

}  // namespace chab
