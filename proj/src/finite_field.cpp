#include "chab/finite_field.hpp"

#include <sstream>

namespace chab {

namespace {

bool is_prime_small(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

using Digits = std::vector<int>;

Digits poly_mul_mod(const Digits& a, const Digits& b, const Digits& mod, int p) {
  std::vector<int> c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  // mod is monic of degree m
  std::size_t m = mod.size() - 1;
  for (std::size_t k = c.size(); k-- > m;) {
    int t = c[k];
    if (!t) continue;
    c[k] = 0;
    for (std::size_t j = 0; j < m; ++j)
      c[k - m + j] = ((c[k - m + j] - t * mod[j]) % p + p * p) % p;
  }
  c.resize(m);
  return c;
}

bool has_root(const Digits& f, int p) {
  for (int x = 0; x < p; ++x) {
    long acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = (acc * x + f[i]) % p;
    if (acc == 0) return true;
  }
  return false;
}

// Lexicographically smallest monic irreducible of degree m over F_p; for
// m <= 3 rootlessness suffices, which covers the supported range.
Digits smallest_irreducible(int p, int m) {
  if (m > 3) raise(ErrorCode::kTooLarge, "finite field extension degree capped at 3");
  long count = 1;
  for (int i = 0; i < m; ++i) count *= p;
  for (long code = 0; code < count; ++code) {
    Digits f(m + 1, 0);
    long c = code;
    for (int i = 0; i < m; ++i) {
      f[i] = int(c % p);
      c /= p;
    }
    f[m] = 1;
    if (!has_root(f, p)) return f;
  }
  raise(ErrorCode::kInternalMismatch, "no irreducible polynomial found");
}

}  // namespace

FqCtxPtr FqCtx::make(int p, int m) {
  if (!is_prime_small(p) || p == 2)
    raise(ErrorCode::kBadInput, "characteristic must be an odd prime");
  long q = 1;
  for (int i = 0; i < m; ++i) q *= p;
  if (q > 256) raise(ErrorCode::kTooLarge, "finite field order capped at 256");

  auto F = std::shared_ptr<FqCtx>(new FqCtx());
  F->p_ = p;
  F->m_ = m;
  F->q_ = int(q);

  Digits mod = m >= 2 ? smallest_irreducible(p, m) : Digits{0, 1};
  auto decode = [&](int v) {
    Digits d(std::max(m, 1), 0);
    for (int i = 0; i < m; ++i) {
      d[i] = v % p;
      v /= p;
    }
    return d;
  };
  auto encode = [&](const Digits& d) {
    int v = 0;
    for (int i = m; i-- > 0;) v = v * p + d[i];
    return std::uint16_t(v);
  };

  F->add_.resize(std::size_t(q) * q);
  F->mul_.resize(std::size_t(q) * q);
  F->neg_.resize(q);
  F->inv_.resize(q, 0);
  F->sqrt_.assign(q, kNoRoot);
  for (int a = 0; a < q; ++a) {
    Digits da = decode(a);
    Digits dn(std::max(m, 1));
    for (int i = 0; i < m; ++i) dn[i] = (p - da[i]) % p;
    F->neg_[a] = encode(dn);
    for (int b = 0; b < q; ++b) {
      Digits ds(std::max(m, 1));
      Digits db = decode(b);
      for (int i = 0; i < m; ++i) ds[i] = (da[i] + db[i]) % p;
      F->add_[F->idx(std::uint16_t(a), std::uint16_t(b))] = encode(ds);
      std::uint16_t prod = m == 1 ? std::uint16_t((long(a) * b) % p)
                                  : encode(poly_mul_mod(da, db, mod, p));
      F->mul_[F->idx(std::uint16_t(a), std::uint16_t(b))] = prod;
    }
  }
  for (int a = 1; a < q; ++a) {
    for (int b = 1; b < q; ++b)
      if (F->mul_[F->idx(std::uint16_t(a), std::uint16_t(b))] == 1) {
        F->inv_[a] = std::uint16_t(b);
        break;
      }
    if (F->inv_[a] == 0)
      raise(ErrorCode::kInternalMismatch, "finite field inverse table");
  }
  F->sqrt_[0] = 0;
  for (int a = 1; a < q; ++a) {
    std::uint16_t s = F->mul_[F->idx(std::uint16_t(a), std::uint16_t(a))];
    if (F->sqrt_[s] == kNoRoot) F->sqrt_[s] = std::uint16_t(a);
  }
  return F;
}

std::uint16_t FqCtx::pow(std::uint16_t a, long e) const {
  if (e < 0) return pow(inv(a), -e);
  std::uint16_t acc = 1, base = a;
  while (e) {
    if (e & 1) acc = mul(acc, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return acc;
}

std::uint16_t FqCtx::from_int(long v) const {
  long r = v % p_;
  if (r < 0) r += p_;
  return std::uint16_t(r);
}

std::string FqCtx::canonical_string() const {
  std::ostringstream os;
  os << "Fq{" << p_ << "^" << m_ << "}";
  return os.str();
}

}  // namespace chab
