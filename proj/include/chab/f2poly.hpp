#pragma once

#include <cstdint>

namespace chab::f2 {

// F2[x] on bit masks, degree <= 63.

inline int deg(std::uint64_t a) { return a ? 63 - __builtin_clzll(a) : -1; }

inline std::uint64_t mod(std::uint64_t a, std::uint64_t g) {
  int dg = deg(g);
  for (int d = deg(a); d >= dg; d = deg(a)) a ^= g << (d - dg);
  return a;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t g) {
  std::uint64_t acc = 0;
  while (b) {
    if (b & 1) acc ^= a;
    b >>= 1;
    a = mod(a << 1, g);
  }
  return acc;
}

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t acc = 0;
  int i = 0;
  while (b) {
    if (b & 1) acc ^= a << i;
    b >>= 1;
    ++i;
  }
  return acc;
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a = mod(a, b);
    std::uint64_t t = a;
    a = b;
    b = t;
  }
  return a;
}

inline std::uint64_t frob_pow(std::uint64_t g, int k) {
  std::uint64_t x = mod(0b10, g);
  for (int i = 0; i < k; ++i) x = mulmod(x, x, g);
  return x;
}

inline bool irreducible(std::uint64_t g) {
  int d = deg(g);
  if (d <= 0) return false;
  if ((g & 1) == 0) return d == 1;
  if (frob_pow(g, d) != mod(0b10, g)) return false;
  for (int p = 2; p <= d; ++p) {
    bool prime = p >= 2;
    for (int q = 2; q * q <= p; ++q)
      if (p % q == 0) prime = false;
    if (!prime || d % p != 0) continue;
    std::uint64_t xp = frob_pow(g, d / p) ^ mod(0b10, g);
    if (gcd(g, xp) != 1) return false;
  }
  return true;
}

// Smallest irreducible of degree d, found by scan.
inline std::uint64_t smallest_irreducible(int d) {
  for (std::uint64_t tail = 0;; ++tail) {
    std::uint64_t g = (std::uint64_t(1) << d) | tail;
    if (irreducible(g)) return g;
  }
}

inline std::uint64_t eval_poly(std::uint64_t coeffs, std::uint64_t x,
                               std::uint64_t g) {
  // coeffs is an F2 polynomial in the curve variable; x an element of
  // F_{2^d} presented modulo g.
  std::uint64_t acc = 0;
  for (int i = deg(coeffs); i >= 0; --i) {
    acc = mulmod(acc, x, g);
    if ((coeffs >> i) & 1) acc ^= 1;
  }
  return acc;
}

inline std::uint64_t derivative(std::uint64_t a) {
  std::uint64_t out = 0;
  for (int i = 1; i <= deg(a); i += 2)
    if ((a >> i) & 1) out |= std::uint64_t(1) << (i - 1);
  return out;
}

}  // namespace chab::f2
