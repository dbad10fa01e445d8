#pragma once

#include <optional>
#include <vector>

#include "chab/field_traits.hpp"

namespace chab {

// Dense matrix, row major.
template <class K>
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<K> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, const K& fill)
      : rows(r), cols(c), a(r * c, fill) {}
  K& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const K& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

// Gaussian elimination with full pivoting on the minimal valuation (local
// fields) or any certain nonzero (exact fields). Returns nullopt when the
// system is inconsistent; free variables are set to zero. Raises
// IllConditionedGcd when rank decisions fall into the ambiguous band.
template <class K>
std::optional<std::vector<K>> solve_linear(Matrix<K> A, std::vector<K> b,
                                           const typename FieldOps<K>::Ctx& ctx) {
  using Ops = FieldOps<K>;
  const std::size_t m = A.rows, n = A.cols;
  std::vector<std::size_t> colperm(n);
  for (std::size_t j = 0; j < n; ++j) colperm[j] = j;

  std::size_t rank = 0;
  for (; rank < m && rank < n; ++rank) {
    // pick pivot among A[rank.., rank..]
    bool found = false, ambiguous_seen = false;
    std::size_t pi = 0, pj = 0;
    long best = 0;
    for (std::size_t i = rank; i < m; ++i)
      for (std::size_t j = rank; j < n; ++j) {
        ZeroStatus st = Ops::status(A.at(i, j));
        if (st == ZeroStatus::kAmbiguous) ambiguous_seen = true;
        if (st != ZeroStatus::kNonZero) continue;
        long metric = Ops::pivot_metric(A.at(i, j));
        if (!found || metric < best) {
          found = true;
          best = metric;
          pi = i;
          pj = j;
        }
      }
    if (!found) {
      if (ambiguous_seen)
        raise(ErrorCode::kIllConditionedGcd, "rank decision in the ambiguous band");
      break;
    }
    if (pi != rank) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A.at(pi, j), A.at(rank, j));
      std::swap(b[pi], b[rank]);
    }
    if (pj != rank) {
      for (std::size_t i = 0; i < m; ++i) std::swap(A.at(i, pj), A.at(i, rank));
      std::swap(colperm[pj], colperm[rank]);
    }
    const K piv = A.at(rank, rank);
    for (std::size_t i = rank + 1; i < m; ++i) {
      if (Ops::status(A.at(i, rank)) == ZeroStatus::kZero) continue;
      K factor = Ops::div(A.at(i, rank), piv);
      A.at(i, rank) = Ops::zero(ctx);
      for (std::size_t j = rank + 1; j < n; ++j)
        A.at(i, j) = Ops::sub(A.at(i, j), Ops::mul(factor, A.at(rank, j)));
      b[i] = Ops::sub(b[i], Ops::mul(factor, b[rank]));
    }
  }

  for (std::size_t i = rank; i < m; ++i) {
    ZeroStatus st = Ops::status(b[i]);
    if (st == ZeroStatus::kNonZero) return std::nullopt;
    if (st == ZeroStatus::kAmbiguous)
      raise(ErrorCode::kIllConditionedGcd, "consistency decision in the ambiguous band");
  }

  std::vector<K> x(n, Ops::zero(ctx));
  for (std::size_t i = rank; i-- > 0;) {
    K acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j)
      acc = Ops::sub(acc, Ops::mul(A.at(i, j), x[j]));
    x[i] = Ops::div(acc, A.at(i, i));
  }
  std::vector<K> out(n, Ops::zero(ctx));
  for (std::size_t j = 0; j < n; ++j) out[colperm[j]] = x[j];
  return out;
}

}  // namespace chab
