#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chab/bitvec.hpp"
#include "chab/local_field.hpp"

namespace chab {

// Canonical F2-basis of k^x/(k^x)^2 for a 2-adic local field k of degree n:
// the uniformizer, the units 1 + w^j lambda^k for odd k in 1..2e-1, and one
// level-2e representative; n+2 elements in total. The ordering is fixed
// (lambda first, then ascending level) so class bit-vectors are comparable
// across runs.
class SquareClassBasis {
 public:
  explicit SquareClassBasis(LocalFieldPtr field);

  const LocalFieldPtr& field() const { return field_; }
  std::size_t dim() const { return std::size_t(field_->degree()) + 2; }
  const std::vector<LocalElement>& representatives() const { return reps_; }
  const std::string& fingerprint() const { return fingerprint_; }

  std::size_t index_lambda() const { return 0; }
  std::size_t index_level(long k, int j) const {
    return 1 + std::size_t((k - 1) / 2) * field_->f() + std::size_t(j);
  }
  std::size_t index_top() const { return dim() - 1; }

  // Coordinates of x in the basis. Requires x not apparently zero.
  BitVec decompose(const LocalElement& x) const;
  // One square root when decompose(x) == 0; nullopt signals NotASquare.
  std::optional<LocalElement> sqrt(const LocalElement& x) const;
  bool is_square(const LocalElement& x) const { return decompose(x).is_zero(); }

 private:
  struct Stripped {
    BitVec bits;
    LocalElement square_part;  // product of stripped square roots
    LocalElement tail;         // unit with tail - 1 of valuation > 2e
  };
  Stripped strip(const LocalElement& x) const;

  LocalFieldPtr field_;
  std::vector<LocalElement> reps_;
  std::string fingerprint_;
};

// Square root of 1 + z with v(z) > 2e (beyond the binomial-series threshold).
LocalElement sqrt_one_plus_small(const LocalElement& u);

}  // namespace chab
