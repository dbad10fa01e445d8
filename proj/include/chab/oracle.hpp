#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "chab/mumford.hpp"

namespace chab {

// Brute-force ground truth over small finite fields: the full group table of
// J(F_q) by enumeration of Mumford pairs, exhaustive doubling preimages and
// exact descent-class images. Independent of the halving code by design.
class GroupTable {
 public:
  GroupTable(Curve<FqElem> curve, long max_genus = 2, int max_q = 13);

  const Curve<FqElem>& curve() const { return curve_; }
  const std::vector<MumfordPoint<FqElem>>& elements() const { return elems_; }
  std::size_t order() const { return elems_.size(); }
  std::size_t index_of(const MumfordPoint<FqElem>& P) const;
  std::size_t add(std::size_t i, std::size_t j) const { return table_[i * elems_.size() + j]; }
  std::size_t neg(std::size_t i) const { return neg_[i]; }
  std::size_t dbl(std::size_t i) const { return add(i, i); }

  std::vector<std::size_t> halves(std::size_t p) const;
  long element_order(std::size_t i) const;

  const FqEtale& etale() const { return etale_; }
  BitVec mu_class(std::size_t i) const;

  // Exhaustive q-map data: classes of all iterated halves, and the maximal
  // divisibility depth (nullopt encodes infinite divisibility).
  struct BruteQ {
    std::set<BitVec> classes;
    std::optional<long> divisibility;
  };
  BruteQ brute_q(std::size_t p) const;

 private:
  std::vector<std::uint16_t> encode(const MumfordPoint<FqElem>& P) const;

  Curve<FqElem> curve_;
  FqEtale etale_;
  std::vector<MumfordPoint<FqElem>> elems_;
  std::map<std::vector<std::uint16_t>, std::size_t> index_;
  std::vector<std::size_t> table_;
  std::vector<std::size_t> neg_;
};

}  // namespace chab
