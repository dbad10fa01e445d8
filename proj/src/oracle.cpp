#include "chab/oracle.hpp"

namespace chab {

namespace {

// General position: no repeated a-root with vanishing b (that would put a
// point together with its involute in the divisor).
bool general_position(const Poly<FqElem>& a, const Poly<FqElem>& b) {
  Poly<FqElem> rep = gcd_monic(a, derivative(a));
  if (rep.deg() == 0) return true;
  return gcd_monic(rep, b).deg() == 0;
}

}  // namespace

GroupTable::GroupTable(Curve<FqElem> curve, long max_genus, int max_q)
    : curve_(std::move(curve)), etale_(curve_.f.ctx, curve_.f) {
  const FqCtxPtr F = curve_.f.ctx;
  if (curve_.genus > max_genus || F->q() > max_q)
    raise(ErrorCode::kTooLarge, "group table caps exceeded");

  const int q = F->q();
  for (long d = 0; d <= curve_.genus; ++d) {
    long acount = 1, bcount = 1;
    for (long i = 0; i < d; ++i) {
      acount *= q;
      bcount *= q;
    }
    for (long ac = 0; ac < acount; ++ac) {
      Poly<FqElem> a(F);
      long t = ac;
      for (long i = 0; i < d; ++i) {
        a.c.push_back(FqElem{F, std::uint16_t(t % q)});
        t /= q;
      }
      a.c.push_back(FqElem{F, 1});
      for (long bc = 0; bc < bcount; ++bc) {
        Poly<FqElem> b(F);
        long u = bc;
        for (long i = 0; i < d; ++i) {
          b.c.push_back(FqElem{F, std::uint16_t(u % q)});
          u /= q;
        }
        b.trim();
        Poly<FqElem> r = rem(curve_.f - b * b, a);
        if (!r.is_zero()) continue;
        if (!general_position(a, b)) continue;
        MumfordPoint<FqElem> P{a, b};
        index_[encode(P)] = elems_.size();
        elems_.push_back(P);
      }
    }
  }

  table_.assign(elems_.size() * elems_.size(), 0);
  neg_.assign(elems_.size(), 0);
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    neg_[i] = index_of(jac_neg(curve_, elems_[i]));
    for (std::size_t j = i; j < elems_.size(); ++j) {
      MumfordPoint<FqElem> s = jac_add(curve_, elems_[i], elems_[j]);
      auto it = index_.find(encode(s));
      if (it == index_.end())
        raise(ErrorCode::kInternalMismatch, "group table is not closed");
      table_[i * elems_.size() + j] = it->second;
      table_[j * elems_.size() + i] = it->second;
    }
  }
}

std::vector<std::uint16_t> GroupTable::encode(const MumfordPoint<FqElem>& P) const {
  std::vector<std::uint16_t> key;
  key.push_back(std::uint16_t(P.a.c.size()));
  for (const auto& c : P.a.c) key.push_back(c.v);
  for (const auto& c : P.b.c) key.push_back(c.v);
  return key;
}

std::size_t GroupTable::index_of(const MumfordPoint<FqElem>& P) const {
  auto it = index_.find(encode(P));
  if (it == index_.end())
    raise(ErrorCode::kInternalMismatch, "point not in the enumerated jacobian");
  return it->second;
}

std::vector<std::size_t> GroupTable::halves(std::size_t p) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < elems_.size(); ++i)
    if (dbl(i) == p) out.push_back(i);
  return out;
}

long GroupTable::element_order(std::size_t i) const {
  std::size_t zero = index_of(jac_zero(curve_));
  std::size_t acc = i;
  for (long n = 1; n <= long(elems_.size()); ++n) {
    if (acc == zero) return n;
    acc = add(acc, i);
  }
  raise(ErrorCode::kInternalMismatch, "element order exceeds group order");
}

BitVec GroupTable::mu_class(std::size_t i) const {
  return etale_.class_of_rep(point_descent_rep(curve_, elems_[i]));
}

GroupTable::BruteQ GroupTable::brute_q(std::size_t p) const {
  BruteQ out;
  // classes of all iterated halves; each point contributes once
  std::set<std::size_t> visited{p};
  std::vector<std::size_t> frontier{p};
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier) {
      out.classes.insert(mu_class(idx));
      for (std::size_t h : halves(idx))
        if (visited.insert(h).second) next.push_back(h);
    }
    frontier = std::move(next);
  }
  // divisibility is infinite exactly on the odd-order part
  if (element_order(p) % 2 == 1) {
    out.divisibility = std::nullopt;
    return out;
  }
  long cap = 2;
  while ((1L << cap) < long(elems_.size()) * 4) ++cap;
  long nu = 0;
  std::set<std::size_t> layer{p};
  for (long n = 1; n <= cap; ++n) {
    std::set<std::size_t> next;
    for (std::size_t idx : layer)
      for (std::size_t h : halves(idx)) next.insert(h);
    if (next.empty()) break;
    nu = n;
    layer = std::move(next);
    if (n == cap)
      raise(ErrorCode::kInternalMismatch, "divisibility scan exceeded its bound");
  }
  out.divisibility = nu;
  return out;
}

}  // namespace chab
