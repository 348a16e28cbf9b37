#pragma once

#include <vector>

#include "gkz/cayley.hpp"
#include "gkz/format.hpp"
#include "gkz/order.hpp"

namespace gkz {

// Commutative polynomial with terms kept descending in a given term order.
struct OrderedPoly {
  std::vector<Term> t;

  bool is_zero() const { return t.empty(); }
  const Monomial& lm() const { return t.front().m; }
  const mpq_class& lc() const { return t.front().c; }

  static OrderedPoly from(const MultiPoly& p, const TermOrder& ord) {
    OrderedPoly r{p.terms()};
    std::sort(r.t.begin(), r.t.end(), [&](const Term& a, const Term& b) { return ord.greater(a.m, b.m); });
    return r;
  }
  MultiPoly to_poly() const { return MultiPoly::from_terms(t); }

  // this - c*m*g
  OrderedPoly sub_mul(const OrderedPoly& g, const Monomial& m, const mpq_class& c, const TermOrder& ord) const {
    OrderedPoly out;
    out.t.reserve(t.size() + g.t.size());
    std::size_t i = 0, j = 0;
    while (i < t.size() || j < g.t.size()) {
      if (j == g.t.size()) {
        out.t.push_back(t[i++]);
        continue;
      }
      Monomial gm = g.t[j].m * m;
      int cmp = i == t.size() ? -1 : ord.cmp(t[i].m, gm);
      if (cmp > 0) {
        out.t.push_back(t[i++]);
      } else if (cmp < 0) {
        out.t.push_back({gm, -(g.t[j].c * c)});
        ++j;
      } else {
        mpq_class v = t[i].c - g.t[j].c * c;
        if (v != 0) out.t.push_back({gm, v});
        ++i;
        ++j;
      }
    }
    return out;
  }

  OrderedPoly monic() const {
    OrderedPoly r = *this;
    if (r.t.empty()) return r;
    mpq_class inv = 1 / r.t.front().c;
    for (auto& x : r.t) x.c *= inv;
    return r;
  }
};

inline OrderedPoly commutative_reduce(OrderedPoly f, const std::vector<OrderedPoly>& g, const TermOrder& ord) {
  std::size_t pos = 0;
  while (pos < f.t.size()) {
    bool hit = false;
    for (auto& h : g) {
      if (h.lm().divides(f.t[pos].m)) {
        f = f.sub_mul(h, f.t[pos].m / h.lm(), f.t[pos].c / h.lc(), ord);
        hit = true;
        break;
      }
    }
    if (!hit) ++pos;
  }
  return f;
}

// Reduced Groebner basis of a commutative ideal.
inline std::vector<OrderedPoly> commutative_groebner(const std::vector<MultiPoly>& input, const TermOrder& ord,
                                                     std::size_t step_limit = 100000) {
  std::vector<OrderedPoly> g;
  for (auto& p : input) {
    OrderedPoly q = commutative_reduce(OrderedPoly::from(p, ord), g, ord);
    if (!q.is_zero()) g.push_back(q.monic());
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 0; j < g.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) pairs.push_back({i, j});
  std::size_t steps = 0;
  while (!pairs.empty()) {
    if (++steps > step_limit) throw ResourceError("commutative Buchberger step limit exceeded");
    auto [i, j] = pairs.back();
    pairs.pop_back();
    const Monomial &a = g[i].lm(), &b = g[j].lm();
    if (Monomial::gcd(a, b).is_one()) continue;  // coprime leading monomials
    Monomial l = Monomial::lcm(a, b);
    OrderedPoly s = OrderedPoly{}.sub_mul(g[i], l / a, -1 / g[i].lc(), ord).sub_mul(g[j], l / b, 1 / g[j].lc(), ord);
    s = commutative_reduce(s, g, ord);
    if (s.is_zero()) continue;
    g.push_back(s.monic());
    for (std::size_t k = 0; k + 1 < g.size(); ++k) pairs.insert(pairs.begin(), {k, g.size() - 1});
  }
  // minimize
  std::vector<OrderedPoly> min;
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
      if (i == j || !g[j].lm().divides(g[i].lm())) continue;
      redundant = g[j].lm() != g[i].lm() || j < i;
    }
    if (!redundant) min.push_back(g[i]);
  }
  // interreduce
  for (std::size_t i = 0; i < min.size(); ++i) {
    std::vector<OrderedPoly> others;
    for (std::size_t j = 0; j < min.size(); ++j)
      if (j != i) others.push_back(min[j]);
    min[i] = commutative_reduce(min[i], others, ord).monic();
  }
  std::sort(min.begin(), min.end(), [&](const OrderedPoly& x, const OrderedPoly& y) { return ord.greater(x.lm(), y.lm()); });
  return min;
}

struct ToricBasis {
  std::vector<OrderedPoly> generators;  // in Q[dz_1..dz_N], slots 0..N-1
  TermOrder order;
  std::vector<IntVec> lattice;

  std::vector<IntVec> exponent_vectors() const {
    std::vector<IntVec> out;
    for (auto& g : generators) {
      IntVec u(order.vars().size(), 0);
      for (std::size_t j = 0; j < u.size(); ++j) u[j] = long(g.t.front().m[j]) - (g.t.size() > 1 ? long(g.t.back().m[j]) : 0);
      out.push_back(u);
    }
    return out;
  }
};

// Saturated toric ideal I_A via the auxiliary variable t*dz_1*...*dz_N - 1 and elimination of t.
inline ToricBasis toric_groebner(const CayleyConfig& a, const TermOrder& ord) {
  ToricBasis out;
  out.order = ord;
  out.lattice = kernel_lattice(a.matrix());
  if (out.lattice.empty()) return out;
  int N = a.N();
  if (N + 1 > int(kMaxSlots)) throw ResourceError("too many columns");
  std::vector<MultiPoly> gens;
  for (auto& u : out.lattice) {
    Monomial plus, minus;
    for (int j = 0; j < N; ++j) {
      if (u[j] > 0) plus.set(j, unsigned(u[j]));
      if (u[j] < 0) minus.set(j, unsigned(-u[j]));
    }
    gens.push_back(MultiPoly::term(plus, 1) - MultiPoly::term(minus, 1));
  }
  Monomial all;
  for (int j = 0; j <= N; ++j) all.set(j, 1);
  gens.push_back(MultiPoly::term(all, 1) - MultiPoly(1));
  TermOrder elim(TermOrder::Kind::grevlex, ord.vars(), 1u << N);
  auto g = commutative_groebner(gens, elim);
  std::vector<MultiPoly> kept;
  for (auto& p : g)
    if (!(p.to_poly().support() & (1u << N))) kept.push_back(p.to_poly());
  out.generators = commutative_groebner(kept, ord);
  return out;
}

inline std::string dpoly_to_string(const OrderedPoly& p, int N) {
  return terms_to_string(p.t, SymbolTable::indexed("dz", N));
}

}  // namespace gkz
