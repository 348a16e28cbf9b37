#pragma once

#include <vector>

#include "gkz/toric.hpp"
#include "gkz/weyl.hpp"

namespace gkz {

// Operator with polynomial coefficients, terms descending in a chosen term order.
struct PolyOp {
  std::vector<std::pair<Monomial, MultiPoly>> t;

  bool is_zero() const { return t.empty(); }
  const Monomial& lm() const { return t.front().first; }
  const MultiPoly& lc() const { return t.front().second; }
  std::size_t weight() const {
    std::size_t w = 0;
    for (auto& x : t) w += x.second.size();
    return w;
  }
};

namespace detail {

inline PolyOp collect_polyop(std::vector<std::pair<Monomial, MultiPoly>> acc, const TermOrder& ord) {
  std::sort(acc.begin(), acc.end(), [&](const auto& x, const auto& y) { return ord.greater(x.first, y.first); });
  PolyOp r;
  for (auto& x : acc) {
    if (!r.t.empty() && r.t.back().first == x.first) {
      r.t.back().second += x.second;
    } else {
      if (!r.t.empty() && r.t.back().second.is_zero()) r.t.pop_back();
      r.t.push_back(std::move(x));
    }
  }
  if (!r.t.empty() && r.t.back().second.is_zero()) r.t.pop_back();
  return r;
}

// a*f - b*g
inline PolyOp lin_comb(const MultiPoly& a, const PolyOp& f, const MultiPoly& b, const PolyOp& g, const TermOrder& ord) {
  PolyOp r;
  std::size_t i = 0, j = 0;
  while (i < f.t.size() || j < g.t.size()) {
    int c = i == f.t.size() ? -1 : j == g.t.size() ? 1 : ord.cmp(f.t[i].first, g.t[j].first);
    if (c > 0) {
      r.t.push_back({f.t[i].first, a * f.t[i].second});
      ++i;
    } else if (c < 0) {
      r.t.push_back({g.t[j].first, -(b * g.t[j].second)});
      ++j;
    } else {
      MultiPoly v = a * f.t[i].second - b * g.t[j].second;
      if (!v.is_zero()) r.t.push_back({f.t[i].first, std::move(v)});
      ++i;
      ++j;
    }
  }
  return r;
}

}  // namespace detail

// dz^gamma * g, normally ordered.
inline PolyOp left_d(const Monomial& gamma, const PolyOp& g, WeylRing ring, const TermOrder& ord) {
  if (gamma.is_one()) return g;
  std::vector<std::pair<Monomial, MultiPoly>> acc;
  for (auto& [alpha, c] : g.t) {
    std::vector<std::pair<Monomial, MultiPoly>> stack{{Monomial(), c}};
    for (int j = 0; j < ring.N; ++j) {
      unsigned gj = gamma[std::size_t(j)];
      if (!gj) continue;
      std::vector<std::pair<Monomial, MultiPoly>> next;
      for (auto& [mu, f] : stack) {
        MultiPoly h = f;
        for (unsigned m = 0; m <= gj; ++m) {
          if (m > 0) h = h.derivative(ring.z(j));
          if (h.is_zero()) break;
          Monomial mu2 = mu;
          mu2.set(std::size_t(j), m);
          next.push_back({mu2, h.scaled(mpq_class(binomial(gj, m)))});
        }
      }
      stack = std::move(next);
    }
    for (auto& [mu, f] : stack) acc.push_back({(gamma / mu) * alpha, std::move(f)});
  }
  return detail::collect_polyop(std::move(acc), ord);
}

// Divides out the content (polynomial and rational, sign fixed by the leading coefficient); returns it.
inline MultiPoly remove_content(PolyOp& f) {
  if (f.is_zero()) return MultiPoly(1);
  bool has_const = false;
  for (auto& x : f.t) has_const = has_const || x.second.is_constant();
  MultiPoly c(1);
  if (!has_const) {
    std::vector<MultiPoly> cs;
    for (auto& x : f.t) cs.push_back(x.second);
    c = detail::gcd_list(std::move(cs));
    if (!c.is_one())
      for (auto& x : f.t) x.second = x.second.divide_exact(c).value();
  }
  mpz_class num = 0, den = 1;
  for (auto& x : f.t)
    for (auto& t : x.second.terms()) {
      mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.c.get_num_mpz_t());
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.c.get_den_mpz_t());
    }
  mpq_class q(num, den);
  q.canonicalize();
  if (f.lc().lc() < 0) q = -q;
  if (q != 1)
    for (auto& x : f.t) x.second = x.second.scaled(1 / q);
  return c.scaled(q);
}

class WeylGroebner {
 public:
  WeylGroebner(WeylRing ring, TermOrder order, std::size_t step_limit = 20000)
      : ring_(ring), ord_(std::move(order)), step_limit_(step_limit) {}

  const WeylRing& ring() const { return ring_; }
  const TermOrder& order() const { return ord_; }
  const std::vector<PolyOp>& basis() const { return g_; }
  std::size_t steps() const { return steps_; }

  PolyOp to_polyop(const WeylOperator& op, MultiPoly* denominator = nullptr) const {
    MultiPoly d(1);
    for (auto& [m, c] : op.terms())
      if (!c.is_polynomial()) d = poly_lcm(d, c.den());
    std::vector<std::pair<Monomial, MultiPoly>> acc;
    for (auto& [m, c] : op.terms()) acc.push_back({m, c.num() * d.divide_exact(c.den()).value()});
    if (denominator) *denominator = d;
    return detail::collect_polyop(std::move(acc), ord_);
  }

  WeylOperator to_operator(const PolyOp& p, const RatFun& scale = RatFun(1)) const {
    std::vector<WeylOperator::TermT> acc;
    for (auto& [m, c] : p.t) acc.push_back({m, scale * RatFun(c)});
    return WeylOperator::collect(ring_, std::move(acc));
  }

  // Full reduction. When mult is given, tracks r = (*mult) * f modulo the ideal.
  PolyOp reduce(PolyOp f, RatFun* mult = nullptr) const { return reduce_by(std::move(f), g_, mult); }

  PolyOp reduce_by(PolyOp f, const std::vector<PolyOp>& g, RatFun* mult = nullptr) const {
    std::size_t pos = 0;
    while (pos < f.t.size()) {
      const PolyOp* best = nullptr;
      for (auto& h : g)
        if (h.lm().divides(f.t[pos].first) && (!best || h.weight() < best->weight())) best = &h;
      if (!best) {
        ++pos;
        continue;
      }
      const MultiPoly& c = f.t[pos].second;
      MultiPoly h = poly_gcd(best->lc(), c);
      MultiPoly a = best->lc().divide_exact(h).value();
      MultiPoly b = c.divide_exact(h).value();
      PolyOp sh = left_d(f.t[pos].first / best->lm(), *best, ring_, ord_);
      f = detail::lin_comb(a, f, b, sh, ord_);
      MultiPoly cont = remove_content(f);
      if (mult) *mult = *mult * RatFun(a, cont);
    }
    return f;
  }

  PolyOp spoly(const PolyOp& f, const PolyOp& g) const {
    Monomial l = Monomial::lcm(f.lm(), g.lm());
    MultiPoly h = poly_gcd(f.lc(), g.lc());
    MultiPoly a = g.lc().divide_exact(h).value();
    MultiPoly b = f.lc().divide_exact(h).value();
    return detail::lin_comb(a, left_d(l / f.lm(), f, ring_, ord_), b, left_d(l / g.lm(), g, ring_, ord_), ord_);
  }

  void compute(const std::vector<WeylOperator>& gens) {
    g_.clear();
    steps_ = 0;
    for (auto& op : gens) {
      PolyOp f = reduce(to_polyop(op));
      if (f.is_zero()) continue;
      remove_content(f);
      g_.push_back(std::move(f));
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t j = 0; j < g_.size(); ++j)
      for (std::size_t i = 0; i < j; ++i) pairs.push_back({i, j});
    while (!pairs.empty()) {
      if (++steps_ > step_limit_) throw ResourceError("Buchberger step limit exceeded");
      // normal selection strategy: smallest lcm first
      std::size_t pick = 0;
      Monomial best = Monomial::lcm(g_[pairs[0].first].lm(), g_[pairs[0].second].lm());
      for (std::size_t p = 1; p < pairs.size(); ++p) {
        Monomial l = Monomial::lcm(g_[pairs[p].first].lm(), g_[pairs[p].second].lm());
        if (ord_.cmp(l, best) < 0) {
          best = l;
          pick = p;
        }
      }
      auto [i, j] = pairs[pick];
      pairs.erase(pairs.begin() + std::ptrdiff_t(pick));
      PolyOp s = reduce(spoly(g_[i], g_[j]));
      if (s.is_zero()) continue;
      g_.push_back(std::move(s));
      for (std::size_t k = 0; k + 1 < g_.size(); ++k) pairs.push_back({k, g_.size() - 1});
    }
    // minimize and interreduce
    std::vector<PolyOp> min;
    for (std::size_t i = 0; i < g_.size(); ++i) {
      bool redundant = false;
      for (std::size_t j = 0; j < g_.size() && !redundant; ++j) {
        if (i == j || !g_[j].lm().divides(g_[i].lm())) continue;
        redundant = g_[j].lm() != g_[i].lm() || j < i;
      }
      if (!redundant) min.push_back(g_[i]);
    }
    for (std::size_t i = 0; i < min.size(); ++i) {
      std::vector<PolyOp> others;
      for (std::size_t j = 0; j < min.size(); ++j)
        if (j != i) others.push_back(min[j]);
      min[i] = reduce_by(min[i], others);
      remove_content(min[i]);
    }
    std::sort(min.begin(), min.end(), [&](const PolyOp& x, const PolyOp& y) { return ord_.greater(x.lm(), y.lm()); });
    g_ = std::move(min);
  }

  // Every S-pair of the basis reduces to zero.
  bool verify() const {
    for (std::size_t j = 0; j < g_.size(); ++j)
      for (std::size_t i = 0; i < j; ++i)
        if (!reduce(spoly(g_[i], g_[j])).is_zero()) return false;
    return true;
  }

  // Generators made monic in their leading term.
  std::vector<WeylOperator> generators() const {
    std::vector<WeylOperator> out;
    for (auto& g : g_) out.push_back(to_operator(g, RatFun(MultiPoly(1), g.lc())));
    return out;
  }

  std::vector<Monomial> standard_monomials() const {
    std::vector<unsigned> bound(ring_.N, 0);
    for (int j = 0; j < ring_.N; ++j) {
      for (auto& g : g_) {
        const Monomial& m = g.lm();
        if (m.degree() == m[std::size_t(j)] && m.degree() > 0 && (bound[j] == 0 || m.degree() < bound[j])) bound[j] = m.degree();
      }
      if (bound[j] == 0) throw ParameterError("infinite set of standard monomials: the ideal is not holonomic");
    }
    std::vector<Monomial> out;
    Monomial cur;
    enumerate(0, cur, bound, out);
    std::sort(out.begin(), out.end(), [&](const Monomial& x, const Monomial& y) { return ord_.greater(x, y); });
    return out;
  }

  // Coefficients of the normal form of op over the given standard monomials.
  std::vector<RatFun> normal_form(const WeylOperator& op, const std::vector<Monomial>& standard) const {
    MultiPoly d;
    PolyOp f = to_polyop(op, &d);
    RatFun mult(1);
    PolyOp r = reduce(std::move(f), &mult);
    RatFun scale = (mult * RatFun(d)).inverse();
    std::vector<RatFun> out(standard.size());
    for (auto& [m, c] : r.t) {
      auto it = std::find(standard.begin(), standard.end(), m);
      if (it == standard.end()) throw ParameterError("normal form left a non-standard monomial");
      out[std::size_t(it - standard.begin())] = scale * RatFun(c);
    }
    return out;
  }

  WeylOperator normal_form_operator(const WeylOperator& op) const {
    MultiPoly d;
    PolyOp f = to_polyop(op, &d);
    RatFun mult(1);
    PolyOp r = reduce(std::move(f), &mult);
    return to_operator(r, (mult * RatFun(d)).inverse());
  }

 private:
  void enumerate(int j, Monomial& cur, const std::vector<unsigned>& bound, std::vector<Monomial>& out) const {
    for (auto& g : g_)
      if (g.lm().divides(cur)) return;
    if (j == ring_.N) {
      out.push_back(cur);
      return;
    }
    for (unsigned e = 0; e < bound[j]; ++e) {
      cur.set(std::size_t(j), e);
      bool blocked = false;
      for (auto& g : g_)
        if (g.lm().divides(cur)) blocked = true;
      if (blocked) break;
      enumerate(j + 1, cur, bound, out);
    }
    cur.set(std::size_t(j), 0);
  }

  WeylRing ring_;
  TermOrder ord_;
  std::size_t step_limit_;
  std::size_t steps_ = 0;
  std::vector<PolyOp> g_;
};

// Generators of H_A(b): Euler operators and the toric binomials.
inline std::vector<WeylOperator> gkz_generators(const CayleyConfig& a, const ToricBasis& toric) {
  WeylRing ring = ring_of(a);
  std::vector<WeylOperator> gens = euler_operators(a);
  for (auto& g : toric.generators) {
    std::vector<WeylOperator::TermT> terms;
    for (auto& t : g.t) terms.push_back({t.m, RatFun(t.c)});
    gens.push_back(WeylOperator::collect(ring, std::move(terms)));
  }
  return gens;
}

struct GkzBasis {
  CayleyConfig config;
  ToricBasis toric;
  WeylGroebner gb;
  std::vector<Monomial> standard;
};

inline GkzBasis gkz_groebner(const CayleyConfig& a, const TermOrder& order, std::size_t step_limit = 20000) {
  ToricBasis toric = toric_groebner(a, order);
  WeylGroebner gb(ring_of(a), order, step_limit);
  gb.compute(gkz_generators(a, toric));
  auto standard = gb.standard_monomials();
  return GkzBasis{a, toric, std::move(gb), std::move(standard)};
}

}  // namespace gkz
