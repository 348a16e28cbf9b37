#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "gkz/poly.hpp"

// Dense modular gcd: images mod p by evaluation and Newton interpolation one variable at a time, combined over
// primes by CRT and accepted after trial division over Q.
namespace gkz::detail::modgcd {

using u64 = std::uint64_t;
using Exp = std::vector<std::uint16_t>;
struct Desc {
  bool operator()(const Exp& a, const Exp& b) const { return a > b; }
};
using PP = std::map<Exp, u64, Desc>;  // first entry is the lex-leading term
using UP = std::vector<u64>;          // dense, constant term first

inline u64 pw(u64 b, u64 e, u64 p) {
  u64 r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}
inline u64 inv(u64 a, u64 p) { return pw(a, p - 2, p); }

inline void trim(UP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}
inline void make_monic(UP& a, u64 p) {
  if (a.empty()) return;
  u64 i = inv(a.back(), p);
  for (auto& x : a) x = x * i % p;
}
inline UP up_gcd(UP a, UP b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    u64 i = inv(b.back(), p);
    while (a.size() >= b.size()) {
      u64 q = a.back() * i % p;
      std::size_t s = a.size() - b.size();
      for (std::size_t k = 0; k < b.size(); ++k) a[k + s] = (a[k + s] + p - q * b[k] % p) % p;
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  make_monic(a, p);
  return a;
}
inline UP up_mul(const UP& a, const UP& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  UP r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  trim(r);
  return r;
}
// a / b, exact
inline UP up_div(UP a, const UP& b, u64 p) {
  trim(a);
  if (a.size() < b.size()) return {};
  UP q(a.size() - b.size() + 1, 0);
  u64 i = inv(b.back(), p);
  for (std::size_t k = q.size(); k-- > 0;) {
    u64 c = a[k + b.size() - 1] * i % p;
    q[k] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[k + j] = (a[k + j] + p - c * b[j] % p) % p;
  }
  trim(q);
  return q;
}
inline u64 up_eval(const UP& a, u64 t, u64 p) {
  u64 r = 0;
  for (std::size_t k = a.size(); k-- > 0;) r = (r * t + a[k]) % p;
  return r;
}

// Coefficients in the last variable, keyed by the exponents of the others.
inline std::map<Exp, UP, Desc> split_last(const PP& a) {
  std::map<Exp, UP, Desc> out;
  for (auto& [e, c] : a) {
    Exp k(e.begin(), e.end() - 1);
    auto& u = out[k];
    if (u.size() <= e.back()) u.resize(e.back() + 1, 0);
    u[e.back()] = c;
  }
  return out;
}
inline PP join_last(const std::map<Exp, UP, Desc>& m) {
  PP out;
  for (auto& [k, u] : m)
    for (std::size_t d = 0; d < u.size(); ++d)
      if (u[d]) {
        Exp e = k;
        e.push_back(std::uint16_t(d));
        out[e] = u[d];
      }
  return out;
}
inline PP eval_last(const PP& a, u64 t, u64 p) {
  PP out;
  for (auto& [k, u] : split_last(a)) {
    u64 v = up_eval(u, t, p);
    if (v) out[k] = v;
  }
  return out;
}
inline void pp_monic(PP& a, u64 p) {
  if (a.empty()) return;
  u64 i = inv(a.begin()->second, p);
  for (auto& [e, c] : a) c = c * i % p;
}

// Exact division test in lex order.
inline bool pp_divides(const PP& b, PP a, u64 p) {
  if (b.empty()) return a.empty();
  const Exp& lb = b.begin()->first;
  u64 il = inv(b.begin()->second, p);
  std::size_t guard = 0;
  while (!a.empty()) {
    if (++guard > 2000000) return false;
    auto [la, ca] = *a.begin();
    Exp q(la.size());
    for (std::size_t i = 0; i < la.size(); ++i) {
      if (la[i] < lb[i]) return false;
      q[i] = std::uint16_t(la[i] - lb[i]);
    }
    u64 c = ca * il % p;
    for (auto& [e, v] : b) {
      Exp s(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) s[i] = std::uint16_t(e[i] + q[i]);
      u64 nv = (a.count(s) ? a[s] : 0);
      nv = (nv + p - c * v % p) % p;
      if (nv) a[s] = nv;
      else a.erase(s);
    }
  }
  return true;
}

inline bool is_one(const PP& a) {
  if (a.size() != 1) return false;
  for (auto x : a.begin()->first)
    if (x) return false;
  return true;
}

// Monic gcd in Z_p[x_0..x_{n-1}], lex with x_0 most significant. nullopt when the attempt budget runs out.
inline std::optional<PP> pgcd(const PP& a0, const PP& b0, std::size_t n, u64 p) {
  if (a0.empty() || b0.empty()) {
    PP r = a0.empty() ? b0 : a0;
    pp_monic(r, p);
    return r;
  }
  if (n == 1) {
    UP ua, ub;
    for (auto& [e, c] : a0) {
      if (ua.size() <= e[0]) ua.resize(e[0] + 1, 0);
      ua[e[0]] = c;
    }
    for (auto& [e, c] : b0) {
      if (ub.size() <= e[0]) ub.resize(e[0] + 1, 0);
      ub[e[0]] = c;
    }
    UP g = up_gcd(ua, ub, p);
    PP r;
    for (std::size_t d = 0; d < g.size(); ++d)
      if (g[d]) r[Exp{std::uint16_t(d)}] = g[d];
    return r;
  }
  auto sa = split_last(a0), sb = split_last(b0);
  UP ca, cb;
  for (auto& [k, u] : sa) ca = up_gcd(ca, u, p);
  for (auto& [k, u] : sb) cb = up_gcd(cb, u, p);
  UP c = up_gcd(ca, cb, p);
  for (auto& [k, u] : sa) u = up_div(u, ca, p);
  for (auto& [k, u] : sb) u = up_div(u, cb, p);
  PP a = join_last(sa), b = join_last(sb);
  const UP& lca = sa.begin()->second;
  const UP& lcb = sb.begin()->second;
  UP gamma = up_gcd(lca, lcb, p);
  std::size_t dya = 0, dyb = 0;
  for (auto& [k, u] : sa) dya = std::max(dya, u.size() - 1);
  for (auto& [k, u] : sb) dyb = std::max(dyb, u.size() - 1);
  std::size_t bound = gamma.size() - 1 + std::min(dya, dyb);

  auto with_content = [&](const PP& h) {
    std::map<Exp, UP, Desc> m;
    for (auto& [k, u] : split_last(h)) m[k] = up_mul(u, c, p);
    PP r = join_last(m);
    pp_monic(r, p);
    return r;
  };

  std::map<Exp, UP, Desc> h;
  UP q{1};
  std::size_t count = 0;
  std::optional<Exp> lm;
  std::size_t restarts = 0;
  for (u64 t = 1; t < p && t < 100000; ++t) {
    if (up_eval(lca, t, p) == 0 || up_eval(lcb, t, p) == 0) continue;
    auto g = pgcd(eval_last(a, t, p), eval_last(b, t, p), n - 1, p);
    if (!g) return std::nullopt;
    if (is_one(*g)) {
      PP one;
      one[Exp(n, 0)] = 1;
      return with_content(one);
    }
    u64 gt = up_eval(gamma, t, p);
    for (auto& [e, v] : *g) v = v * gt % p;
    const Exp& l = g->begin()->first;
    if (!lm || l < *lm) {
      h.clear();
      q = UP{1};
      count = 0;
      lm = l;
    } else if (l > *lm) {
      continue;
    }
    // Newton step: h += (g - h(t)) q(y) / q(t)
    u64 qi = inv(up_eval(q, t, p), p);
    std::map<Exp, u64, Desc> diff;
    for (auto& [k, u] : h) diff[k] = (p - up_eval(u, t, p)) % p;
    for (auto& [k, v] : *g) diff[k] = (diff[k] + v) % p;
    for (auto& [k, dv] : diff) {
      if (!dv) continue;
      UP add = q;
      u64 s = dv * qi % p;
      for (auto& x : add) x = x * s % p;
      UP& u = h[k];
      if (u.size() < add.size()) u.resize(add.size(), 0);
      for (std::size_t i = 0; i < add.size(); ++i) u[i] = (u[i] + add[i]) % p;
      trim(u);
    }
    for (auto it = h.begin(); it != h.end();) it = it->second.empty() ? h.erase(it) : std::next(it);
    q = up_mul(q, UP{(p - t) % p, 1}, p);
    if (++count <= bound) continue;
    UP hc;
    for (auto& [k, u] : h) hc = up_gcd(hc, u, p);
    std::map<Exp, UP, Desc> prim;
    for (auto& [k, u] : h) prim[k] = up_div(u, hc, p);
    PP cand = join_last(prim);
    if (pp_divides(cand, a, p) && pp_divides(cand, b, p)) return with_content(cand);
    if (++restarts > 4) return std::nullopt;
    h.clear();
    q = UP{1};
    count = 0;
    lm.reset();
  }
  return std::nullopt;
}

inline const std::vector<u64>& primes() {
  static std::vector<u64> ps = [] {
    std::vector<u64> v;
    mpz_class x = (1ul << 31) - 1;
    while (v.size() < 400) {
      if (mpz_probab_prime_p(x.get_mpz_t(), 30)) v.push_back(x.get_ui());
      x -= 2;
    }
    return v;
  }();
  return ps;
}

// gcd of integer-coefficient polynomials a, b on the given slots (slots[0] is the main variable).
inline std::optional<MultiPoly> modular_gcd(const MultiPoly& a, const MultiPoly& b, const std::vector<std::size_t>& slots) {
  std::size_t n = slots.size();
  auto exps = [&](const Monomial& m) {
    Exp e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = std::uint16_t(m[slots[i]]);
    return e;
  };
  std::map<Exp, mpz_class, Desc> ia, ib;
  for (auto& t : a.terms()) {
    if (t.c.get_den() != 1) return std::nullopt;
    ia[exps(t.m)] = t.c.get_num();
  }
  for (auto& t : b.terms()) {
    if (t.c.get_den() != 1) return std::nullopt;
    ib[exps(t.m)] = t.c.get_num();
  }
  mpz_class gamma;
  mpz_gcd(gamma.get_mpz_t(), ia.begin()->second.get_mpz_t(), ib.begin()->second.get_mpz_t());
  auto reduce = [](const std::map<Exp, mpz_class, Desc>& f, u64 p) {
    PP r;
    for (auto& [e, c] : f) {
      u64 v = mpz_fdiv_ui(c.get_mpz_t(), p);
      if (v) r[e] = v;
    }
    return r;
  };
  std::map<Exp, mpz_class, Desc> h;
  mpz_class modulus = 0;
  std::optional<Exp> lm;
  auto to_poly = [&](const std::map<Exp, mpz_class, Desc>& m) {
    std::vector<Term> ts;
    for (auto& [e, c] : m) {
      if (c == 0) continue;
      Monomial mon;
      for (std::size_t i = 0; i < n; ++i) mon.set(slots[i], e[i]);
      ts.push_back({mon, mpq_class(c)});
    }
    return MultiPoly::from_terms(std::move(ts)).primitive();
  };
  for (u64 p : primes()) {
    if (mpz_fdiv_ui(ia.begin()->second.get_mpz_t(), p) == 0 || mpz_fdiv_ui(ib.begin()->second.get_mpz_t(), p) == 0) continue;
    auto g = pgcd(reduce(ia, p), reduce(ib, p), n, p);
    if (!g) continue;
    if (is_one(*g)) return MultiPoly(1);
    u64 gp = mpz_fdiv_ui(gamma.get_mpz_t(), p);
    for (auto& [e, v] : *g) v = v * gp % p;
    const Exp& l = g->begin()->first;
    if (!lm || l < *lm) {
      h.clear();
      for (auto& [e, v] : *g) h[e] = mpz_class(v > p / 2 ? mpz_class(v) - mpz_class(p) : mpz_class(v));
      modulus = p;
      lm = l;
      continue;
    }
    if (l > *lm) continue;
    // CRT with symmetric representatives
    bool changed = false;
    mpz_class mp = modulus * p, half = mp / 2;
    mpz_class minv;
    mpz_class pz(p);
    mpz_invert(minv.get_mpz_t(), modulus.get_mpz_t(), pz.get_mpz_t());
    std::map<Exp, mpz_class, Desc> nh;
    std::map<Exp, u64, Desc> gv(g->begin(), g->end());
    for (auto& [e, c] : h) gv.try_emplace(e, 0);
    for (auto& [e, v] : gv) {
      mpz_class old = h.count(e) ? h[e] : mpz_class(0);
      mpz_class r = old % pz;
      if (r < 0) r += pz;
      mpz_class k = (mpz_class(v) - r) % pz;
      if (k < 0) k += pz;
      k = k * minv % pz;
      mpz_class x = old + modulus * k;
      x %= mp;
      if (x > half) x -= mp;
      if (x < -half) x += mp;
      if (x != old) changed = true;
      if (x != 0) nh[e] = x;
    }
    h = std::move(nh);
    modulus = mp;
    if (changed) continue;
    MultiPoly cand = to_poly(h);
    if (a.divide_exact(cand) && b.divide_exact(cand)) return cand;
  }
  return std::nullopt;
}

}  // namespace gkz::detail::modgcd
