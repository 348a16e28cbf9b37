#pragma once

#include <cstdint>
#include <vector>

#include "gkz/modgcd.hpp"
#include "gkz/poly.hpp"

namespace gkz {

MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b);

namespace detail {

inline constexpr std::uint64_t kGcdPrimes[] = {2147483629ull, 2147483587ull, 2147483579ull, 2147483563ull};

struct SplitMix {
  std::uint64_t s;
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
};

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

inline std::uint64_t mpz_mod_p(const mpz_class& z, std::uint64_t p) {
  return mpz_fdiv_ui(z.get_mpz_t(), static_cast<unsigned long>(p));
}

// Image of an integer polynomial under all slots except `x` set to point[], as a dense univariate mod p.
inline std::vector<std::uint64_t> specialize_mod(const MultiPoly& f, std::size_t x, const std::vector<std::uint64_t>& point,
                                                 std::uint64_t p) {
  std::vector<std::uint64_t> out(f.degree(x) + 1, 0);
  for (auto& t : f.terms()) {
    std::uint64_t v = mpz_mod_p(t.c.get_num(), p);
    if (t.c.get_den() != 1) v = v * powmod(mpz_mod_p(t.c.get_den(), p), p - 2, p) % p;
    for (std::size_t i = 0; i < kMaxSlots && v; ++i) {
      if (i == x || !t.m[i]) continue;
      v = v * powmod(point[i], t.m[i], p) % p;
    }
    auto& slot = out[t.m[x]];
    slot = (slot + v) % p;
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

inline std::size_t univariate_gcd_degree_mod(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b, std::uint64_t p) {
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    std::uint64_t inv = powmod(b.back(), p - 2, p);
    while (a.size() >= b.size()) {
      std::uint64_t q = a.back() * inv % p;
      std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] = (a[i + shift] + p - q * b[i] % p) % p;
      while (!a.empty() && a.back() == 0) a.pop_back();
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

// Upper bound for deg_x gcd(a,b). Rigorous whenever the leading coefficient of a in x does not vanish at the point.
inline unsigned gcd_degree_bound(const MultiPoly& a, const MultiPoly& b, std::size_t x, SplitMix& rng) {
  unsigned da = a.degree(x), db = b.degree(x);
  unsigned fallback = std::min(da, db);
  for (std::uint64_t p : kGcdPrimes) {
    std::vector<std::uint64_t> point(kMaxSlots);
    for (auto& v : point) v = 1 + rng.next() % (p - 1);
    auto ua = specialize_mod(a, x, point, p);
    if (ua.size() != da + 1) continue;
    auto ub = specialize_mod(b, x, point, p);
    if (ub.empty()) continue;
    return static_cast<unsigned>(std::min<std::size_t>(fallback, univariate_gcd_degree_mod(ua, ub, p)));
  }
  return fallback;
}

inline MultiPoly normalize_gcd(MultiPoly g) { return g.primitive(); }

inline MultiPoly divide_monomial(const MultiPoly& f, const Monomial& m) {
  if (m.is_one()) return f;
  std::vector<Term> ts;
  ts.reserve(f.size());
  for (auto& t : f.terms()) ts.push_back({t.m / m, t.c});
  return MultiPoly::from_terms(std::move(ts));
}

inline MultiPoly gcd_list(std::vector<MultiPoly> list) {
  std::sort(list.begin(), list.end(), [](const MultiPoly& a, const MultiPoly& b) { return a.size() < b.size(); });
  MultiPoly g;
  for (auto& f : list) {
    if (f.is_zero()) continue;
    g = g.is_zero() ? f.primitive() : poly_gcd(g, f);
    if (g.is_constant()) return MultiPoly(1);
  }
  return g.is_zero() ? MultiPoly() : g;
}

using Dense = std::vector<MultiPoly>;

inline MultiPoly dense_to_poly(const Dense& d, std::size_t x) {
  MultiPoly r;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].is_zero()) continue;
    r += d[i].mul_term(Monomial::var(x, static_cast<unsigned>(i)), 1);
  }
  return r;
}

inline void trim(Dense& d) {
  while (!d.empty() && d.back().is_zero()) d.pop_back();
}

inline MultiPoly dense_content(const Dense& d) {
  std::vector<MultiPoly> cs;
  for (auto& c : d)
    if (!c.is_zero()) cs.push_back(c);
  return gcd_list(std::move(cs));
}

inline void dense_make_primitive(Dense& d) {
  MultiPoly c = dense_content(d);
  if (!c.is_constant()) {
    for (auto& x : d)
      if (!x.is_zero()) x = *x.divide_exact(c);
  }
  mpz_class z = 0;
  for (auto& x : d)
    for (auto& t : x.terms()) mpz_gcd(z.get_mpz_t(), z.get_mpz_t(), t.c.get_num_mpz_t());
  if (!d.empty() && d.back().lc() < 0) z = -z;
  if (z != 1 && z != 0)
    for (auto& x : d) x = x.scaled(mpq_class(1) / mpq_class(z));
}

inline Dense pseudo_remainder(Dense f, const Dense& g) {
  const MultiPoly& lcg = g.back();
  std::size_t n = g.size() - 1;
  while (!f.empty() && f.size() - 1 >= n) {
    MultiPoly lead = f.back();
    std::size_t shift = f.size() - 1 - n;
    for (auto& c : f) c = c * lcg;
    for (std::size_t i = 0; i <= n; ++i) f[i + shift] -= lead * g[i];
    trim(f);
  }
  return f;
}

// gcd of a and b which are integer-primitive and free of monomial factors, with positive bound in x.
inline MultiPoly prs_gcd(const MultiPoly& a, const MultiPoly& b, std::size_t x, unsigned bound) {
  Dense fa = a.coefficients_in(x), fb = b.coefficients_in(x);
  MultiPoly ca = dense_content(fa), cb = dense_content(fb);
  MultiPoly c = poly_gcd(ca, cb);
  dense_make_primitive(fa);
  dense_make_primitive(fb);
  MultiPoly pa = dense_to_poly(fa, x), pb = dense_to_poly(fb, x);
  Dense f = fa, g = fb;
  if (f.size() < g.size()) std::swap(f, g);
  while (true) {
    if (g.size() == 1) return c;
    if (g.size() - 1 == bound) {
      MultiPoly cand = dense_to_poly(g, x);
      if (pa.divide_exact(cand) && pb.divide_exact(cand)) return (c * cand).primitive();
    }
    Dense r = pseudo_remainder(f, g);
    if (r.empty()) return (c * dense_to_poly(g, x)).primitive();
    dense_make_primitive(r);
    f = std::move(g);
    g = std::move(r);
  }
}

inline MultiPoly gcd_core(const MultiPoly& a, const MultiPoly& b) {
  if (a.is_constant() || b.is_constant()) return MultiPoly(1);
  if (a == b) return a;
  std::uint32_t sa = a.support(), sb = b.support();
  std::uint32_t only_a = sa & ~sb, only_b = sb & ~sa;
  if (only_a || only_b) {
    std::vector<MultiPoly> list;
    if (only_a) {
      for (auto& c : a.coefficients_on(only_a)) list.push_back(c);
    } else {
      list.push_back(a);
    }
    if (only_b) {
      for (auto& c : b.coefficients_on(only_b)) list.push_back(c);
    } else {
      list.push_back(b);
    }
    return gcd_list(std::move(list));
  }
  SplitMix rng{0x5eedull ^ a.size() * 7919 ^ b.size()};
  std::uint32_t zero_mask = 0;
  std::vector<unsigned> bound(kMaxSlots, 0);
  for (std::size_t i = 0; i < kMaxSlots; ++i) {
    if (!((sa >> i) & 1u)) continue;
    bound[i] = gcd_degree_bound(a, b, i, rng);
    if (bound[i] == 0) zero_mask |= (1u << i);
  }
  if (zero_mask == sa) return MultiPoly(1);
  if (zero_mask) {
    std::vector<MultiPoly> list;
    for (auto& c : a.coefficients_on(zero_mask)) list.push_back(c);
    for (auto& c : b.coefficients_on(zero_mask)) list.push_back(c);
    return gcd_list(std::move(list));
  }
  auto matches = [&](const MultiPoly& f) {
    for (std::size_t i = 0; i < kMaxSlots; ++i)
      if (((sa >> i) & 1u) && f.degree(i) != bound[i]) return false;
    return true;
  };
  if (matches(b) && a.divide_exact(b)) return b.primitive();
  if (matches(a) && b.divide_exact(a)) return a.primitive();
  std::size_t best = kMaxSlots;
  for (std::size_t i = 0; i < kMaxSlots; ++i) {
    if (!((sa >> i) & 1u)) continue;
    // the remainder sequence is as long as the degree in x
    unsigned di = std::max(a.degree(i), b.degree(i)), db = best == kMaxSlots ? 0 : std::max(a.degree(best), b.degree(best));
    if (best == kMaxSlots || di < db || (di == db && bound[i] < bound[best])) best = i;
  }
  // modular images with the highest-degree variable as the main one; the remainder sequence is the fallback
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < kMaxSlots; ++i)
    if ((sa >> i) & 1u) slots.push_back(i);
  std::stable_sort(slots.begin(), slots.end(), [&](std::size_t x, std::size_t y) {
    return std::min(a.degree(x), b.degree(x)) > std::min(a.degree(y), b.degree(y));
  });
  if (auto g = modgcd::modular_gcd(a, b, slots)) return *g;
  return prs_gcd(a, b, best, bound[best]);
}

}  // namespace detail

// Greatest common divisor over Q, returned with coprime integer coefficients and positive leading coefficient.
inline MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b) {
  if (a.is_zero()) return b.primitive();
  if (b.is_zero()) return a.primitive();
  Monomial ma = a.monomial_content(), mb = b.monomial_content();
  Monomial gm = Monomial::gcd(ma, mb);
  MultiPoly a1 = detail::divide_monomial(a, ma).primitive();
  MultiPoly b1 = detail::divide_monomial(b, mb).primitive();
  MultiPoly g = detail::gcd_core(a1, b1);
  return g.mul_term(gm, 1).primitive();
}

inline MultiPoly poly_lcm(const MultiPoly& a, const MultiPoly& b) {
  if (a.is_zero() || b.is_zero()) return MultiPoly();
  MultiPoly g = poly_gcd(a, b);
  return (*a.divide_exact(g) * b).primitive();
}

// Product of the distinct irreducible factors, up to a constant.
inline MultiPoly squarefree_part(const MultiPoly& f) {
  if (f.is_constant()) return MultiPoly(1);
  MultiPoly g = f;
  for (std::size_t i = 0; i < kMaxSlots; ++i) {
    if (!((f.support() >> i) & 1u)) continue;
    g = poly_gcd(g, f.derivative(i));
    if (g.is_constant()) break;
  }
  return f.divide_exact(g)->primitive();
}

}  // namespace gkz
