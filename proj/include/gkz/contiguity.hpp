#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gkz/groebner.hpp"

namespace gkz {

// b_i(s) with C_i * dz_i - b_i(b) in H_A(b). b is a polynomial in the slots of b1..bd.
struct DirectionContiguity {
  int direction = 0;  // 0-based column index
  MultiPoly b;
  WeylOperator c;
  std::string route;  // "toric" or "ansatz"
};

// Primitive inner normals of the facets of the cone spanned by the columns.
inline std::vector<IntVec> facet_normals(const CayleyConfig& a) {
  int d = a.d(), N = a.N();
  std::vector<IntVec> out;
  std::vector<int> pick;
  auto visit = [&]() {
    IntVec normal;
    if (d == 1) {
      normal = {1};
    } else {
      IntMatrix rows(int(pick.size()), d);
      for (std::size_t r = 0; r < pick.size(); ++r)
        for (int i = 0; i < d; ++i) rows(int(r), i) = a.entry(i, pick[r]);
      auto ker = kernel_lattice(rows);
      if (ker.size() != 1) return;
      normal = ker[0];
    }
    int sign = 0;
    for (int j = 0; j < N; ++j) {
      long v = 0;
      for (int i = 0; i < d; ++i) v += normal[i] * a.entry(i, j);
      int s = (v > 0) - (v < 0);
      if (s && sign && s != sign) return;
      if (s) sign = s;
    }
    if (sign == 0) return;
    if (sign < 0)
      for (auto& x : normal) x = -x;
    if (std::find(out.begin(), out.end(), normal) == out.end()) out.push_back(normal);
  };
  std::function<void(int)> rec = [&](int start) {
    if (int(pick.size()) == d - 1) {
      visit();
      return;
    }
    for (int j = start; j < N; ++j) {
      pick.push_back(j);
      rec(j + 1);
      pick.pop_back();
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

inline long dot(const IntVec& f, const IntVec& v) {
  long s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * v[i];
  return s;
}

// Reduces the derivative part of every term by the toric basis; coefficients are treated as left scalars.
inline WeylOperator toric_reduce(const WeylOperator& op, const ToricBasis& toric) {
  std::vector<WeylOperator::TermT> acc;
  for (auto& [m, c] : op.terms()) {
    OrderedPoly r = commutative_reduce(OrderedPoly::from(MultiPoly::term(m, 1), toric.order), toric.generators, toric.order);
    for (auto& t : r.t) acc.push_back({t.m, c * RatFun(t.c)});
  }
  return WeylOperator::collect(op.ring(), std::move(acc));
}

// Exponent vectors g >= 0 with |g| = total and A g = target.
inline void solve_nonneg(const CayleyConfig& a, const IntVec& target, unsigned total, std::vector<Monomial>& out) {
  int N = a.N();
  Monomial cur;
  std::function<void(int, unsigned)> rec = [&](int j, unsigned left) {
    if (j == N - 1) {
      cur.set(std::size_t(j), left);
      IntVec v(a.d(), 0);
      for (int c = 0; c < N; ++c)
        for (int i = 0; i < a.d(); ++i) v[i] += a.entry(i, c) * long(cur[std::size_t(c)]);
      if (v == target) out.push_back(cur);
      cur.set(std::size_t(j), 0);
      return;
    }
    for (unsigned e = 0; e <= left; ++e) {
      cur.set(std::size_t(j), e);
      rec(j + 1, left - e);
    }
    cur.set(std::size_t(j), 0);
  };
  rec(0, total);
}

inline void all_monomials(int nvars, std::size_t offset, unsigned maxdeg, std::vector<Monomial>& out) {
  Monomial cur;
  std::function<void(int, unsigned)> rec = [&](int j, unsigned left) {
    if (j == nvars) {
      out.push_back(cur);
      return;
    }
    for (unsigned e = 0; e <= left; ++e) {
      cur.set(offset + std::size_t(j), e);
      rec(j + 1, left - e);
    }
    cur.set(offset + std::size_t(j), 0);
  };
  rec(0, maxdeg);
}

// Basis of the rational nullspace of m (ncols unknowns).
inline std::vector<QVec> q_nullspace(QMat m, std::size_t ncols) {
  auto piv = q_row_reduce(m);
  std::vector<bool> is_piv(ncols, false);
  for (int p : piv) is_piv[std::size_t(p)] = true;
  std::vector<QVec> out;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_piv[f]) continue;
    QVec v(ncols, 0);
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[std::size_t(piv[r])] = -m[r][f];
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

inline bool certify_contiguity(const GkzBasis& g, const DirectionContiguity& c) {
  WeylRing ring = g.gb.ring();
  WeylOperator lhs = c.c * WeylOperator::d(ring, c.direction) - WeylOperator(ring, RatFun(c.b));
  return g.gb.normal_form_operator(lhs).is_zero();
}

// Product over facets F with F(a_i) > 0 of (F(s))(F(s)-1)...(F(s)-F(a_i)+1), then b(A theta) reduced by the
// toric ideal under grevlex with dz_i last. Returns nullopt when the reduced operator is not right-divisible by dz_i.
inline std::optional<DirectionContiguity> contiguity_toric(const GkzBasis& g, int i) {
  const CayleyConfig& a = g.config;
  WeylRing ring = g.gb.ring();
  IntVec ai = a.column(i);
  MultiPoly b(1);
  WeylOperator bt(ring, RatFun(1));
  for (auto& f : facet_normals(a)) {
    long fa = detail::dot(f, ai);
    for (long j = 0; j < fa; ++j) {
      MultiPoly lin(mpq_class(-j));
      WeylOperator op(ring, RatFun(mpq_class(-j)));
      for (int k = 0; k < a.d(); ++k)
        if (f[k]) lin += MultiPoly::var(ring.beta(k)) * MultiPoly(mpq_class(f[k]));
      for (int c = 0; c < a.N(); ++c) {
        long w = detail::dot(f, a.column(c));
        if (w) op += theta(ring, c).scaled(RatFun(w));
      }
      b *= lin;
      bt = bt * op;
    }
  }
  ToricBasis toric = toric_groebner(a, TermOrder::grevlex_last(a.N(), i));
  WeylOperator red = detail::toric_reduce(bt, toric);
  std::vector<WeylOperator::TermT> acc;
  for (auto& [m, c] : red.terms()) {
    if (m[std::size_t(i)] == 0) return std::nullopt;
    acc.push_back({m / Monomial::var(std::size_t(i)), c});
  }
  DirectionContiguity out{i, b, WeylOperator::collect(ring, std::move(acc)), "toric"};
  if (!certify_contiguity(g, out)) return std::nullopt;
  return out;
}

// Linear-algebra ansatz: C = sum u z^g dz^a of A-weight a(i), b = sum v b^m, NF(C dz_i - b) = 0.
inline std::optional<DirectionContiguity> contiguity_ansatz(const GkzBasis& g, int i, unsigned max_degree = 3) {
  const CayleyConfig& a = g.config;
  WeylRing ring = g.gb.ring();
  IntVec ai = a.column(i);
  std::size_t one = std::size_t(std::find_if(g.standard.begin(), g.standard.end(), [](const Monomial& m) { return m.is_one(); }) -
                                g.standard.begin());
  for (unsigned D = 1; D <= max_degree; ++D) {
    std::vector<std::pair<Monomial, Monomial>> ops;  // (z exponent, dz exponent)
    std::vector<Monomial> dmons;
    detail::all_monomials(a.N(), 0, D - 1, dmons);
    for (auto& alpha : dmons) {
      IntVec target = ai;
      for (int c = 0; c < a.N(); ++c)
        for (int r = 0; r < a.d(); ++r) target[r] += a.entry(r, c) * long(alpha[std::size_t(c)]);
      std::vector<Monomial> gammas;
      detail::solve_nonneg(a, target, alpha.degree() + 1, gammas);
      for (auto& gm : gammas) ops.push_back({gm, alpha});
    }
    std::vector<Monomial> bmons;
    detail::all_monomials(a.d(), 0, D, bmons);
    std::size_t nu = ops.size(), nv = bmons.size(), n = nu + nv;
    // columns: normal forms of each unknown's operator
    std::vector<std::vector<RatFun>> cols;
    for (auto& [gm, alpha] : ops) {
      Monomial zm;
      for (int c = 0; c < a.N(); ++c) zm.set(ring.z(c), gm[std::size_t(c)]);
      WeylOperator op = WeylOperator::monomial(ring, alpha, RatFun(MultiPoly::term(zm, 1))) * WeylOperator::d(ring, i);
      cols.push_back(g.gb.normal_form(op, g.standard));
    }
    for (auto& m : bmons) {
      std::vector<RatFun> v(g.standard.size());
      v[one] = RatFun(-MultiPoly::term(m, 1));
      cols.push_back(v);
    }
    QMat eqs;
    for (std::size_t s = 0; s < g.standard.size(); ++s) {
      MultiPoly l(1);
      for (auto& c : cols)
        if (!c[s].is_zero()) l = poly_lcm(l, c[s].den());
      std::map<Monomial, QVec, bool (*)(const Monomial&, const Monomial&)> rows(
          [](const Monomial& x, const Monomial& y) { return canonical_cmp(x, y) < 0; });
      for (std::size_t k = 0; k < n; ++k) {
        if (cols[k][s].is_zero()) continue;
        MultiPoly num = cols[k][s].num() * l.divide_exact(cols[k][s].den()).value();
        for (auto& t : num.terms()) {
          auto it = rows.try_emplace(t.m, QVec(n, 0)).first;
          it->second[k] += t.c;
        }
      }
      for (auto& [m, r] : rows) eqs.push_back(r);
    }
    auto null = detail::q_nullspace(eqs, n);
    for (auto& v : null) {
      bool has_b = false;
      for (std::size_t k = nu; k < n; ++k) has_b = has_b || v[k] != 0;
      if (!has_b) continue;
      MultiPoly b;
      for (std::size_t k = 0; k < nv; ++k)
        if (v[nu + k] != 0) b += MultiPoly::term(bmons[k], v[nu + k]);
      mpq_class lc = b.terms().front().c;
      WeylOperator c(ring);
      for (std::size_t k = 0; k < nu; ++k) {
        if (v[k] == 0) continue;
        Monomial zm;
        for (int col = 0; col < a.N(); ++col) zm.set(ring.z(col), ops[k].first[std::size_t(col)]);
        c += WeylOperator::monomial(ring, ops[k].second, RatFun(MultiPoly::term(zm, v[k] / lc)));
      }
      DirectionContiguity out{i, b * MultiPoly(mpq_class(1 / lc)), c, "ansatz"};
      if (certify_contiguity(g, out)) return out;
    }
  }
  return std::nullopt;
}

inline DirectionContiguity direction_contiguity(const GkzBasis& g, int i, unsigned ansatz_degree = 3) {
  if (i < 0 || i >= g.config.N()) throw ParameterError("direction out of range");
  if (auto c = contiguity_toric(g, i)) return *c;
  if (auto c = contiguity_ansatz(g, i, ansatz_degree)) return *c;
  throw ResourceError("no contiguity operator found for direction " + std::to_string(i + 1) + " up to degree " +
                      std::to_string(ansatz_degree));
}

// q = (q', q'') for the form h^{-q'} x^{q''} dx/x.
struct FormIndex {
  IntVec q_prime;
  IntVec q_doubleprime;
  IntVec q() const {
    IntVec v = q_prime;
    v.insert(v.end(), q_doubleprime.begin(), q_doubleprime.end());
    return v;
  }
};

// Integer solutions r of A r = q ordered by sum |r_i|, then by the number of negative entries. A particular
// solution is improved by kernel moves until no single move lowers sum |r_i|; then a box of kernel offsets
// of radius `radius` around it is searched.
inline std::vector<IntVec> decompose_form_index(const CayleyConfig& a, const IntVec& q, int radius = 2,
                                                std::size_t limit = 16) {
  if (int(q.size()) != a.d()) throw ParameterError("form index has the wrong length");
  auto r0 = integer_solution(a.matrix(), q);
  if (!r0) throw ParameterError("form index is outside the column lattice");
  auto ker = kernel_lattice(a.matrix());
  auto l1 = [](const IntVec& v) {
    long s = 0;
    for (long x : v) s += std::labs(x);
    return s;
  };
  auto add = [](IntVec v, const IntVec& w, long c) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * w[i];
    return v;
  };
  IntVec r = *r0;
  for (bool improved = true; improved;) {
    improved = false;
    for (auto& v : ker)
      for (long c : {1L, -1L}) {
        IntVec t = add(r, v, c);
        if (l1(t) < l1(r)) {
          r = t;
          improved = true;
        }
      }
  }
  std::vector<IntVec> found;
  IntVec off(ker.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == ker.size()) {
      IntVec t = r;
      for (std::size_t i = 0; i < ker.size(); ++i) t = add(t, ker[i], off[i]);
      found.push_back(t);
      return;
    }
    for (long c = -radius; c <= radius; ++c) {
      off[k] = c;
      rec(k + 1);
    }
  };
  rec(0);
  auto negs = [](const IntVec& v) { return std::count_if(v.begin(), v.end(), [](long x) { return x < 0; }); };
  std::sort(found.begin(), found.end(), [&](const IntVec& x, const IntVec& y) {
    if (l1(x) != l1(y)) return l1(x) < l1(y);
    if (negs(x) != negs(y)) return negs(x) < negs(y);
    return x > y;
  });
  found.erase(std::unique(found.begin(), found.end()), found.end());
  if (found.size() > limit) found.resize(limit);
  return found;
}

// F(q) = prod_{r_i<0} C_i^{-r_i} prod_{r_i>0} dz_i^{r_i} / (B B'), factors ordered i = N..1.
struct AssembledForm {
  IntVec q;
  IntVec r;
  RatFun B, Bp;
  WeylOperator op;  // includes the 1/(B B') prefactor
};

namespace detail {

inline MultiPoly shift_beta(const MultiPoly& p, const IntVec& shift) {
  MultiPoly r = p;
  for (std::size_t k = 0; k < shift.size(); ++k)
    if (shift[k]) r = r.substitute(k, MultiPoly::var(k) + MultiPoly(mpq_class(shift[k])));
  return r;
}

inline MultiPoly block_form(const CayleyConfig& a, int j, const IntVec& shift) {
  int l = a.block(j);
  return MultiPoly::var(std::size_t(l)) + MultiPoly(mpq_class(shift[std::size_t(l)]));
}

}  // namespace detail

using ContiguityCache = std::map<int, DirectionContiguity>;

inline AssembledForm assemble_form_with(const GkzBasis& g, const IntVec& q, const IntVec& r, ContiguityCache& cache) {
  const CayleyConfig& a = g.config;
  WeylRing ring = g.gb.ring();
  int N = a.N(), d = a.d();
  MultiPoly bn(1), bd(1), bp(1);
  // B'
  IntVec acc(d, 0);  // - sum_{r_l>0, l<j} r_l a(l)
  for (int j = 0; j < N; ++j) {
    if (r[j] <= 0) continue;
    for (long m = 0; m < r[j]; ++m) {
      IntVec s = acc;
      for (int k = 0; k < d; ++k) s[k] -= m * a.entry(k, j);
      bp *= detail::block_form(a, j, s);
    }
    for (int k = 0; k < d; ++k) acc[k] -= r[j] * a.entry(k, j);
  }
  // B; acc now holds - sum_{r_l>0} r_l a(l)
  for (int j = 0; j < N; ++j) {
    if (r[j] >= 0) continue;
    auto it = cache.find(j);
    if (it == cache.end()) it = cache.emplace(j, direction_contiguity(g, j)).first;
    for (long m = 1; m <= -r[j]; ++m) {
      IntVec s = acc;
      for (int k = 0; k < d; ++k) s[k] += m * a.entry(k, j);
      bn *= detail::shift_beta(it->second.b, s);
      bd *= detail::block_form(a, j, s);
    }
    for (int k = 0; k < d; ++k) acc[k] += -r[j] * a.entry(k, j);
  }
  RatFun B(bn, bd), Bp(bp);
  if (B.is_zero() || Bp.is_zero()) throw DegenerateError("contiguity prefactor vanishes for this decomposition");
  WeylOperator op(ring, (B * Bp).inverse());
  // right factor applied first: dz_1 ... then C_1 ...; build left-to-right as C_N..C_1 dz_N..dz_1
  WeylOperator left(ring, RatFun(1));
  for (int j = N - 1; j >= 0; --j)
    if (r[j] < 0) left = left * cache.at(j).c.pow(unsigned(-r[j]));
  for (int j = N - 1; j >= 0; --j)
    if (r[j] > 0) left = left * WeylOperator::d(ring, j, unsigned(r[j]));
  return AssembledForm{q, r, B, Bp, left * op};
}

inline AssembledForm assemble_form(const GkzBasis& g, const IntVec& q, ContiguityCache& cache) {
  std::string last;
  for (auto& r : decompose_form_index(g.config, q)) {
    try {
      return assemble_form_with(g, q, r, cache);
    } catch (const DegenerateError& e) {
      last = e.what();
    }
  }
  throw DegenerateError("every decomposition of the form index is degenerate: " + last);
}

}  // namespace gkz
