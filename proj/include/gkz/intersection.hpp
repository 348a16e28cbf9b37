#pragma once

#include <map>
#include <random>
#include <vector>

#include "gkz/pfaffian.hpp"
#include "gkz/series.hpp"

namespace gkz {

// dz_i I = P_i I + I tP_i^dual for all i; P_i = tOmega_i.
struct SecondarySystem {
  CayleyConfig config;
  std::vector<RatMatrix> p, p_dual;
};

inline SecondarySystem secondary_system(const Pfaffian& primal, const Pfaffian& dual) {
  const CayleyConfig& a = primal.gkz().config;
  SecondarySystem s{a, primal.all(), {}};
  for (auto& m : dual.all()) s.p_dual.push_back(dual_matrix(m, a.d()));
  return s;
}

inline RatMatrix secondary_residual(const SecondarySystem& s, const RatMatrix& m, int i) {
  std::size_t slot = std::size_t(s.config.d() + i);
  return m.derivative(slot) - s.p[std::size_t(i)] * m - m * s.p_dual[std::size_t(i)].transpose();
}

struct SecondarySolution {
  RatMatrix matrix;
  std::vector<int> slice;  // simplex whose coordinates were set to 1
  unsigned exponent = 0, degree = 0;
  std::size_t dimension = 0, unknowns = 0;
};

struct SecondaryOptions {
  unsigned max_degree = 8, max_exponent = 3;
  std::uint64_t seed = 7;
};

namespace detail {

inline std::uint32_t slot_mask(std::size_t from, std::size_t to) {
  std::uint32_t m = 0;
  for (std::size_t i = from; i < to; ++i) m |= 1u << i;
  return m;
}

// The factor of p that involves the slots in mask (p divided by its content over the other slots).
inline MultiPoly part_in(const MultiPoly& p, std::uint32_t mask) {
  if (!(p.support() & mask)) return MultiPoly(1);
  MultiPoly c = gcd_list(p.coefficients_on(mask));
  return p.divide_exact(c)->primitive();
}

// Row reduction over Q tracking which input rows were kept.
struct QEchelon {
  std::vector<QVec> rows;
  std::vector<std::size_t> pivots;
  bool add(QVec v) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const mpq_class& f = v[pivots[r]];
      if (f == 0) continue;
      mpq_class g = f;
      for (std::size_t c = 0; c < v.size(); ++c)
        if (rows[r][c] != 0) v[c] -= g * rows[r][c];
    }
    for (std::size_t c = 0; c < v.size(); ++c)
      if (v[c] != 0) {
        mpq_class p = v[c];
        for (auto& x : v) x /= p;
        rows.push_back(std::move(v));
        pivots.push_back(c);
        return true;
      }
    return false;
  }
};

using SparseRow = std::map<std::size_t, MultiPoly>;

// Kernel vector of rows (rank n-1 over Q(b)) with x[free] = 1. Sparse elimination over Q(b) with Markowitz pivots,
// then back substitution.
inline std::vector<RatFun> ratfun_kernel_vector(const std::vector<SparseRow>& rows, std::size_t n, std::size_t free) {
  using Row = std::map<std::size_t, RatFun>;
  std::vector<Row> m;
  for (auto& r : rows) {
    Row v;
    for (auto& [c, p] : r) v[c] = RatFun(p);
    m.push_back(std::move(v));
  }
  auto weight = [](const RatFun& f) { return f.num().size() + f.den().size(); };
  std::vector<bool> done(m.size(), false);
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t step = 0; step < m.size(); ++step) {
    std::vector<std::size_t> colcount(n, 0);
    for (std::size_t r = 0; r < m.size(); ++r)
      if (!done[r])
        for (auto& [c, v] : m[r]) ++colcount[c];
    std::size_t br = m.size(), bc = n, bcost = 0, bw = 0;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (done[r]) continue;
      for (auto& [c, v] : m[r]) {
        if (c == free) continue;
        std::size_t cost = (m[r].size() - 1) * (colcount[c] - 1), w = weight(v);
        if (br == m.size() || cost < bcost || (cost == bcost && w < bw)) {
          br = r;
          bc = c;
          bcost = cost;
          bw = w;
        }
      }
    }
    if (br == m.size()) throw DegenerateError("secondary equation: dependent equations in the symbolic solve");
    done[br] = true;
    order.push_back({br, bc});
    RatFun inv = m[br][bc].inverse();
    for (auto& [c, v] : m[br]) v *= inv;
    for (std::size_t o = 0; o < m.size(); ++o) {
      if (done[o]) continue;
      auto it = m[o].find(bc);
      if (it == m[o].end()) continue;
      RatFun f = it->second;
      for (auto& [c, v] : m[br]) {
        RatFun nv = m[o][c] - f * v;
        if (nv.is_zero()) m[o].erase(c);
        else m[o][c] = nv;
      }
    }
  }
  std::vector<RatFun> x(n);
  std::vector<bool> known(n, false);
  x[free] = RatFun(1);
  known[free] = true;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto [r, c] = *it;
    RatFun s;
    for (auto& [j, v] : m[r]) {
      if (j == c) continue;
      if (!known[j]) throw DegenerateError("secondary equation: underdetermined symbolic solve");
      if (!x[j].is_zero()) s += v * x[j];
    }
    x[c] = -s;
    known[c] = true;
  }
  return x;
}

}  // namespace detail

// Rational solution of the secondary equation. The solution is found on the slice z_s = 1 for a unimodular simplex s,
// as N/Q^e with N of degree <= deg in the remaining coordinates, then extended by the torus weights read off from the
// Euler relations. The extension is certified against every direction.
inline SecondarySolution solve_secondary(const SecondarySystem& sys, const SecondaryOptions& opt = {}) {
  const CayleyConfig& a = sys.config;
  int d = a.d(), N = a.N();
  std::size_t r = sys.p.at(0).rows();
  auto zslot = [&](int j) { return std::size_t(d + j); };
  std::uint32_t zmask = detail::slot_mask(std::size_t(d), std::size_t(d + N));

  // torus weights: sum_j a_ij z_j P_j must be a constant diagonal matrix
  std::vector<std::vector<IntVec>> weight(r, std::vector<IntVec>(r, IntVec(std::size_t(d))));
  for (int i = 0; i < d; ++i) {
    RatMatrix s(r, r), sd(r, r);
    for (int j = 0; j < N; ++j) {
      if (!a.entry(i, j)) continue;
      RatFun f = RatFun(MultiPoly::var(zslot(j))) * RatFun(a.entry(i, j));
      s = s + sys.p[std::size_t(j)].scaled(f);
      sd = sd + sys.p_dual[std::size_t(j)].scaled(f);
    }
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t l = 0; l < r; ++l) {
        if (k != l && (!s(k, l).is_zero() || !sd(k, l).is_zero()))
          throw DegenerateError("Euler relations of the Pfaffian system are not diagonal");
        RatFun w = s(k, k) + sd(l, l);
        if (!w.is_constant() || w.num().constant_value().get_den() != 1)
          throw DegenerateError("torus weight of the intersection matrix is not an integer");
        weight[k][l][std::size_t(i)] = w.num().constant_value().get_num().get_si();
      }
  }

  // slice simplex: unimodular, with all sliced coefficients defined
  std::vector<int> sigma;
  std::vector<RatMatrix> sp, spd;
  std::vector<int> rest;
  for (auto& cand : all_simplices(a)) {
    mpq_class det = simplex_det(a, cand);
    if (det != 1 && det != -1) continue;
    try {
      std::vector<RatMatrix> x, y;
      std::vector<int> free;
      for (int j = 0; j < N; ++j) {
        if (std::find(cand.begin(), cand.end(), j) != cand.end()) continue;
        RatMatrix m = sys.p[std::size_t(j)], md = sys.p_dual[std::size_t(j)];
        for (int c : cand) {
          m = m.substitute(zslot(c), mpq_class(1));
          md = md.substitute(zslot(c), mpq_class(1));
        }
        x.push_back(m);
        y.push_back(md);
        free.push_back(j);
      }
      sigma = cand;
      sp = x;
      spd = y;
      rest = free;
      break;
    } catch (const ParameterError&) {
    }
  }
  if (sigma.empty()) throw DegenerateError("no unimodular simplex gives a regular slice");

  // Q: product of the distinct coordinate-dependent denominator factors on the slice
  MultiPoly qpoly(1);
  std::vector<MultiPoly> lden;
  for (std::size_t t = 0; t < rest.size(); ++t) {
    MultiPoly l(1);
    for (auto* m : {&sp[t], &spd[t]})
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
          l = poly_lcm(l, (*m)(i, j).den());
          qpoly = poly_lcm(qpoly, detail::part_in((*m)(i, j).den(), zmask));
        }
    lden.push_back(l);
  }
  qpoly = squarefree_part(qpoly);

  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<long> pick(2, 997);
  std::vector<mpq_class> probe(kMaxSlots, 0);
  for (int i = 0; i < d; ++i) {
    probe[std::size_t(i)] = mpq_class(pick(rng), pick(rng) + 1000);
    probe[std::size_t(i)].canonicalize();
  }

  for (unsigned deg = 0; deg <= opt.max_degree; ++deg)
    for (unsigned e = 0; e <= opt.max_exponent; ++e) {
      // unknown index: ((k * r) + l) * M + monomial
      std::vector<Monomial> mons;
      {
        std::vector<std::size_t> slots;
        for (int j : rest) slots.push_back(zslot(j));
        std::function<void(std::size_t, unsigned, Monomial)> rec = [&](std::size_t pos, unsigned left, Monomial m) {
          if (pos == slots.size()) {
            mons.push_back(m);
            return;
          }
          for (unsigned v = 0; v <= left; ++v) {
            Monomial x = m;
            x.set(slots[pos], v);
            rec(pos + 1, left - v, x);
          }
        };
        rec(0, deg, Monomial());
      }
      std::size_t M = mons.size(), n = r * r * M;
      MultiPoly qe = qpoly.pow(e);
      // rows keyed by (direction, k, l, coordinate monomial)
      std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::vector<std::uint8_t>>, detail::SparseRow> eqs;
      auto add = [&](std::size_t t, std::size_t k, std::size_t l, std::size_t unknown, const MultiPoly& p) {
        for (auto& term : p.terms()) {
          std::vector<std::uint8_t> key;
          Monomial coef;
          for (std::size_t s = 0; s < kMaxSlots; ++s) {
            if ((zmask >> s) & 1u) key.push_back(std::uint8_t(term.m[s]));
            else coef.set(s, term.m[s]);
          }
          auto& row = eqs[{t, k, l, key}];
          row[unknown] += MultiPoly::term(coef, term.c);
        }
      };
      for (std::size_t t = 0; t < rest.size(); ++t) {
        std::size_t slot = zslot(rest[t]);
        const MultiPoly& L = lden[t];
        MultiPoly dq = qpoly.derivative(slot);
        std::vector<std::vector<MultiPoly>> mp(r, std::vector<MultiPoly>(r)), md(r, std::vector<MultiPoly>(r));
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j) {
            mp[i][j] = (RatFun(L) * sp[t](i, j)).num();
            md[i][j] = (RatFun(L) * spd[t](i, j)).num();
          }
        for (std::size_t k2 = 0; k2 < r; ++k2)
          for (std::size_t l2 = 0; l2 < r; ++l2)
            for (std::size_t u = 0; u < M; ++u) {
              std::size_t unknown = (k2 * r + l2) * M + u;
              MultiPoly y = MultiPoly::term(mons[u], 1);
              // dz of N/Q^e times Q^{e+1} L
              add(t, k2, l2, unknown, L * (qpoly * y.derivative(slot) - y * dq.scaled(mpq_class(long(e)))));
              for (std::size_t k = 0; k < r; ++k)
                if (!mp[k][k2].is_zero()) add(t, k, l2, unknown, -(qpoly * mp[k][k2] * y));
              for (std::size_t l = 0; l < r; ++l)
                if (!md[l][l2].is_zero()) add(t, k2, l, unknown, -(qpoly * md[l][l2] * y));
            }
      }
      std::vector<detail::SparseRow> rows;
      for (auto& [key, row] : eqs) {
        detail::SparseRow clean;
        for (auto& [c, p] : row)
          if (!p.is_zero()) clean[c] = p;
        if (!clean.empty()) rows.push_back(std::move(clean));
      }
      detail::QEchelon ech;
      std::vector<detail::SparseRow> kept;
      for (auto& row : rows) {
        QVec v(n, 0);
        for (auto& [c, p] : row) v[c] = p.evaluate(probe);
        if (ech.add(std::move(v))) kept.push_back(row);
        if (ech.rows.size() == n) break;
      }
      std::size_t dim = n - ech.rows.size();
      if (dim == 0) continue;
      if (dim > 1)
        throw DegenerateError("secondary equation has a " + std::to_string(dim) + "-dimensional rational solution space");
      std::vector<bool> is_pivot(n, false);
      for (auto p : ech.pivots) is_pivot[p] = true;
      std::size_t free = std::find(is_pivot.begin(), is_pivot.end(), false) - is_pivot.begin();
      auto x = detail::ratfun_kernel_vector(kept, n, free);

      RatMatrix slice(r, r);
      for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = 0; l < r; ++l) {
          RatFun s;
          for (std::size_t u = 0; u < M; ++u) {
            const RatFun& c = x[(k * r + l) * M + u];
            if (!c.is_zero()) s += c * RatFun(MultiPoly::term(mons[u], 1));
          }
          slice(k, l) = s * RatFun(MultiPoly(1), qe);
        }

      // extend off the slice: I_kl(z) = z_s^{A_s^{-1} w_kl} I_kl(y), y_j = z_j z_s^{-A_s^{-1} a(j)}
      auto sd = simplex_data(a, sigma);
      auto laurent = [&](const IntVec& ex) {
        MultiPoly num(1), den(1);
        for (std::size_t i = 0; i < ex.size(); ++i) {
          if (ex[i] > 0) num *= MultiPoly::var(zslot(sigma[i])).pow(unsigned(ex[i]));
          if (ex[i] < 0) den *= MultiPoly::var(zslot(sigma[i])).pow(unsigned(-ex[i]));
        }
        return RatFun(num, den);
      };
      RatMatrix full(r, r);
      for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = 0; l < r; ++l) {
          RatFun f = slice(k, l);
          for (std::size_t t = 0; t < rest.size(); ++t) {
            IntVec neg(sd.shift[t].size());
            for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -sd.shift[t][i];
            f = f.substitute(zslot(rest[t]), RatFun(MultiPoly::var(zslot(rest[t]))) * laurent(neg));
          }
          QVec mu = q_apply(sd.inv, QVec(weight[k][l].begin(), weight[k][l].end()));
          IntVec ex;
          for (auto& v : mu) ex.push_back(v.get_num().get_si());
          full(k, l) = f * laurent(ex);
        }
      for (int i = 0; i < N; ++i)
        if (!secondary_residual(sys, full, i).is_zero())
          throw DegenerateError("extended solution fails the secondary equation in direction " + std::to_string(i + 1));
      return {full, sigma, e, deg, dim, n};
    }
  throw ResourceError("no rational solution of the secondary equation within the degree bounds");
}

// Laurent coefficients c_p, c_{p+1}, ... of f along z_j = zeta_j eps^{omega_j}; returns the valuation p.
inline long laurent_along(const RatFun& f, int d, const IntVec& omega, const QVec& zeta, std::size_t count,
                          std::vector<RatFun>& out) {
  std::size_t eps = std::size_t(d) + omega.size();
  if (eps >= kMaxSlots) throw ResourceError("too many variables for a Laurent expansion");
  RatFun g = f;
  for (long w : omega)
    if (w < 0) throw ParameterError("Laurent expansion needs a nonnegative weight");
  for (std::size_t j = 0; j < omega.size(); ++j) {
    RatFun v(MultiPoly::var(eps).pow(unsigned(omega[j])).scaled(zeta[j]));
    g = g.substitute(std::size_t(d) + j, v);
  }
  auto series = [&](const MultiPoly& p, long& val) {
    auto cs = p.coefficients_in(eps);
    std::size_t v = 0;
    while (v < cs.size() && cs[v].is_zero()) ++v;
    val = long(v);
    return std::vector<MultiPoly>(cs.begin() + long(v), cs.end());
  };
  long vn, vd;
  auto n = series(g.num(), vn), dn = series(g.den(), vd);
  out.clear();
  for (std::size_t i = 0; i < count; ++i) {
    RatFun c = i < n.size() ? RatFun(n[i]) : RatFun();
    for (std::size_t j = 1; j <= i && j < dn.size(); ++j) c -= out[i - j] * RatFun(dn[j]);
    out.push_back(c / RatFun(dn[0]));
  }
  return vn - vd;
}

struct IntersectionResult {
  RatMatrix raw, ich;  // ich holds I_ch / (2 pi i)^n
  RatFun c;
  int two_pi_i_power = 0;
  std::size_t row = 0, col = 0;
  long order = 0;
  IntVec omega;
  QVec zeta;
};

// Picks an integer weight of C_T: a unit vector when one lies in the cone, else an LP point.
inline IntVec normalization_weight(const CayleyConfig& a, const Triangulation& t) {
  for (int j = 0; j < a.N(); ++j) {
    QVec w(std::size_t(a.N()), 0);
    w[std::size_t(j)] = 1;
    if (in_cone_CT(a, w, t)) {
      IntVec v(std::size_t(a.N()), 0);
      v[std::size_t(j)] = 1;
      return v;
    }
  }
  auto w = cone_point(a, t);
  if (!w) throw NormalizationError("no integer weight in the cone of the triangulation");
  IntVec v;
  for (auto& x : *w) v.push_back(x.get_num().get_si());
  return v;
}

// Scales the raw solution by comparing one Laurent coefficient with the series side of the quadratic relation,
// and checks the next coefficient as well.
inline IntersectionResult normalize_intersection(const CayleyConfig& a, const RatMatrix& raw, const std::vector<IntVec>& q,
                                                 const std::vector<IntVec>& q_dual, const Triangulation& t,
                                                 IntVec omega = {}, QVec zeta = {}) {
  if (omega.empty()) omega = normalization_weight(a, t);
  if (zeta.empty()) zeta.assign(std::size_t(a.N()), 1);
  if (omega.size() != std::size_t(a.N()) || zeta.size() != std::size_t(a.N()))
    throw ParameterError("normalization curve has the wrong length");
  if (!in_cone_CT(a, QVec(omega.begin(), omega.end()), t))
    throw ParameterError("normalization weight is not in the cone of the triangulation");
  for (std::size_t k = 0; k < raw.rows(); ++k)
    for (std::size_t l = 0; l < raw.cols(); ++l) {
      if (raw(k, l).is_zero()) continue;
      std::vector<RatFun> co;
      long p = laurent_along(raw(k, l), a.d(), omega, zeta, 2, co);
      FormPair fp = form_pair(a, q[k], q_dual[l]);
      RatFun truth = rcin_laurent_coefficient(a, t, fp, omega, zeta, p);
      if (truth.is_zero()) continue;
      RatFun c = truth / co[0];
      if (!rcin_laurent_coefficient(a, t, fp, omega, zeta, p - 1).is_zero() ||
          rcin_laurent_coefficient(a, t, fp, omega, zeta, p + 1) != c * co[1])
        throw NormalizationError("Laurent expansions of the raw solution and of the series side disagree");
      if (c.support() & detail::slot_mask(std::size_t(a.d()), std::size_t(a.d() + a.N())))
        throw NormalizationError("normalizing scalar depends on z");
      IntersectionResult res{raw, raw.scaled(c), c, a.n(), k, l, p, omega, zeta};
      return res;
    }
  throw NormalizationError("every entry vanishes to all tested orders along the normalization curve");
}

}  // namespace gkz
