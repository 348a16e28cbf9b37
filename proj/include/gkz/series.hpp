#pragma once

#include <boost/math/special_functions/gamma.hpp>

#include <functional>
#include <map>
#include <vector>

#include "gkz/triangulation.hpp"
#include "gkz/numeric.hpp"
#include "gkz/weyl.hpp"

namespace gkz {

// A_s^{-1}, the columns outside s, and the integer vectors A_s^{-1} a(j) for those columns.
struct SimplexData {
  std::vector<int> sigma, rest;
  QMat inv;
  std::vector<IntVec> shift;
};

inline SimplexData simplex_data(const CayleyConfig& a, const std::vector<int>& sigma) {
  SimplexData s;
  s.sigma = sigma;
  mpq_class det = simplex_det(a, sigma);
  if (det != 1 && det != -1) throw ParameterError("simplex " + simplex_label(sigma) + " is not unimodular");
  s.inv = q_inverse(column_submatrix(a, sigma)).value();
  for (int j = 0; j < a.N(); ++j) {
    if (std::find(sigma.begin(), sigma.end(), j) != sigma.end()) continue;
    s.rest.push_back(j);
    IntVec v(sigma.size());
    for (std::size_t r = 0; r < sigma.size(); ++r) {
      mpq_class c = 0;
      for (int i = 0; i < a.d(); ++i) c += s.inv[r][std::size_t(i)] * a.entry(i, j);
      v[r] = c.get_num().get_si();
    }
    s.shift.push_back(v);
  }
  return s;
}

inline QVec apply_inverse(const SimplexData& s, const QVec& v) { return q_apply(s.inv, v); }

// Calls f(m) for every m in Z_{>=0}^len with |m| <= k, in increasing total degree.
inline void for_each_bounded(std::size_t len, int k, const std::function<void(const IntVec&)>& f) {
  IntVec m(len, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    if (pos + 1 >= len) {
      if (len) m[len - 1] = left;
      f(m);
      return;
    }
    for (int v = left; v >= 0; --v) {
      m[pos] = v;
      rec(pos + 1, left - v);
    }
    m[pos] = 0;
  };
  for (int total = 0; total <= k; ++total) {
    if (len == 0) {
      if (total == 0) f(m);
      continue;
    }
    rec(0, total);
  }
}

inline Real real_factorial(const IntVec& m) {
  Real r = 1;
  for (long v : m)
    for (long t = 2; t <= v; ++t) r *= t;
  return r;
}

// Throws ParameterError when some entry of A_s^{-1} delta is an integer, which puts a Gamma pole in a kept term.
inline void require_very_generic(const SimplexData& s, const QVec& delta) {
  for (auto& v : apply_inverse(s, delta))
    if (v.get_den() == 1) throw ParameterError("parameter is not very generic for simplex " + simplex_label(s.sigma));
}

// sum_e c_e z^{leading + e} over integer exponent vectors e; shell records |m| of the series term a summand came from.
struct TruncatedSeries {
  std::vector<int> sigma;
  QVec delta;
  int K = 0;
  QVec leading_exponent;
  struct Coefficient {
    Complex c;
    int shell = 0;
  };
  std::map<IntVec, Coefficient> terms;
};

struct SeriesValue {
  Complex value;
  Real last_shell;
};

inline TruncatedSeries make_series(const CayleyConfig& a, const QVec& delta, const std::vector<int>& sigma, int K,
                                   bool with_prefactor) {
  if (int(delta.size()) != a.d()) throw ParameterError("parameter has the wrong length");
  auto s = simplex_data(a, sigma);
  require_very_generic(s, delta);
  TruncatedSeries out;
  out.sigma = sigma;
  out.delta = delta;
  out.K = K;
  out.leading_exponent.assign(std::size_t(a.N()), 0);
  QVec base = apply_inverse(s, delta);
  if (with_prefactor)
    for (std::size_t r = 0; r < sigma.size(); ++r) out.leading_exponent[std::size_t(sigma[r])] = -base[r];
  for_each_bounded(s.rest.size(), K, [&](const IntVec& m) {
    IntVec e(std::size_t(a.N()), 0);
    Real g = real_factorial(m);
    int shell = 0;
    for (std::size_t t = 0; t < m.size(); ++t) {
      e[std::size_t(s.rest[t])] = m[t];
      shell += int(m[t]);
    }
    for (std::size_t r = 0; r < sigma.size(); ++r) {
      long sh = 0;
      for (std::size_t t = 0; t < m.size(); ++t) sh += s.shift[t][r] * m[t];
      e[std::size_t(sigma[r])] = -sh;
      g *= boost::math::tgamma(Real(1) - to_real(base[r] + sh));
    }
    out.terms[e] = {Complex(Real(1) / g), shell};
  });
  return out;
}

inline TruncatedSeries phi_series(const CayleyConfig& a, const QVec& delta, const std::vector<int>& sigma, int K) {
  return make_series(a, delta, sigma, K, true);
}
inline TruncatedSeries psi_series(const CayleyConfig& a, const QVec& delta, const std::vector<int>& sigma, int K) {
  return make_series(a, delta, sigma, K, false);
}

inline SeriesValue evaluate(const TruncatedSeries& s, const std::vector<Complex>& z) {
  std::vector<Complex> logs;
  for (auto& x : z) {
    if (x.re == 0 && x.im == 0) throw ParameterError("series evaluated at a point with a zero coordinate");
    logs.push_back(clog(x));
  }
  SeriesValue v{Complex(), Real(0)};
  Complex last;
  for (auto& [e, t] : s.terms) {
    Complex ex;
    for (std::size_t j = 0; j < z.size(); ++j) {
      mpq_class p = s.leading_exponent[j] + e[j];
      if (p != 0) ex += Complex(to_real(p)) * logs[j];
    }
    Complex term = t.c * cexp(ex);
    v.value += term;
    if (t.shell == s.K) last += term;
  }
  v.last_shell = abs(last);
  return v;
}

inline SeriesValue phi_sigma(const CayleyConfig& a, const QVec& delta, const std::vector<int>& sigma, int K,
                             const std::vector<Complex>& z) {
  return evaluate(phi_series(a, delta, sigma, K), z);
}
inline SeriesValue psi_sigma(const CayleyConfig& a, const QVec& delta, const std::vector<int>& sigma, int K,
                             const std::vector<Complex>& z) {
  return evaluate(psi_series(a, delta, sigma, K), z);
}

// P must have beta substituted and polynomial coefficients in z.
inline TruncatedSeries apply_operator(const WeylOperator& p, const TruncatedSeries& s) {
  const WeylRing& ring = p.ring();
  TruncatedSeries out = s;
  out.terms.clear();
  for (auto& [alpha, coef] : p.terms()) {
    if (!coef.den().is_constant()) throw ParameterError("operator coefficient is not polynomial");
    for (std::size_t i = 0; i < std::size_t(ring.d); ++i)
      if (coef.num().degree(i)) throw ParameterError("operator still depends on the parameters");
    mpq_class scale = mpq_class(1) / coef.den().constant_value();
    for (auto& [e, t] : s.terms) {
      IntVec f = e;
      mpq_class fall = 1;
      for (int j = 0; j < ring.N && fall != 0; ++j) {
        mpq_class lam = s.leading_exponent[std::size_t(j)] + e[std::size_t(j)];
        for (unsigned r = 0; r < alpha[std::size_t(j)]; ++r) fall *= lam - r;
        f[std::size_t(j)] -= alpha[std::size_t(j)];
      }
      if (fall == 0) continue;
      for (auto& ct : coef.num().terms()) {
        IntVec g = f;
        for (int j = 0; j < ring.N; ++j) g[std::size_t(j)] += ct.m[ring.z(j)];
        auto& slot = out.terms[g];
        slot.c += t.c * Complex(to_real(fall * ct.c * scale));
        slot.shell = std::max(slot.shell, t.shell);
      }
    }
  }
  for (auto it = out.terms.begin(); it != out.terms.end();)
    it = (it->second.c.re == 0 && it->second.c.im == 0) ? out.terms.erase(it) : std::next(it);
  return out;
}

// Substitutes b_i = values[i] into every coefficient.
inline WeylOperator substitute_parameters(WeylOperator p, const QVec& values) {
  for (std::size_t i = 0; i < values.size(); ++i) p = p.substitute(i, values[i]);
  return p;
}

inline mpq_class pochhammer(const mpq_class& v, long w) {
  mpq_class r = 1;
  if (w >= 0)
    for (long t = 0; t < w; ++t) r *= v + t;
  else
    for (long t = 1; t <= -w; ++t) r /= v - t;
  return r;
}

inline RatFun pochhammer(const RatFun& v, long w) {
  RatFun r(1);
  if (w >= 0)
    for (long t = 0; t < w; ++t) r *= v + RatFun(t);
  else
    for (long t = 1; t <= -w; ++t) r /= v - RatFun(t);
  return r;
}

// Pair of forms x^a h^b dx/x and x^a' h^b' dx/x entering the quadratic relation.
struct FormPair {
  IntVec a, a_prime, b, b_prime;
};

// The forms h^{-q'} x^{q''} dx/x and its dual counterpart.
inline FormPair form_pair(const CayleyConfig& cfg, const IntVec& q, const IntVec& q_dual) {
  FormPair p;
  for (int l = 0; l < cfg.k(); ++l) {
    p.b.push_back(-q[std::size_t(l)]);
    p.b_prime.push_back(-q_dual[std::size_t(l)]);
  }
  for (int i = cfg.k(); i < cfg.d(); ++i) {
    p.a.push_back(q[std::size_t(i)]);
    p.a_prime.push_back(q_dual[std::size_t(i)]);
  }
  return p;
}

// (-1)^{|b|+|b'|} gamma_1...gamma_k (gamma-b)_b (-gamma-b')_{b'}, over any field holding gamma.
template <class F>
F rcin_prefactor(const std::vector<F>& gamma, const FormPair& p) {
  F r(1);
  long sign = 0;
  for (std::size_t l = 0; l < gamma.size(); ++l) {
    r *= gamma[l];
    r *= pochhammer(gamma[l] - F(p.b[l]), p.b[l]);
    r *= pochhammer(F(0) - gamma[l] - F(p.b_prime[l]), p.b_prime[l]);
    sign += p.b[l] + p.b_prime[l];
  }
  if (sign % 2) return F(F(0) - r);
  return r;
}

inline QVec shifted_parameter(const CayleyConfig& cfg, const QVec& delta, const IntVec& b, const IntVec& a) {
  QVec v = delta;
  for (int l = 0; l < cfg.k(); ++l) v[std::size_t(l)] -= b[std::size_t(l)];
  for (int i = cfg.k(); i < cfg.d(); ++i) v[std::size_t(i)] += a[std::size_t(i - cfg.k())];
  return v;
}

// Series side of the quadratic relation: <x^a h^b dx/x, x^a' h^b' dx/x>_ch / (2 pi i)^n, with delta = -beta.
inline SeriesValue rcin_rhs(const CayleyConfig& cfg, const QVec& delta, const Triangulation& t, const FormPair& p, int K,
                            const std::vector<Complex>& z) {
  if (!is_unimodular(cfg, t)) throw ParameterError("triangulation is not unimodular");
  std::vector<mpq_class> gamma(delta.begin(), delta.begin() + cfg.k());
  for (auto& g : gamma)
    if (g.get_den() == 1) throw ParameterError("gamma_l must not be an integer");
  QVec d1 = shifted_parameter(cfg, delta, p.b, p.a);
  QVec neg(delta.size());
  for (std::size_t i = 0; i < delta.size(); ++i) neg[i] = -delta[i];
  QVec d2 = shifted_parameter(cfg, neg, p.b_prime, p.a_prime);
  Real pi = real_pi();
  Real pre = to_real(rcin_prefactor(gamma, p));
  SeriesValue total{Complex(), Real(0)};
  for (auto& sigma : t.simplices) {
    auto s = simplex_data(cfg, sigma);
    Real sines = 1;
    for (auto& u : apply_inverse(s, delta)) {
      if (u.get_den() == 1) throw ParameterError("resonant parameter: a sine factor vanishes");
      sines *= boost::multiprecision::sin(pi * to_real(u));
    }
    Real factor = pre * boost::multiprecision::pow(pi, cfg.d()) / sines;
    SeriesValue f1 = phi_sigma(cfg, d1, sigma, K, z), f2 = phi_sigma(cfg, d2, sigma, K, z);
    total.value += Complex(factor) * f1.value * f2.value;
    total.last_shell += boost::multiprecision::abs(factor) * (f1.last_shell * abs(f2.value) + f2.last_shell * abs(f1.value));
  }
  return total;
}

// Coefficient of eps^p in the quadratic relation along z_j = zeta_j eps^{omega_j}, omega in C_T, exactly in Q(beta).
// Uses Gamma(1-u-x) Gamma(1+u-y) = (pi / sin(pi u)) (1-u)_{-x} (u)_{1-y} so that the sine factors cancel.
inline RatFun rcin_laurent_coefficient(const CayleyConfig& cfg, const Triangulation& t, const FormPair& p,
                                       const IntVec& omega, const QVec& zeta, long order) {
  if (!is_unimodular(cfg, t)) throw ParameterError("triangulation is not unimodular");
  QVec om(omega.begin(), omega.end());
  if (!in_cone_CT(cfg, om, t)) throw ParameterError("weight is not in the cone of the triangulation");
  int d = cfg.d(), N = cfg.N();
  // delta = -beta as linear forms in the parameter slots
  std::vector<RatFun> delta;
  for (int i = 0; i < d; ++i) delta.push_back(RatFun(-MultiPoly::var(std::size_t(i))));
  std::vector<RatFun> gamma(delta.begin(), delta.begin() + cfg.k());
  RatFun pre = rcin_prefactor(gamma, p);
  IntVec off1(std::size_t(d), 0), off2(std::size_t(d), 0);
  for (int l = 0; l < cfg.k(); ++l) {
    off1[std::size_t(l)] = -p.b[std::size_t(l)];
    off2[std::size_t(l)] = -p.b_prime[std::size_t(l)];
  }
  for (int i = cfg.k(); i < d; ++i) {
    off1[std::size_t(i)] = p.a[std::size_t(i - cfg.k())];
    off2[std::size_t(i)] = p.a_prime[std::size_t(i - cfg.k())];
  }
  RatFun total;
  for (auto& sigma : t.simplices) {
    auto s = simplex_data(cfg, sigma);
    std::vector<RatFun> u(static_cast<std::size_t>(d));
    for (int r = 0; r < d; ++r)
      for (int i = 0; i < d; ++i)
        if (s.inv[std::size_t(r)][std::size_t(i)] != 0) u[std::size_t(r)] += RatFun(s.inv[std::size_t(r)][std::size_t(i)]) * delta[std::size_t(i)];
    QVec e1 = q_apply(s.inv, QVec(off1.begin(), off1.end())), e2 = q_apply(s.inv, QVec(off2.begin(), off2.end()));
    // eps order: -omega_s.(e1 + e2 + shift.(m1 + m2)) + omega_rest.(m1 + m2)
    mpq_class base = 0;
    for (int r = 0; r < d; ++r) base -= omega[std::size_t(sigma[std::size_t(r)])] * (e1[std::size_t(r)] + e2[std::size_t(r)]);
    std::vector<long> slack;
    for (std::size_t t2 = 0; t2 < s.rest.size(); ++t2) {
      long v = omega[std::size_t(s.rest[t2])];
      for (int r = 0; r < d; ++r) v -= omega[std::size_t(sigma[std::size_t(r)])] * s.shift[t2][std::size_t(r)];
      slack.push_back(v);
    }
    long b0 = base.get_num().get_si();
    if (order < b0) continue;
    long budget = order - b0;
    // m = m1 + m2 must satisfy slack.m = budget; enumerate m1 and m2 directly
    std::size_t len = s.rest.size();
    long smin = len ? *std::min_element(slack.begin(), slack.end()) : 1;
    int kmax = int(budget / smin);
    for_each_bounded(len, kmax, [&](const IntVec& m1) {
      long used = 0;
      for (std::size_t t2 = 0; t2 < len; ++t2) used += slack[t2] * m1[t2];
      if (used > budget) return;
      for_each_bounded(len, int((budget - used) / smin), [&](const IntVec& m2) {
        long tot = used;
        for (std::size_t t2 = 0; t2 < len; ++t2) tot += slack[t2] * m2[t2];
        if (tot != budget) return;
        RatFun term(1);
        IntVec ex(std::size_t(N), 0);
        for (std::size_t t2 = 0; t2 < len; ++t2) {
          ex[std::size_t(s.rest[t2])] = m1[t2] + m2[t2];
          mpz_class f = 1;
          for (long x = 2; x <= m1[t2]; ++x) f *= x;
          for (long x = 2; x <= m2[t2]; ++x) f *= x;
          term *= RatFun(mpq_class(1, 1) / mpq_class(f));
        }
        for (int r = 0; r < d; ++r) {
          long p1 = 0, p2 = 0;
          for (std::size_t t2 = 0; t2 < len; ++t2) {
            p1 += s.shift[t2][std::size_t(r)] * m1[t2];
            p2 += s.shift[t2][std::size_t(r)] * m2[t2];
          }
          long x = e1[std::size_t(r)].get_num().get_si() + p1;
          long y = e2[std::size_t(r)].get_num().get_si() + p2;
          ex[std::size_t(sigma[std::size_t(r)])] = -(x + y);
          const RatFun& ur = u[std::size_t(r)];
          term /= pochhammer(RatFun(1) - ur, -x) * pochhammer(ur, 1 - y);
        }
        mpq_class z = 1;
        for (int j = 0; j < N; ++j) {
          long e = ex[std::size_t(j)];
          if (e == 0) continue;
          mpq_class zj = zeta[std::size_t(j)];
          for (long c = 0; c < std::labs(e); ++c) z = e > 0 ? mpq_class(z * zj) : mpq_class(z / zj);
        }
        total += term * RatFun(z);
      });
    });
  }
  return pre * total;
}

}  // namespace gkz
