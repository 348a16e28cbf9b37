// One PASS/FAIL line per acceptance criterion; exit status 0 only when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "fixtures.hpp"
#include "gkz/l2.hpp"

using namespace gkz;
using namespace gkz::fixtures;

namespace {

double to_d(const Real& x) { return x.convert_to<double>(); }
double mag(const Complex& z) { return to_d(abs(z)); }

std::vector<Complex> qpoint(const QVec& v) {
  std::vector<Complex> z;
  for (auto& x : v) z.emplace_back(to_real(x));
  return z;
}

QVec negate(const QVec& v) {
  QVec r;
  for (auto& x : v) r.push_back(-x);
  return r;
}

// Seeded rational parameter that keeps every simplex of t very generic.
QVec random_beta(std::mt19937& rng, const CayleyConfig& a, const Triangulation& t) {
  std::uniform_int_distribution<int> num(-150, 150), den(50, 99);
  for (;;) {
    QVec b;
    for (int i = 0; i < a.d(); ++i) {
      mpq_class v(num(rng), den(rng));
      v.canonicalize();
      b.push_back(v);
    }
    bool ok = true;
    for (auto& s : t.simplices) {
      try {
        require_very_generic(simplex_data(a, s), negate(b));
      } catch (const ParameterError&) {
        ok = false;
      }
    }
    if (ok) return b;
  }
}

double relative_residual(const WeylOperator& op, const TruncatedSeries& s, const std::vector<Complex>& z) {
  Complex total = evaluate(apply_operator(op, s), z).value;
  double scale = 0;
  for (auto& [alpha, c] : op.terms())
    scale += mag(evaluate(apply_operator(WeylOperator::monomial(op.ring(), alpha, c), s), z).value);
  return mag(total) / scale;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

MultiPoly random_poly(std::mt19937& rng, int terms, int vars, int maxdeg) {
  std::uniform_int_distribution<int> coef(-5, 5), slot(0, vars - 1), deg(0, maxdeg);
  std::vector<Term> ts;
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    for (int k = deg(rng); k > 0; --k) {
      int s = slot(rng);
      m.set(s, m[s] + 1);
    }
    if (int c = coef(rng)) ts.push_back({m, c});
  }
  return MultiPoly::from_terms(ts);
}

WeylOperator random_op(std::mt19937& rng, WeylRing r) {
  std::uniform_int_distribution<int> coef(-3, 3), pick(0, r.N - 1), deg(0, 2), slot(0, r.d + r.N - 1);
  WeylOperator op(r);
  for (int t = 0; t < 3; ++t) {
    Monomial dm, cm;
    for (int k = deg(rng); k > 0; --k) {
      int j = pick(rng);
      dm.set(j, dm[j] + 1);
    }
    for (int k = deg(rng); k > 0; --k) {
      int s = slot(rng);
      cm.set(s, cm[s] + 1);
    }
    op += WeylOperator::monomial(r, dm, RatFun(MultiPoly::term(cm, coef(rng))));
  }
  return op;
}

struct Criterion {
  int number;
  std::string title;
  double limit_seconds;
  std::function<void(std::vector<Check>&)> body;
};

}  // namespace

int main() {
  const std::uint64_t seed = 7;
  Example gauss = gauss_example(), tf2 = three_f2_example();

  auto numeric_series = [&](std::vector<Check>& out) {
    std::mt19937 rng(seed);
    struct Case {
      Example* e;
      std::vector<int> sigma;
      QVec z;
    };
    std::vector<Case> cases{
        {&gauss, {0, 1, 2}, {mpq_class(11, 10), mpq_class(9, 10), mpq_class(13, 10), mpq_class(1, 20)}},
        {&tf2, {1, 2, 3, 4, 5}, {mpq_class(1, 50), mpq_class(11, 10), mpq_class(9, 10), mpq_class(6, 5), mpq_class(4, 5), mpq_class(21, 20)}}};
    for (auto& c : cases) {
      Example& e = *c.e;
      const CayleyConfig& a = e.config;
      e.build_intersection();
      auto z = qpoint(c.z);
      std::vector<mpq_class> vals;

      // (a) generators of H_A(beta) on phi_sigma for every simplex of T
      QVec beta = random_beta(rng, a, e.t);
      double worst = 0;
      for (auto& sigma : e.t.simplices) {
        auto s = phi_series(a, negate(beta), sigma, 12);
        for (auto& g : gkz_generators(a, e.basis->toric))
          worst = std::max(worst, relative_residual(substitute_parameters(g, beta), s, z));
      }
      expect(out, e.name + " (a) generators annihilate phi", worst < 1e-10, "relative residual " + sci(worst));

      // (b) dz_i Y = P_i Y with Y_r = F(q_r) phi_sigma
      beta = random_beta(rng, a, e.t);
      auto s = phi_series(a, negate(beta), c.sigma, 12);
      vals.assign(beta.begin(), beta.end());
      vals.insert(vals.end(), c.z.begin(), c.z.end());
      WeylRing ring = e.basis->gb.ring();
      std::vector<WeylOperator> f;
      std::vector<Complex> y;
      for (auto& form : e.pf->forms()) {
        f.push_back(substitute_parameters(form.op, beta));
        y.push_back(evaluate(apply_operator(f.back(), s), z).value);
      }
      worst = 0;
      for (int i = 0; i < a.N(); ++i) {
        RatMatrix p = e.pf->matrix(i);
        for (std::size_t r = 0; r < f.size(); ++r) {
          Complex lhs = evaluate(apply_operator(WeylOperator::d(ring, i) * f[r], s), z).value, rhs;
          for (std::size_t col = 0; col < f.size(); ++col) rhs += Complex(to_real(p(r, col).evaluate(vals))) * y[col];
          worst = std::max(worst, mag(lhs - rhs) / mag(lhs));
        }
      }
      expect(out, e.name + " (b) Pfaffian on series", worst < 1e-8, "relative residual " + sci(worst));

      // (c) exact intersection matrix against the series side inside the cone
      beta = random_beta(rng, a, e.t);
      vals.assign(beta.begin(), beta.end());
      vals.insert(vals.end(), c.z.begin(), c.z.end());
      worst = 0;
      std::size_t compared = 0;
      for (std::size_t k = 0; k < e.q.size(); ++k)
        for (std::size_t l = 0; l < e.q.size(); ++l) {
          SeriesValue v;
          try {
            v = rcin_rhs(a, negate(beta), e.t, form_pair(a, e.q[k], e.q[l]), 12, z);
          } catch (const ParameterError&) {
            continue;
          }
          double exact = to_d(to_real(e.res->ich(k, l).evaluate(vals)));
          worst = std::max(worst, std::hypot(to_d(v.value.re) - exact, to_d(v.value.im)) / std::abs(exact));
          ++compared;
        }
      expect(out, e.name + " (c) intersection vs series", compared > 0 && worst < 1e-8,
             "relative error " + sci(worst) + " over " + std::to_string(compared) + " entries");
    }
  };

  auto l2_checks = [&](std::vector<Check>& out) {
    double expect_beta = beta_closed_form(0.3, 0.4);
    auto q = quadrature_oracle({{1.0, -1.0}}, {0.6}, 0.3);
    double err = std::abs(q.value - expect_beta) / expect_beta;
    expect(out, "Beta quadrature vs closed form", err < 1e-3, "relative error " + sci(err));
    L2IntegralSpec spec{two_f1_config(),
                        {mpq_class(3, 10), mpq_class(2, 5), mpq_class(3, 5)},
                        {Complex(Real(1)), Complex(Real("0.2")), Complex(Real(-1)), Complex(Real(-1))},
                        one_based({{1, 2, 4}, {1, 3, 4}}),
                        12};
    double series = to_d(l2_series_value(spec).value);
    auto q2 = quadrature_oracle({{1.0, -1.0}, {0.2, -1.0}}, {0.3, 0.4}, 0.6);
    err = std::abs(q2.value - series) / std::abs(series);
    expect(out, "2F1 quadrature vs series at z = 0.2", err < 1e-3, "relative error " + sci(err));
  };

  auto properties = [&](std::vector<Check>& out) {
    std::mt19937 rng(seed);
    SymbolTable sym = SymbolTable::gkz(3, 4);
    bool ok = true;
    for (int it = 0; it < 100 && ok; ++it) {
      auto f = random_poly(rng, 6, 7, 4), g = random_poly(rng, 6, 7, 4);
      ok = parse_poly(poly_to_string(f, sym), sym) == f && (f + g) - g == f;
      if (!g.is_zero()) {
        RatFun r = RatFun(f) / RatFun(g);
        ok = ok && parse_ratfun(ratfun_to_string(r, sym), sym) == r && r * RatFun(g) == RatFun(f);
      }
    }
    expect(out, "polynomial and rational function round trips", ok);

    WeylRing r{2, 3};
    ok = true;
    for (int it = 0; it < 60 && ok; ++it) {
      auto p = random_op(rng, r), q = random_op(rng, r), s = random_op(rng, r);
      ok = (p * q) * s == p * (q * s);
    }
    expect(out, "Weyl associativity", ok);
    ok = true;
    for (int i = 0; i < r.N; ++i)
      for (int j = 0; j < r.N; ++j) {
        auto di = WeylOperator::d(r, i);
        WeylOperator zj(r, RatFun(MultiPoly::var(r.z(j))));
        ok = ok && di * zj - zj * di == WeylOperator(r, RatFun(i == j ? 1 : 0));
      }
    expect(out, "Weyl commutators", ok);

    ok = true;
    for (const CayleyConfig* a : {&gauss_config(), &two_f1_config(), &three_f2_config()})
      for (auto order : {TermOrder::grevlex(a->N()), TermOrder::lex(a->N())}) ok = ok && gkz_groebner(*a, order).gb.verify();
    expect(out, "Groebner S-pair certificates", ok);

    ok = true;
    std::uniform_int_distribution<long> u(-9, 9), lam(1, 7);
    for (const CayleyConfig* a : {&gauss_config(), &two_f1_config(), &three_f2_config()})
      for (int it = 0; it < 40; ++it) {
        QVec w(std::size_t(a->N()));
        for (auto& x : w) x = u(rng);
        Triangulation t;
        try {
          t = regular_triangulation(*a, w);
        } catch (const DegenerateError&) {
          continue;
        }
        mpq_class l(lam(rng), lam(rng));
        l.canonicalize();
        QVec w2 = w;
        for (auto& x : w2) x *= l;
        ok = ok && regular_triangulation(*a, w2) == t && in_cone_CT(*a, w2, t);
      }
    expect(out, "T(lambda omega) = T(omega)", ok);
  };

  std::vector<Criterion> criteria{
      {1, "toric ideal and standard monomials", 5, [&](auto& out) { check_toric(out, gauss); }},
      {2, "direction 4 contiguity certificate", 10, [&](auto& out) { check_contiguity(out, gauss); }},
      {3, "Pfaffian fixtures (gauss)", 10, [&](auto& out) { check_pfaffian(out, gauss); }},
      {3, "Pfaffian fixtures (3f2)", 120, [&](auto& out) { check_pfaffian(out, tf2); }},
      {4, "integrability", 120,
       [&](auto& out) {
         check_integrability(out, gauss);
         check_integrability(out, tf2);
       }},
      {5, "secondary equation residual and dimension", 120,
       [&](auto& out) {
         check_secondary(out, gauss);
         check_secondary(out, tf2);
       }},
      {6, "normalized intersection fixtures", 60,
       [&](auto& out) {
         check_intersection(out, gauss);
         check_intersection(out, tf2);
       }},
      {7, "numeric series certificates", 60, numeric_series},
      {8, "triangulation fixtures", 10,
       [&](auto& out) {
         check_triangulation(out, "gauss", gauss_config(), one_based({{1, 2, 3}, {2, 3, 4}}), seed);
         check_triangulation(out, "2f1", two_f1_config(), one_based({{1, 2, 4}, {1, 3, 4}}), seed);
         check_triangulation(out, "3f2", three_f2_config(), one_based({{2, 3, 4, 5, 6}, {1, 2, 4, 5, 6}, {1, 2, 3, 4, 6}}),
                             seed);
       }},
      {9, "L2 integrals", 120, l2_checks},
      {10, "property suites", 120, properties},
  };

  bool all = true;
  for (auto& c : criteria) {
    std::vector<Check> out;
    auto t0 = std::chrono::steady_clock::now();
    guarded(out, c.title, [&] { c.body(out); });
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = !out.empty() && secs < c.limit_seconds;
    std::string why;
    for (auto& x : out)
      if (!x.ok) {
        ok = false;
        why += "; " + x.name + (x.detail.empty() ? "" : ": " + x.detail);
      }
    if (secs >= c.limit_seconds) why += "; exceeded " + std::to_string(int(c.limit_seconds)) + " s";
    all = all && ok;
    std::printf("criterion %2d: %s  %-45s %7.2f s%s\n", c.number, ok ? "PASS" : "FAIL", c.title.c_str(), secs, why.c_str());
  }
  return all ? 0 : 1;
}
