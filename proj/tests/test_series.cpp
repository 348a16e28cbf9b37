#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gkz/pfaffian.hpp"
#include "gkz/series.hpp"

using namespace gkz;

namespace {

const CayleyConfig kGauss(IntMatrix({{1, 1, 0, 0}, {0, 0, 1, 1}, {0, 1, 0, 1}}));
const CayleyConfig k3F2(IntMatrix({{1, 1, 0, 0, 0, 0},
                                    {0, 0, 1, 1, 0, 0},
                                    {0, 0, 0, 0, 1, 1},
                                    {1, 0, 0, 1, 0, 0},
                                    {0, 0, 1, 0, 0, 1}}));
const CayleyConfig kTwoF1(IntMatrix({{1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 1}}));
const CayleyConfig kBeta(IntMatrix({{1, 1}, {0, 1}}));

const GkzBasis& gauss() {
  static GkzBasis g = gkz_groebner(kGauss, TermOrder::grevlex(4));
  return g;
}
const GkzBasis& three_f2() {
  static GkzBasis g = gkz_groebner(k3F2, TermOrder::grevlex(6));
  return g;
}

double to_d(const Real& x) { return x.convert_to<double>(); }
double mag(const Complex& z) { return to_d(abs(z)); }

std::vector<Complex> point(const std::vector<double>& v) {
  std::vector<Complex> z;
  for (double x : v) z.emplace_back(Real(x));
  return z;
}
std::vector<Complex> qpoint(const QVec& v) {
  std::vector<Complex> z;
  for (auto& x : v) z.emplace_back(to_real(x));
  return z;
}

// Random parameter with denominators in 50..99; every simplex of every triangulation in `ts` stays very generic.
QVec random_beta(std::mt19937& rng, int d, const CayleyConfig& a, const std::vector<Triangulation>& ts) {
  std::uniform_int_distribution<int> num(-150, 150), den(50, 99);
  for (;;) {
    QVec b;
    for (int i = 0; i < d; ++i) {
      mpq_class v(num(rng), den(rng));
      v.canonicalize();
      b.push_back(v);
    }
    bool ok = true;
    for (auto& v : b) ok = ok && v.get_den() != 1;
    QVec delta;
    for (auto& v : b) delta.push_back(-v);
    for (auto& t : ts)
      for (auto& s : t.simplices) {
        try {
          require_very_generic(simplex_data(a, s), delta);
        } catch (const ParameterError&) {
          ok = false;
        }
      }
    if (ok) return b;
  }
}

QVec negate(const QVec& v) {
  QVec r;
  for (auto& x : v) r.push_back(-x);
  return r;
}

// |sum| over sum of |term| contributions, with each operator term applied separately.
double relative_residual(const WeylOperator& op, const TruncatedSeries& s, const std::vector<Complex>& z) {
  Complex total = evaluate(apply_operator(op, s), z).value;
  double scale = 0;
  for (auto& [alpha, c] : op.terms())
    scale += mag(evaluate(apply_operator(WeylOperator::monomial(op.ring(), alpha, c), s), z).value);
  return mag(total) / scale;
}

double hyp2f1_gamma(double a, double b, double c, double z, int terms = 200) {
  // sum Gamma(a+m) Gamma(b+m) / (Gamma(c+m) m!) z^m by the term ratio
  double t = std::tgamma(a) * std::tgamma(b) / std::tgamma(c), s = 0;
  for (int m = 0; m < terms; ++m) {
    s += t;
    t *= (a + m) * (b + m) / ((c + m) * (m + 1)) * z;
  }
  return s;
}

}  // namespace

TEST(Series, EmptyComplementIsSingleTerm) {
  QVec delta{mpq_class(1, 3), mpq_class(2, 7)};
  auto s = phi_series(kBeta, delta, {0, 1}, 12);
  ASSERT_EQ(s.terms.size(), 1u);
  // A^{-1} delta = (1/3 - 2/7, 2/7)
  double u1 = 1.0 / 3 - 2.0 / 7, u2 = 2.0 / 7;
  double z1 = 1.7, z2 = 0.6;
  double expect = std::pow(z1, -u1) * std::pow(z2, -u2) / (std::tgamma(1 - u1) * std::tgamma(1 - u2));
  auto v = evaluate(s, point({z1, z2}));
  EXPECT_NEAR(to_d(v.value.re), expect, 1e-14 * std::abs(expect));
  EXPECT_EQ(to_d(v.value.im), 0.0);
  auto p = psi_sigma(kBeta, delta, {0, 1}, 12, point({z1, z2}));
  EXPECT_NEAR(to_d(p.value.re), 1 / (std::tgamma(1 - u1) * std::tgamma(1 - u2)), 1e-14);
}

TEST(Series, DerivativeOfMonomial) {
  WeylRing r = ring_of(kBeta);
  QVec delta{mpq_class(1, 3), mpq_class(2, 7)};
  auto s = phi_series(kBeta, delta, {0, 1}, 4);
  auto d = apply_operator(WeylOperator::d(r, 0), s);
  ASSERT_EQ(d.terms.size(), 1u);
  auto& [e, c] = *d.terms.begin();
  EXPECT_EQ(e, (IntVec{-1, 0}));
  // leading exponent of z1 is -(1/3 - 2/7) = -1/21
  Real a = to_real(mpq_class(-1, 21));
  EXPECT_LT(to_d(abs(c.c - Complex(a) * s.terms.begin()->second.c)), 1e-40);
}

TEST(Series, NotVeryGenericThrows) {
  // A_s^{-1} delta = (delta1 - delta3, delta3, delta2) has a zero entry
  QVec delta{mpq_class(1, 2), mpq_class(1, 3), mpq_class(1, 2)};
  EXPECT_THROW(phi_series(kGauss, delta, {0, 1, 2}, 8), ParameterError);
  EXPECT_THROW(phi_series(kGauss, {mpq_class(1, 5), mpq_class(1, 3)}, {0, 1, 2}, 8), ParameterError);
}

TEST(Series, NonUnimodularSimplexThrows) {
  CayleyConfig a(IntMatrix({{1, 1, 1}, {0, 1, 2}}));
  EXPECT_THROW(phi_series(a, {mpq_class(1, 3), mpq_class(1, 5)}, {0, 2}, 4), ParameterError);
}

TEST(Series, PrefactorIdentity) {
  std::mt19937 rng(17);
  Triangulation t{{{0, 1, 2}, {1, 2, 3}}};
  for (int it = 0; it < 5; ++it) {
    QVec delta = negate(random_beta(rng, 3, kGauss, {t}));
    for (auto& sigma : t.simplices) {
      auto z = point({1.2, 0.8, 0.9, 0.07});
      auto phi = phi_sigma(kGauss, delta, sigma, 12, z).value;
      auto psi = psi_sigma(kGauss, delta, sigma, 12, z).value;
      auto u = apply_inverse(simplex_data(kGauss, sigma), delta);
      Complex pre(Real(1));
      for (std::size_t r = 0; r < sigma.size(); ++r)
        pre *= cexp(Complex(-to_real(u[r])) * clog(z[std::size_t(sigma[r])]));
      EXPECT_LT(to_d(abs(phi - pre * psi) / abs(phi)), 1e-40);
    }
  }
}

TEST(Series, TruncationAgreesWithHigherOrder) {
  QVec delta = negate({mpq_class(13, 71), mpq_class(-29, 83), mpq_class(41, 97)});
  auto z = point({1, 1, 1, 0.1});
  auto lo = phi_sigma(kGauss, delta, {0, 1, 2}, 12, z);
  auto hi = phi_sigma(kGauss, delta, {0, 1, 2}, 16, z);
  double diff = to_d(abs(lo.value - hi.value));
  EXPECT_GT(to_d(lo.last_shell), 0.0);
  EXPECT_LE(diff, 10 * to_d(lo.last_shell));
}

TEST(Series, TailDecreasesGeometrically) {
  QVec delta = negate({mpq_class(13, 71), mpq_class(-29, 83), mpq_class(41, 97)});
  auto z = point({1, 1, 1, 0.1});
  double prev = 0;
  for (int k = 8; k <= 16; ++k) {
    double tail = to_d(phi_sigma(kGauss, delta, {0, 1, 2}, k, z).last_shell);
    if (k > 8) EXPECT_LT(tail, 0.5 * prev) << "K = " << k;
    prev = tail;
  }
}

TEST(Series, GkzGeneratorsAnnihilate) {
  std::mt19937 rng(101);
  struct Case {
    const GkzBasis* g;
    Triangulation t;
    std::vector<double> z;
  };
  std::vector<Case> cases{{&gauss(), {{{0, 1, 2}, {1, 2, 3}}}, {1.1, 0.9, 1.3, 0.05}},
                          {&three_f2(), {{{0, 1, 2, 3, 5}, {0, 1, 3, 4, 5}, {1, 2, 3, 4, 5}}}, {0.02, 1.1, 0.9, 1.2, 0.8, 1.05}}};
  for (auto& c : cases) {
    const CayleyConfig& a = c.g->config;
    QVec beta = random_beta(rng, a.d(), a, {c.t});
    auto gens = gkz_generators(a, c.g->toric);
    for (auto& sigma : c.t.simplices) {
      auto s = phi_series(a, negate(beta), sigma, 12);
      auto z = point(c.z);
      for (auto& g : gens) {
        double r = relative_residual(substitute_parameters(g, beta), s, z);
        EXPECT_LT(r, 1e-10) << operator_to_string(g) << " on " << simplex_label(sigma);
      }
    }
  }
}

TEST(Series, DerivativeShiftsParameter) {
  // dz_j phi(delta) = phi(delta + a(j)) and C_j phi(delta + a(j)) = b_j(beta) phi(delta)
  QVec beta{mpq_class(13, 71), mpq_class(-29, 83), mpq_class(41, 97)};
  WeylRing r = ring_of(kGauss);
  auto z = point({1.1, 0.9, 1.3, 0.05});
  for (int j = 0; j < 4; ++j) {
    QVec delta = negate(beta), up = delta;
    for (int i = 0; i < 3; ++i) up[std::size_t(i)] += kGauss.entry(i, j);
    auto s = phi_series(kGauss, delta, {0, 1, 2}, 14);
    auto lhs = evaluate(apply_operator(WeylOperator::d(r, j), s), z).value;
    auto rhs = phi_sigma(kGauss, up, {0, 1, 2}, 14, z).value;
    EXPECT_LT(to_d(abs(lhs - rhs) / abs(rhs)), 1e-10) << "direction " << j + 1;

    auto c = direction_contiguity(gauss(), j);
    QVec beta_up = negate(up);
    auto cphi = evaluate(apply_operator(substitute_parameters(c.c, beta_up), phi_series(kGauss, up, {0, 1, 2}, 14)), z).value;
    std::vector<mpq_class> vals(beta.begin(), beta.end());
    vals.resize(std::size_t(kGauss.d() + kGauss.N()), 0);
    Real b = to_real(RatFun(c.b).evaluate(vals));
    auto phi = evaluate(s, z).value;
    EXPECT_LT(to_d(abs(cphi - Complex(b) * phi) / abs(cphi)), 1e-10) << "direction " << j + 1;
  }
}

TEST(Series, PfaffianHoldsOnFormSeries) {
  std::mt19937 rng(2024);
  struct Case {
    const GkzBasis* g;
    std::vector<IntVec> q;
    std::vector<int> sigma;
    QVec z;
  };
  std::vector<Case> cases{
      {&gauss(), {{1, 0, 0}, {0, 1, 0}}, {0, 1, 2}, {mpq_class(11, 10), mpq_class(9, 10), mpq_class(13, 10), mpq_class(1, 20)}},
      {&three_f2(),
       {{1, 0, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 1, 0, 0, 0}},
       {1, 2, 3, 4, 5},
       {mpq_class(1, 50), mpq_class(11, 10), mpq_class(9, 10), mpq_class(6, 5), mpq_class(4, 5), mpq_class(21, 20)}}};
  for (auto& c : cases) {
    const CayleyConfig& a = c.g->config;
    Pfaffian pf(*c.g, c.q);
    QVec beta = random_beta(rng, a.d(), a, {Triangulation{{c.sigma}}});
    auto s = phi_series(a, negate(beta), c.sigma, 12);
    auto z = qpoint(c.z);
    std::vector<mpq_class> vals(beta.begin(), beta.end());
    vals.insert(vals.end(), c.z.begin(), c.z.end());
    WeylRing ring = c.g->gb.ring();
    std::vector<WeylOperator> f;
    std::vector<Complex> y;
    for (auto& form : pf.forms()) {
      f.push_back(substitute_parameters(form.op, beta));
      y.push_back(evaluate(apply_operator(f.back(), s), z).value);
    }
    for (int i = 0; i < a.N(); ++i) {
      RatMatrix p = pf.matrix(i);
      for (std::size_t r = 0; r < f.size(); ++r) {
        Complex lhs = evaluate(apply_operator(WeylOperator::d(ring, i) * f[r], s), z).value, rhs;
        for (std::size_t col = 0; col < f.size(); ++col) rhs += Complex(to_real(p(r, col).evaluate(vals))) * y[col];
        EXPECT_LT(to_d(abs(lhs - rhs) / abs(lhs)), 1e-8) << "direction " << i + 1 << " row " << r + 1;
      }
    }
  }
}

TEST(Series, TwoF1ConfigurationIsProportionalToHypergeometric) {
  // h1 = z1 + z3 x, h2 = z2 + z4 x with z = (1, z, -1, -1); delta = (g1, g2, c)
  double g1 = 0.3, g2 = 0.4, c = 0.6;
  QVec delta{mpq_class(3, 10), mpq_class(2, 5), mpq_class(3, 5)};
  std::vector<double> ratios;
  for (double zz : {0.05, 0.1, 0.2, 0.3}) {
    auto z = point({1, zz, -1, -1});
    auto psi = psi_sigma(kTwoF1, delta, {0, 2, 3}, 40, z).value;
    EXPECT_LT(std::abs(to_d(psi.im)), 1e-30);
    ratios.push_back(to_d(psi.re) / hyp2f1_gamma(g1 + g2 - c, g2, 1 - c + g2, zz));
  }
  for (double r : ratios) EXPECT_NEAR(r / ratios[0], 1.0, 1e-12);
  std::vector<double> other;
  for (double zz : {0.05, 0.1, 0.2, 0.3}) {
    auto z = point({1, zz, -1, -1});
    auto psi = psi_sigma(kTwoF1, delta, {0, 1, 3}, 40, z).value;
    other.push_back(to_d(psi.re) / hyp2f1_gamma(g1, c, 1 - g2 + c, zz));
  }
  for (double r : other) EXPECT_NEAR(r / other[0], 1.0, 1e-12);
}

TEST(QuadraticRelation, GaussLimitMatchesPrintedMatrix) {
  Triangulation t{{{0, 1, 2}, {1, 2, 3}}};
  std::vector<IntVec> q{{1, 0, 0}, {0, 1, 0}};
  QVec beta{mpq_class(13, 71), mpq_class(-29, 83), mpq_class(41, 97)};
  double b1 = to_d(to_real(beta[0])), b2 = to_d(to_real(beta[1])), b3 = to_d(to_real(beta[2]));
  double expect[2][2] = {{1 / b1 - 1 / b3, -1 / b3}, {-1 / b3, 1 / b2 - 1 / b3}};
  for (double eps : {0.05, 0.01}) {
    auto z = point({1, 1, 1, eps});
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        auto v = rcin_rhs(kGauss, negate(beta), t, form_pair(kGauss, q[std::size_t(i)], q[std::size_t(j)]), 12, z);
        EXPECT_NEAR(to_d(v.value.re), expect[i][j], 1e-9 * std::abs(expect[i][j]));
        EXPECT_LT(std::abs(to_d(v.value.im)), 1e-12);
      }
  }
}

TEST(QuadraticRelation, ThreeF2ConstantEntries) {
  Triangulation t{{{0, 1, 2, 3, 5}, {0, 1, 3, 4, 5}, {1, 2, 3, 4, 5}}};
  std::vector<IntVec> q{{1, 0, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 1, 0, 0, 0}};
  QVec beta{mpq_class(13, 71), mpq_class(-29, 83), mpq_class(41, 97), mpq_class(7, 53), mpq_class(-17, 61)};
  std::vector<mpq_class> b(beta.begin(), beta.end());
  b.insert(b.begin(), mpq_class(0));  // 1-based
  mpq_class r11 = -((b[4] * b[2] + (b[4] + b[5]) * b[3]) * b[1] + b[4] * b[2] * b[2] + (b[4] * b[3] - b[4] * b[4] - b[5] * b[4]) * b[2] +
                    (-b[4] * b[4] - b[5] * b[4]) * b[3]) /
                  (b[5] * b[4] * b[1] * (b[2] - b[4] - b[5]) * (b[2] + b[3] - b[5]));
  mpq_class r12 = (b[4] + b[5]) / ((b[2] - b[4] - b[5]) * b[5] * b[4]);
  mpq_class r22 = -(b[1] * b[2] * b[5] + b[1] * b[3] * b[4] + b[1] * b[3] * b[5] - b[1] * b[4] * b[5] - b[1] * b[5] * b[5] +
                    b[5] * b[2] * b[2] + b[2] * b[3] * b[5] - b[2] * b[4] * b[5] - b[2] * b[5] * b[5]) /
                  (b[3] * (b[1] + b[2] - b[4]) * (b[2] - b[4] - b[5]) * b[5] * b[4]);
  mpq_class expect[2][2] = {{r11, r12}, {r12, r22}};
  auto z = point({0.001, -1, 1, 1, 1, 1});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      auto v = rcin_rhs(k3F2, negate(beta), t, form_pair(k3F2, q[std::size_t(i)], q[std::size_t(j)]), 12, z);
      double e = to_d(to_real(expect[i][j]));
      EXPECT_NEAR(to_d(v.value.re), e, 1e-8 * std::abs(e)) << i + 1 << "," << j + 1;
      EXPECT_LT(std::abs(to_d(v.value.im)), 1e-8 * std::abs(e));
    }
}

TEST(QuadraticRelation, ResonantSineThrows) {
  Triangulation t{{{0, 1}}};
  EXPECT_THROW(rcin_rhs(kBeta, {mpq_class(4, 3), mpq_class(1, 3)}, t, form_pair(kBeta, {0, 0}, {0, 0}), 4, point({1.0, 1.0})),
               ParameterError);
}

TEST(QuadraticRelation, SingleSimplexIsOneSineRatio) {
  Triangulation t{{{0, 1}}};
  QVec delta{mpq_class(1, 3), mpq_class(1, 5)};
  auto v = rcin_rhs(kBeta, delta, t, form_pair(kBeta, {0, 0}, {0, 0}), 4, point({1.3, 0.7}));
  // u = A^{-1} delta = (2/15, 1/5); Gamma(1-u)Gamma(1+u) = pi u / sin(pi u)
  double g = 1.0 / 3, u1 = 2.0 / 15, u2 = 1.0 / 5;
  double expect = g / (u1 * u2);
  EXPECT_NEAR(to_d(v.value.re), expect, 1e-12 * expect);
}
