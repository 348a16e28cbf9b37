#include <gtest/gtest.h>

#include <cmath>

#include "gkz/l2.hpp"

using namespace gkz;

namespace {

const CayleyConfig kBeta(IntMatrix({{1, 1}, {0, 1}}));
const CayleyConfig kTwoF1(IntMatrix({{1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 1}}));

double to_d(const Real& x) { return x.convert_to<double>(); }

double hyp2f1_gamma(double a, double b, double c, double z) {
  double t = std::tgamma(a) * std::tgamma(b) / std::tgamma(c), s = 0;
  for (int m = 0; m < 200; ++m) {
    s += t;
    t *= (a + m) * (b + m) / ((c + m) * (m + 1)) * z;
  }
  return s;
}

// h = 1 - t, gamma = 1 - beta, c = alpha
L2IntegralSpec beta_spec(const mpq_class& alpha, const mpq_class& beta) {
  return {kBeta, {1 - beta, alpha}, {Complex(Real(1)), Complex(Real(-1))}, Triangulation{{{0, 1}}}, 4};
}

double printed_two_f1(double g1, double g2, double c, double z) {
  double s = M_PI;
  double pre = std::pow(std::tgamma(1 - g1) * std::tgamma(1 - g2), 2) / (M_PI * M_PI);
  double f1 = hyp2f1_gamma(g1, c, 1 - g2 + c, z), f2 = hyp2f1_gamma(g1 + g2 - c, g2, 1 - c + g2, z);
  double t1 = std::pow(std::sin(s * g1), 2) * std::sin(s * g2) * std::sin(s * c) / std::sin(s * (g2 - c)) *
              std::pow(std::abs(z), 2 * (c - g2)) * f1 * f1;
  double t2 = std::sin(s * g1) * std::pow(std::sin(s * g2), 2) * std::sin(s * (g1 + g2 - c)) / std::sin(s * (c - g2)) * f2 * f2;
  return pre * (t1 + t2);
}

}  // namespace

TEST(L2, BetaQuadratureMatchesClosedForm) {
  double expect = beta_closed_form(0.3, 0.4);
  auto q = quadrature_oracle({{1.0, -1.0}}, {0.6}, 0.3);
  EXPECT_LT(std::abs(q.value - expect), 1e-3 * std::abs(expect));
  EXPECT_LT(q.error, 1e-3 * std::abs(expect));
}

TEST(L2, BetaSeriesMatchesClosedForm) {
  auto v = l2_series_value(beta_spec(mpq_class(3, 10), mpq_class(2, 5)));
  double expect = beta_closed_form(0.3, 0.4);
  EXPECT_NEAR(to_d(v.value), expect, 1e-12 * std::abs(expect));
  EXPECT_EQ(to_d(v.imaginary), 0.0);
}

TEST(L2, BetaSymmetry) {
  auto a = quadrature_oracle({{1.0, -1.0}}, {0.6}, 0.3), b = quadrature_oracle({{1.0, -1.0}}, {0.7}, 0.4);
  EXPECT_LT(std::abs(a.value - b.value), 1e-4 * std::abs(a.value));
  auto s = l2_series_value(beta_spec(mpq_class(3, 10), mpq_class(2, 5)));
  auto t = l2_series_value(beta_spec(mpq_class(2, 5), mpq_class(3, 10)));
  EXPECT_NEAR(to_d(s.value), to_d(t.value), 1e-12 * std::abs(to_d(s.value)));
}

TEST(L2, BetaPeriodExpansion) {
  auto v = beta_tpr(0.3, 0.4);
  double expect = beta_closed_form(0.3, 0.4);
  EXPECT_NEAR(v.real(), expect, 1e-10 * expect);
  EXPECT_LT(std::abs(v.imag()), 1e-10 * expect);
  auto q = quadrature_oracle({{1.0, -1.0}}, {0.6}, 0.3);
  EXPECT_LT(std::abs(v.real() - q.value), 1e-3 * expect);
  EXPECT_THROW(beta_tpr(1.0, 0.4), ParameterError);
}

TEST(L2, BetaPolesFollowSine) {
  // the series value changes sign across alpha + beta = 1 and stays finite away from it
  for (int i = 1; i < 10; ++i)
    for (int j = 1; j < 10; ++j) {
      if (i + j == 10) {
        EXPECT_THROW(l2_series_value(beta_spec(mpq_class(i, 10), mpq_class(j, 10))), ParameterError);
        continue;
      }
      double v = to_d(l2_series_value(beta_spec(mpq_class(i, 10), mpq_class(j, 10))).value);
      EXPECT_TRUE(std::isfinite(v));
      EXPECT_EQ(v > 0, i + j < 10) << i << "," << j;
    }
}

TEST(L2, TwoF1SeriesMatchesPrintedFormula) {
  double g1 = 0.3, g2 = 0.4, c = 0.6, z = 0.2;
  L2IntegralSpec s{kTwoF1,
                   {mpq_class(3, 10), mpq_class(2, 5), mpq_class(3, 5)},
                   {Complex(Real(1)), Complex(Real(z)), Complex(Real(-1)), Complex(Real(-1))},
                   Triangulation{{{0, 1, 3}, {0, 2, 3}}},
                   40};
  auto v = l2_series_value(s);
  double expect = printed_two_f1(g1, g2, c, z);
  EXPECT_NEAR(to_d(v.value), expect, 1e-12 * std::abs(expect));
  EXPECT_LT(std::abs(to_d(v.imaginary)), 1e-12 * std::abs(expect));
  EXPECT_LT(to_d(v.last_shell), 1e-12 * std::abs(expect));
}

TEST(L2, TwoF1QuadratureMatchesSeries) {
  double z = 0.2;
  L2IntegralSpec s{kTwoF1,
                   {mpq_class(3, 10), mpq_class(2, 5), mpq_class(3, 5)},
                   {Complex(Real(1)), Complex(Real(z)), Complex(Real(-1)), Complex(Real(-1))},
                   Triangulation{{{0, 1, 3}, {0, 2, 3}}},
                   12};
  double series = to_d(l2_series_value(s).value);
  auto q = quadrature_oracle({{1.0, -1.0}, {z, -1.0}}, {0.3, 0.4}, 0.6);
  EXPECT_LT(std::abs(series - q.value), 1e-3 * std::abs(series));
}

TEST(L2, DivergentExponentsThrow) {
  EXPECT_THROW(quadrature_oracle({{1.0, -1.0}}, {0.6}, 0.0), DivergenceError);
  EXPECT_THROW(quadrature_oracle({{1.0, -1.0}}, {1.2}, 0.3), DivergenceError);
  EXPECT_THROW(quadrature_oracle({{1.0, -1.0}}, {-0.5}, 0.3), DivergenceError);
}
