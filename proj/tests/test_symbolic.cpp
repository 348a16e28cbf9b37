#include <gtest/gtest.h>

#include <random>

#include "gkz/format.hpp"
#include "gkz/intmat.hpp"

using namespace gkz;

namespace {

const SymbolTable kT = SymbolTable::gkz(3, 4);

RatFun R(const std::string& s) { return parse_ratfun(s, kT); }
MultiPoly P(const std::string& s) { return parse_poly(s, kT); }

MultiPoly random_poly(std::mt19937& rng, int terms, int vars, int maxdeg) {
  std::uniform_int_distribution<int> coef(-5, 5), slot(0, vars - 1), deg(0, maxdeg);
  std::vector<Term> ts;
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    int d = deg(rng);
    for (int k = 0; k < d; ++k) {
      int s = slot(rng);
      m.set(s, m[s] + 1);
    }
    int c = coef(rng);
    if (c) ts.push_back({m, c});
  }
  return MultiPoly::from_terms(ts);
}

}  // namespace

TEST(Format, RoundTrip) {
  auto f = R("(b1*(b1+b2)*z4)/(z1*z4-z2*z3)");
  EXPECT_EQ(ratfun_to_string(f, kT), "(-b1*b2*z4-b1^2*z4)/(z2*z3-z1*z4)");
  EXPECT_EQ(R(ratfun_to_string(f, kT)), f);
  EXPECT_EQ(R("3/2 z1 - z1/2"), R("z1"));
  EXPECT_EQ(R("0.25*b1"), R("b1/4"));
  EXPECT_EQ(R("z1^-1"), R("1/z1"));
  EXPECT_THROW(R("z1/(b1-b1)"), ParseError);
  EXPECT_THROW(R("z9"), ParseError);
  EXPECT_THROW(R("(z1"), ParseError);
}

TEST(RatNormalize, Fixtures) {
  EXPECT_EQ(R("(z1*b1)/(b1)"), R("z1"));
  EXPECT_EQ(R("(z1^2-z2^2)/(z1-z2)"), R("z1+z2"));
  auto f = RatFun(P("(z1*z4-z2*z3)*b2"), P("(z1*z4-z2*z3)^2"));
  EXPECT_EQ(f, R("b2/(z1*z4-z2*z3)"));
  EXPECT_EQ(f.den(), P("z2*z3-z1*z4"));
  // multiply back
  EXPECT_EQ(f.num() * P("(z1*z4-z2*z3)^2"), P("(z1*z4-z2*z3)*b2") * f.den());
}

TEST(RatNormalize, DenominatorIsMonic) {
  auto f = R("(2*b1)/(4*z1-6*z2)");
  EXPECT_EQ(f.den().lc(), 1);
  EXPECT_EQ(f * R("4*z1-6*z2"), R("2*b1"));
}

TEST(Gcd, KnownFactors) {
  auto a = P("(z1*z4-z2*z3)*(b1+z1)^2*(b2-3)");
  auto b = P("(z1*z4-z2*z3)*(b1+z1)*(z2+b3)");
  EXPECT_EQ(poly_gcd(a, b), P("(z1*z4-z2*z3)*(b1+z1)").primitive());
  EXPECT_EQ(poly_gcd(P("z1^3*z2"), P("z1*z2^2")), P("z1*z2"));
  EXPECT_EQ(poly_gcd(P("b1+b2"), P("b1-b2")), P("1"));
  EXPECT_EQ(poly_gcd(P("6*z1+4"), P("3*z1+2")), P("3*z1+2"));
}

TEST(Gcd, RandomProductsProperty) {
  std::mt19937 rng(7);
  for (int it = 0; it < 40; ++it) {
    auto g = random_poly(rng, 3, 5, 3);
    auto a = random_poly(rng, 3, 5, 2);
    auto b = random_poly(rng, 3, 5, 2);
    if (g.is_zero() || a.is_zero() || b.is_zero()) continue;
    auto ga = g * a, gb = g * b;
    auto h = poly_gcd(ga, gb);
    ASSERT_TRUE(ga.divide_exact(h).has_value());
    ASSERT_TRUE(gb.divide_exact(h).has_value());
    ASSERT_TRUE(h.divide_exact(g.primitive()).has_value() || g.is_constant());
    auto ca = *ga.divide_exact(h), cb = *gb.divide_exact(h);
    ASSERT_TRUE(poly_gcd(ca, cb).is_one());
  }
}

TEST(Gcd, LargerProductsProperty) {
  // sizes where a plain remainder sequence overflows exponents
  std::mt19937 rng(23);
  for (int it = 0; it < 6; ++it) {
    auto g = random_poly(rng, 6, 5, 4) * random_poly(rng, 4, 5, 3);
    auto a = random_poly(rng, 8, 5, 5) * random_poly(rng, 5, 5, 3);
    auto b = random_poly(rng, 8, 5, 5);
    if (g.is_constant() || a.is_zero() || b.is_zero()) continue;
    auto ga = g * a, gb = g * b;
    auto h = poly_gcd(ga, gb);
    ASSERT_TRUE(h.divide_exact(g.primitive()).has_value());
    auto ca = *ga.divide_exact(h), cb = *gb.divide_exact(h);
    ASSERT_TRUE(poly_gcd(ca, cb).is_one());
  }
}

TEST(Gcd, ModularAgreesWithRemainderSequence) {
  std::mt19937 rng(5);
  for (int it = 0; it < 30; ++it) {
    auto g = random_poly(rng, 3, 4, 2);
    auto a = g * random_poly(rng, 3, 4, 2), b = g * random_poly(rng, 3, 4, 2);
    if (a.is_constant() || b.is_constant()) continue;
    a = a.primitive();
    b = b.primitive();
    if (a.support() != b.support() || a.monomial_content() != Monomial() || b.monomial_content() != Monomial()) continue;
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < kMaxSlots; ++i)
      if ((a.support() >> i) & 1u) slots.push_back(i);
    auto m = detail::modgcd::modular_gcd(a, b, slots);
    ASSERT_TRUE(m.has_value());
    EXPECT_EQ(*m, poly_gcd(a, b));
  }
}

TEST(Poly, AdditionIsExactProperty) {
  std::mt19937 rng(11);
  for (int it = 0; it < 200; ++it) {
    auto f = random_poly(rng, 6, 7, 4), g = random_poly(rng, 6, 7, 4);
    ASSERT_EQ((f + g) - g, f);
    ASSERT_EQ(f * g, g * f);
    auto h = random_poly(rng, 3, 7, 2);
    ASSERT_EQ(f * (g + h), f * g + f * h);
    if (!g.is_zero()) ASSERT_EQ(*(f * g).divide_exact(g), f);
  }
}

TEST(RatFun, NormalizeIdempotentAndMultiplicative) {
  std::mt19937 rng(3);
  for (int it = 0; it < 40; ++it) {
    auto a = random_poly(rng, 3, 4, 2), b = random_poly(rng, 3, 4, 2);
    auto c = random_poly(rng, 3, 4, 2), d = random_poly(rng, 3, 4, 2);
    if (b.is_zero() || d.is_zero()) continue;
    RatFun f(a * c, b * c.primitive()), g(c, d);
    ASSERT_EQ(RatFun(f.num(), f.den()), f);
    ASSERT_EQ(RatFun(a * c * c, b * c.primitive() * d), f * g);
    ASSERT_EQ((f + g) - g, f);
    if (!g.is_zero()) ASSERT_EQ((f / g) * g, f);
  }
}

TEST(RatFun, Derivative) {
  EXPECT_EQ(R("1/(z1*z4-z2*z3)").derivative(kT.slot("z1")), R("-z4/(z1*z4-z2*z3)^2"));
  EXPECT_EQ(R("b1*z1^3").derivative(kT.slot("z1")), R("3*b1*z1^2"));
}

TEST(RatFun, Substitute) {
  auto f = R("(b1*z1+z2)/(z1-z2)");
  EXPECT_EQ(f.substitute(kT.slot("z2"), mpq_class(-1)), R("(b1*z1-1)/(z1+1)"));
  EXPECT_EQ(f.substitute(kT.slot("z2"), R("1/z3")), R("(b1*z1*z3+1)/(z1*z3-1)"));
  EXPECT_THROW(R("1/(z1-1)").substitute(kT.slot("z1"), mpq_class(1)), ParameterError);
}

TEST(Kernel, Fixtures) {
  IntMatrix gauss({{1, 1, 0, 0}, {0, 0, 1, 1}, {0, 1, 0, 1}});
  auto k = kernel_lattice(gauss);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], (IntVec{1, -1, -1, 1}));

  IntMatrix id({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_TRUE(kernel_lattice(id).empty());

  IntMatrix f32({{1, 1, 0, 0, 0, 0}, {0, 0, 1, 1, 0, 0}, {0, 0, 0, 0, 1, 1}, {1, 0, 0, 1, 0, 0}, {0, 0, 1, 0, 0, 1}});
  auto k3 = kernel_lattice(f32);
  ASSERT_EQ(k3.size(), 1u);
  // independent oracle: rational nullspace scaled to a primitive integer vector
  QMat m = to_qmat(f32);
  auto piv = q_row_reduce(m);
  ASSERT_EQ(piv.size(), 5u);
  QVec v(6, 0);
  v[5] = 1;
  for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][5];
  for (int i = 0; i < 6; ++i) EXPECT_EQ(mpq_class(k3[0][i]), v[i] * mpq_class(k3[0][5]));
  EXPECT_EQ(k3[0], (IntVec{1, -1, 1, -1, 1, -1}));
}

TEST(Kernel, SaturatedProperty) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> e(-3, 3);
  for (int it = 0; it < 60; ++it) {
    int d = 2 + it % 3, n = d + 1 + it % 3;
    IntMatrix a(d, n);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = e(rng);
    auto k = kernel_lattice(a);
    int rank = q_rank(to_qmat(a));
    ASSERT_EQ(static_cast<int>(k.size()), n - rank);
    for (auto& v : k) {
      auto av = a.apply(v);
      for (long x : av) ASSERT_EQ(x, 0);
    }
    if (!k.empty()) {
      auto inv = smith_invariants(to_zmat(k));
      ASSERT_EQ(inv.size(), k.size());
      for (auto& f : inv) ASSERT_EQ(f, 1);
    }
  }
}

TEST(Smith, DetectsNonSaturated) {
  auto inv = smith_invariants(to_zmat({{2, -2, -2, 2}}));
  ASSERT_EQ(inv.size(), 1u);
  EXPECT_EQ(inv[0], 2);
  auto inv2 = smith_invariants(to_zmat({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}));
  ASSERT_EQ(inv2.size(), 3u);
  EXPECT_EQ(inv2[0], 2);
  EXPECT_EQ(inv2[1], 6);
  EXPECT_EQ(inv2[2], 12);
}

TEST(QMatrix, InverseAndDet) {
  QMat a{{1, 1, 0}, {0, 0, 1}, {0, 1, 0}};
  EXPECT_EQ(q_det(a), -1);
  auto inv = q_inverse(a);
  ASSERT_TRUE(inv);
  auto v = q_apply(*inv, QVec{mpq_class(1), 0, 0});
  EXPECT_EQ(v, (QVec{1, 0, 0}));
  EXPECT_FALSE(q_inverse(QMat{{1, 2}, {2, 4}}));
}
