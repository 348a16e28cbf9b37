#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "gkz/groebner.hpp"

using namespace gkz;

namespace {

const CayleyConfig kGauss(IntMatrix({{1, 1, 0, 0}, {0, 0, 1, 1}, {0, 1, 0, 1}}));
const CayleyConfig k3F2(IntMatrix({{1, 1, 0, 0, 0, 0},
                                    {0, 0, 1, 1, 0, 0},
                                    {0, 0, 0, 0, 1, 1},
                                    {1, 0, 0, 1, 0, 0},
                                    {0, 0, 1, 0, 0, 1}}));

WeylOperator Op(const std::string& s, WeylRing r) { return parse_operator(s, r); }

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

}  // namespace

TEST(Weyl, DefiningRelations) {
  WeylRing r{1, 2};
  EXPECT_EQ(Op("dz1", r) * Op("z1", r), Op("z1*dz1 + 1", r));
  EXPECT_EQ(Op("dz1", r) * Op("z2", r), Op("z2*dz1", r));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      auto di = WeylOperator::d(r, i);
      WeylOperator zj(r, RatFun(MultiPoly::var(r.z(j))));
      auto comm = di * zj - zj * di;
      EXPECT_EQ(comm, WeylOperator(r, RatFun(i == j ? 1 : 0)));
    }
}

TEST(Weyl, ThetaProductMatchesTermwiseOracle) {
  WeylRing r{3, 4};
  auto t = [&](int j) { return theta(r, j - 1); };
  auto lhs = (t(3) + t(4)) * (t(2) + t(4));
  // oracle: theta_i theta_j = z_i z_j d_i d_j for i != j, theta_j^2 = z_j^2 d_j^2 + z_j d_j
  auto oracle = Op("z2*z3*dz2*dz3 + z3*z4*dz3*dz4 + z2*z4*dz2*dz4 + z4^2*dz4^2 + z4*dz4", r);
  EXPECT_EQ(lhs, oracle);
  EXPECT_EQ(t(4) * t(4), Op("z4^2*dz4^2+z4*dz4", r));
}

TEST(Weyl, AssociativityProperty) {
  WeylRing r{1, 2};
  std::mt19937 rng(17);
  for (int it = 0; it < 30; ++it) {
    auto p = random_op(rng, r), q = random_op(rng, r), s = random_op(rng, r);
    ASSERT_EQ((p * q) * s, p * (q * s));
  }
}

TEST(Weyl, RationalCoefficientsCommutator) {
  WeylRing r{1, 2};
  auto f = Op("1/(z1-z2)", r);
  // [d1, f] = df/dz1
  EXPECT_EQ(Op("dz1", r) * f - f * Op("dz1", r), Op("-1/(z1-z2)^2", r));
}

TEST(Weyl, EulerOperators) {
  auto e = euler_operators(kGauss);
  WeylRing r = ring_of(kGauss);
  EXPECT_EQ(e[0], Op("z1*dz1 + z2*dz2 - b1", r));
  auto e3 = euler_operators(k3F2);
  EXPECT_EQ(e3[3], Op("z1*dz1 + z4*dz4 - b4", ring_of(k3F2)));
  for (auto* a : {&kGauss, &k3F2}) {
    auto es = euler_operators(*a);
    for (auto& x : es)
      for (auto& y : es) ASSERT_EQ(x * y, y * x);
  }
}

TEST(Weyl, BoxOperator) {
  WeylRing r = ring_of(kGauss);
  EXPECT_EQ(box_operator(r, {1, -1, -1, 1}), Op("dz1*dz4 - dz2*dz3", r));
  EXPECT_EQ(box_operator(WeylRing{1, 2}, {1, -1}), Op("dz1-dz2", WeylRing{1, 2}));
  EXPECT_EQ(box_operator(WeylRing{1, 3}, {2, -1, -1}), Op("dz1^2-dz2*dz3", WeylRing{1, 3}));
  EXPECT_EQ(box_operator(r, {1, -1, -1, 1}), -box_operator(r, {-1, 1, 1, -1}));
  EXPECT_THROW(box_operator(r, {0, 0, 0, 0}), ParameterError);
}

TEST(Weyl, PrintParseRoundTrip) {
  WeylRing r = ring_of(kGauss);
  auto op = Op("z2*z3*dz1 + (z2*dz2+z3*dz3+z4*dz4)*z4 + b1/(z1-z2)", r);
  EXPECT_EQ(parse_operator(operator_to_string(op), r), op);
}

TEST(Toric, Fixtures) {
  auto g = toric_groebner(kGauss, TermOrder::grevlex(4));
  ASSERT_EQ(g.generators.size(), 1u);
  EXPECT_EQ(dpoly_to_string(g.generators[0], 4), "dz2*dz3-dz1*dz4");

  CayleyConfig id(IntMatrix({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  EXPECT_TRUE(toric_groebner(id, TermOrder::grevlex(3)).generators.empty());

  auto g3 = toric_groebner(k3F2, TermOrder::grevlex(6));
  ASSERT_EQ(g3.generators.size(), 1u);
  EXPECT_EQ(dpoly_to_string(g3.generators[0], 6), "dz1*dz3*dz5-dz2*dz4*dz6");
}

TEST(Toric, MembershipOracle) {
  // every binomial from a lattice vector with small coordinates lies in the ideal; every generator comes from the lattice
  for (auto* a : {&kGauss, &k3F2}) {
    auto g = toric_groebner(*a, TermOrder::grevlex(a->N()));
    auto lat = kernel_lattice(a->matrix());
    for (long m = -3; m <= 3; ++m) {
      if (m == 0) continue;
      IntVec u(a->N());
      for (int j = 0; j < a->N(); ++j) u[j] = m * lat[0][j];
      Monomial p, q;
      for (int j = 0; j < a->N(); ++j) {
        if (u[j] > 0) p.set(j, unsigned(u[j]));
        if (u[j] < 0) q.set(j, unsigned(-u[j]));
      }
      auto f = OrderedPoly::from(MultiPoly::term(p, 1) - MultiPoly::term(q, 1), g.order);
      EXPECT_TRUE(commutative_reduce(f, g.generators, g.order).is_zero());
    }
    for (auto& u : g.exponent_vectors()) {
      auto au = a->matrix().apply(u);
      for (long x : au) EXPECT_EQ(x, 0);
    }
  }
}

TEST(Toric, SaturationOfNonSaturatedInput) {
  // A = (1 1 1 1; 0 1 3 4); the ideal of a lattice basis is not saturated here
  CayleyConfig a(IntMatrix({{1, 1, 1, 1}, {0, 1, 3, 4}}));
  auto g = toric_groebner(a, TermOrder::grevlex(4));
  EXPECT_GE(g.generators.size(), 4u);
  for (auto s : {"x2*x3-x1*x4", "x3^3-x2*x4^2", "x2^3-x1^2*x3", "x1*x3^2-x2^2*x4"}) {
    auto f = OrderedPoly::from(parse_poly(s, SymbolTable::indexed("x", 4)), g.order);
    EXPECT_TRUE(commutative_reduce(f, g.generators, g.order).is_zero()) << s;
  }
}

TEST(GkzIdeal, GaussStandardMonomialsAndCertificate) {
  auto t0 = std::chrono::steady_clock::now();
  auto b = gkz_groebner(kGauss, TermOrder::grevlex(4));
  ASSERT_EQ(b.standard.size(), 2u);
  EXPECT_EQ(dmonomial_to_string(b.standard[0], 4), "dz4");
  EXPECT_EQ(dmonomial_to_string(b.standard[1], 4), "1");
  EXPECT_TRUE(b.gb.verify());
  for (auto& g : gkz_generators(kGauss, b.toric)) EXPECT_TRUE(b.gb.normal_form_operator(g).is_zero());
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 5.0);
}

TEST(GkzIdeal, GaussNormalFormFixture) {
  auto b = gkz_groebner(kGauss, TermOrder::grevlex(4));
  WeylRing r = ring_of(kGauss);
  SymbolTable t = r.symbols();
  // E1 - E3 gives z1*dz1 = z4*dz4 + b1 - b3 modulo the ideal
  auto nf = b.gb.normal_form(Op("b2*dz1", r), b.standard);
  EXPECT_EQ(nf[0], parse_ratfun("b2*z4/z1", t));
  EXPECT_EQ(nf[1], parse_ratfun("b2*(b1-b3)/z1", t));
  // the dz4-shifted row of b1*b2*F(Q)
  auto nf4 = b.gb.normal_form(Op("b2*dz4*dz1", r), b.standard);
  EXPECT_EQ(nf4[0], parse_ratfun("b2*(b1+b2)*z4/(z1*z4-z2*z3)", t));
  EXPECT_EQ(nf4[1], parse_ratfun("-b2^2*b3/(z1*z4-z2*z3)", t));
}

TEST(GkzIdeal, NormalFormProperties) {
  auto b = gkz_groebner(kGauss, TermOrder::grevlex(4));
  WeylRing r = ring_of(kGauss);
  // standard monomials reduce to themselves
  EXPECT_EQ(b.gb.normal_form_operator(Op("dz4", r)), Op("dz4", r));
  EXPECT_EQ(b.gb.normal_form_operator(Op("1", r)), Op("1", r));
  // reduction closure: P - NF(P) lies in the ideal
  auto p = Op("dz4^2", r);
  auto nf = b.gb.normal_form_operator(p);
  EXPECT_TRUE(b.gb.normal_form_operator(p - nf).is_zero());
  for (auto& m : nf.terms()) EXPECT_LE(m.first.degree(), 1u);
  // linearity and idempotence
  auto q = Op("z1*dz2*dz3 + b1*dz1", r);
  auto f = Op("b3/z2", r);
  EXPECT_EQ(b.gb.normal_form_operator(p.scaled(f.terms()[0].second) + q),
            b.gb.normal_form_operator(p).scaled(f.terms()[0].second) + b.gb.normal_form_operator(q));
  EXPECT_EQ(b.gb.normal_form_operator(nf), nf);
}

TEST(GkzIdeal, RankOneAndDegenerate) {
  CayleyConfig one(IntMatrix(std::vector<std::vector<long>>{{1}}));
  auto b = gkz_groebner(one, TermOrder::grevlex(1));
  ASSERT_EQ(b.gb.basis().size(), 1u);
  EXPECT_EQ(b.gb.generators()[0], parse_operator("dz1 - b1/z1", ring_of(one)));
  ASSERT_EQ(b.standard.size(), 1u);
  EXPECT_TRUE(b.standard[0].is_one());

  CayleyConfig id(IntMatrix({{1, 0}, {0, 1}}));
  auto bi = gkz_groebner(id, TermOrder::grevlex(2));
  ASSERT_EQ(bi.standard.size(), 1u);
}

TEST(GkzIdeal, ThreeF2Rank) {
  auto t0 = std::chrono::steady_clock::now();
  auto b = gkz_groebner(k3F2, TermOrder::grevlex(6));
  EXPECT_EQ(b.standard.size(), 3u);
  EXPECT_TRUE(b.gb.verify());
  for (auto& g : gkz_generators(k3F2, b.toric)) EXPECT_TRUE(b.gb.normal_form_operator(g).is_zero());
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 30.0);
}
