#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gkz/format.hpp"
#include "gkz/intersection.hpp"

namespace gkz::fixtures {

struct Check {
  std::string name;
  bool ok = false;
  std::string detail;
};

inline void expect(std::vector<Check>& out, const std::string& name, bool ok, const std::string& detail = "") {
  out.push_back({name, ok, ok ? "" : detail});
}

// Runs f and records a failing check instead of propagating a library error.
inline void guarded(std::vector<Check>& out, const std::string& name, const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    out.push_back({name, false, e.what()});
  }
}

inline Triangulation one_based(std::vector<std::vector<int>> s) {
  Triangulation t;
  for (auto& v : s) {
    for (auto& j : v) --j;
    std::sort(v.begin(), v.end());
    t.simplices.push_back(v);
  }
  std::sort(t.simplices.begin(), t.simplices.end());
  return t;
}

inline const CayleyConfig& gauss_config() {
  static const CayleyConfig a(IntMatrix({{1, 1, 0, 0}, {0, 0, 1, 1}, {0, 1, 0, 1}}));
  return a;
}
inline const CayleyConfig& three_f2_config() {
  static const CayleyConfig a(IntMatrix({{1, 1, 0, 0, 0, 0},
                                         {0, 0, 1, 1, 0, 0},
                                         {0, 0, 0, 0, 1, 1},
                                         {1, 0, 0, 1, 0, 0},
                                         {0, 0, 1, 0, 0, 1}}));
  return a;
}
// h1 = z1 + z3 x, h2 = z2 + z4 x
inline const CayleyConfig& two_f1_config() {
  static const CayleyConfig a(IntMatrix({{1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 1}}));
  return a;
}

// One example carried through basis, Pfaffian, secondary equation and normalization.
struct Example {
  std::string name;
  CayleyConfig config;
  std::vector<IntVec> q;
  Triangulation t;
  std::vector<std::pair<int, mpq_class>> printed_at;  // 0-based z index and value for printed matrices
  std::unique_ptr<GkzBasis> basis;
  std::unique_ptr<Pfaffian> pf;
  std::unique_ptr<SecondarySystem> sys;
  std::unique_ptr<SecondarySolution> sol;
  std::unique_ptr<IntersectionResult> res;

  void build_basis(std::size_t step_limit = 20000) {
    if (!basis) basis = std::make_unique<GkzBasis>(gkz_groebner(config, TermOrder::grevlex(config.N()), step_limit));
  }
  void build_pfaffian() {
    build_basis();
    if (!pf) pf = std::make_unique<Pfaffian>(*basis, q);
  }
  void build_intersection(const SecondaryOptions& opt = {}) {
    build_pfaffian();
    if (!sys) sys = std::make_unique<SecondarySystem>(secondary_system(*pf, *pf));
    if (!sol) sol = std::make_unique<SecondarySolution>(solve_secondary(*sys, opt));
    if (!res) res = std::make_unique<IntersectionResult>(normalize_intersection(config, sol->matrix, q, q, t));
  }
  SymbolTable symbols() const { return SymbolTable::gkz(config.d(), config.N()); }
  RatMatrix at_printed(RatMatrix m) const {
    for (auto& [j, v] : printed_at) m = m.substitute(std::size_t(config.d() + j), v);
    return m;
  }
  RatMatrix parse(const std::vector<std::vector<std::string>>& rows) const { return parse_matrix(rows, symbols()); }
};

inline Example gauss_example() {
  return {"gauss", gauss_config(), {{1, 0, 0}, {0, 1, 0}}, one_based({{1, 2, 3}, {2, 3, 4}}), {{0, 1}, {1, 1}, {2, 1}}, {}, {}, {}, {}, {}};
}

inline Example three_f2_example() {
  return {"3f2",
          three_f2_config(),
          {{1, 0, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 1, 0, 0, 0}},
          one_based({{2, 3, 4, 5, 6}, {1, 2, 4, 5, 6}, {1, 2, 3, 4, 6}}),
          {{1, -1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}},
          {}, {}, {}, {}, {}};
}

// ---- printed fixtures ----

inline std::vector<std::vector<std::string>> gauss_p4() {
  return {{"b2*z1/(z1*z4-z2*z3)", "-b2*z3/(z1*z4-z2*z3)"},
          {"-b1*z1*z2/(z1*z4^2-z2*z3*z4)", "(b3*z1*z4+(b1-b3)*z2*z3)/(z1*z4^2-z2*z3*z4)"}};
}

inline std::vector<std::vector<std::string>> three_f2_p1() {
  return {{"(b4*z1+b2+b3-b4-b5)/(z1*(z1-1))", "b3*(b1+b2-b4)/(b1*z1*(z1-1))", "b2*(b2-b4-b5-1)/(b1*z1*(z1-1))"},
          {"(b2+b3-b5)*b1/(b3*(z1-1))", "(b1*z1+b2-b4)/(z1*(z1-1))", "b2*(b2-b4-b5-1)/(b3*z1*(z1-1))"},
          {"(-b2-b3+b5)*b1/(b2*(z1-1))", "b3*(b4-b1-b2)/(b2*(z1-1))", "(-b2+b4+b5+1)/(z1-1)"}};
}

inline std::vector<std::vector<std::string>> gauss_intersection() {
  return {{"1/b1-1/b3", "-1/b3"}, {"-1/b3", "1/b2-1/b3"}};
}

inline std::vector<std::vector<std::string>> three_f2_intersection() {
  std::string a0 = "(b1^2*b2*b4-b1^2*b4*b5+b1*b2^2*b4-b1*b2*b4^2-2*b1*b2*b4*b5+b1*b4^2*b5+b1*b4*b5^2)";
  std::string a2 = "(b2^2*b3*b5+b2*b3^2*b5-2*b5*b4*b3*b2-b2*b3*b5^2-b3^2*b4*b5+b3*b4^2*b5+b3*b4*b5^2)";
  std::string r11 =
      "-((b4*b2+(b4+b5)*b3)*b1+b4*b2^2+(b4*b3-b4^2-b5*b4)*b2+(-b4^2-b5*b4)*b3)/(b5*b4*b1*(b2-b4-b5)*(b2+b3-b5))";
  std::string r22 =
      "-(b1*b2*b5+b1*b3*b4+b1*b3*b5-b1*b4*b5-b1*b5^2+b5*b2^2+b2*b3*b5-b2*b4*b5-b2*b5^2)/(b3*(b1+b2-b4)*(b2-b4-b5)*b5*b4)";
  std::string r33 = "-(" + a0 + "*z1^2-2*b1*b3*b4*b5*z1+" + a2 + ")/((b2-b4-b5-1)*(b2-b4-b5+1)*b2*(b2-b4-b5)*b5*b4)";
  std::string r12 = "(b4+b5)/((b2-b4-b5)*b5*b4)";
  std::string n13 = "(b1*b4*z1+b2*b4*z1-b4^2*z1-b4*b5*z1-b5*b3)";
  std::string n23 = "-(b1*b4*z1-b5*b2-b5*b3+b5*b4+b5^2)";
  std::string plus = "/((b2-b4-b5+1)*(b2-b4-b5)*b5*b4)", minus = "/((b2-b4-b5-1)*(b2-b4-b5)*b5*b4)";
  return {{r11, r12, n13 + plus}, {r12, r22, n23 + plus}, {n13 + minus, n23 + minus, r33}};
}

inline std::string entry_mismatch(const RatMatrix& got, const RatMatrix& want, const SymbolTable& sym) {
  if (got.rows() != want.rows() || got.cols() != want.cols()) return "shape mismatch";
  for (std::size_t i = 0; i < got.rows(); ++i)
    for (std::size_t j = 0; j < got.cols(); ++j)
      if (!(got(i, j) == want(i, j)))
        return "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): got " + ratfun_to_string(got(i, j), sym);
  return "";
}

// ---- checks grouped by pipeline stage ----

inline void check_toric(std::vector<Check>& out, Example& g) {
  guarded(out, "toric ideal and standard monomials", [&] {
    g.build_basis();
    int N = g.config.N();
    std::vector<std::string> toric, std;
    for (auto& p : g.basis->toric.generators) toric.push_back(dpoly_to_string(p, N));
    for (auto& m : g.basis->standard) std.push_back(dmonomial_to_string(m, N));
    expect(out, "toric generators = {dz2*dz3-dz1*dz4}", toric == std::vector<std::string>{"dz2*dz3-dz1*dz4"},
           toric.empty() ? "none" : toric[0]);
    expect(out, "standard monomials = {dz4, 1}", std == std::vector<std::string>{"dz4", "1"},
           std.empty() ? "none" : std[0]);
    expect(out, "S-pair certificate", g.basis->gb.verify());
  });
}

inline void check_contiguity(std::vector<Check>& out, Example& g) {
  guarded(out, "direction 4 contiguity", [&] {
    g.build_basis();
    WeylRing r = g.basis->gb.ring();
    auto c = direction_contiguity(*g.basis, 3);
    expect(out, "b_4 = b2*b3", c.b == parse_poly("b2*b3", r.symbols()), poly_to_string(c.b, r.symbols()));
    auto want = parse_operator("z2*z3*dz1", r) + (theta(r, 1) + theta(r, 2) + theta(r, 3)) * parse_operator("z4", r);
    expect(out, "C_4 = z2*z3*dz1+(theta2+theta3+theta4)*z4", c.c == want, operator_to_string(c.c));
    expect(out, "NF(C_4*dz4 - b_4) = 0", certify_contiguity(*g.basis, c));
  });
}

inline void check_pfaffian(std::vector<Check>& out, Example& g) {
  guarded(out, g.name + " Pfaffian", [&] {
    g.build_pfaffian();
    SymbolTable sym = g.symbols();
    if (g.name == "gauss") {
      auto m = entry_mismatch(g.pf->matrix(3), g.parse(gauss_p4()), sym);
      expect(out, "gauss P_4 printed matrix", m.empty(), m);
    } else {
      auto m = entry_mismatch(g.at_printed(g.pf->matrix(0)), g.parse(three_f2_p1()), sym);
      expect(out, "3f2 P_1 printed matrix", m.empty(), m);
    }
  });
}

inline void check_integrability(std::vector<Check>& out, Example& g) {
  guarded(out, g.name + " integrability", [&] {
    g.build_pfaffian();
    auto P = g.pf->all();
    WeylRing r = g.basis->gb.ring();
    std::string bad;
    for (int i = 0; i < r.N; ++i)
      for (int j = i + 1; j < r.N; ++j)
        if (!integrability_defect(P[std::size_t(i)], P[std::size_t(j)], r.z(i), r.z(j)).is_zero())
          bad += " (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
    expect(out, g.name + " integrability for all direction pairs", bad.empty(), "defect at" + bad);
  });
}

inline void check_secondary(std::vector<Check>& out, Example& g, const SecondaryOptions& opt = {}) {
  guarded(out, g.name + " secondary equation", [&] {
    g.build_intersection(opt);
    expect(out, g.name + " solution space dimension 1", g.sol->dimension == 1, std::to_string(g.sol->dimension));
    std::string bad;
    for (int i = 0; i < g.config.N(); ++i)
      if (!secondary_residual(*g.sys, g.res->ich, i).is_zero()) bad += " " + std::to_string(i + 1);
    expect(out, g.name + " secondary residual vanishes", bad.empty(), "nonzero in direction" + bad);
  });
}

inline void check_intersection(std::vector<Check>& out, Example& g, const SecondaryOptions& opt = {}) {
  guarded(out, g.name + " intersection matrix", [&] {
    g.build_intersection(opt);
    bool gauss = g.name == "gauss";
    int power = gauss ? 1 : 2;
    expect(out, g.name + " power of 2 pi i", g.res->two_pi_i_power == power, std::to_string(g.res->two_pi_i_power));
    auto m = entry_mismatch(g.at_printed(g.res->ich), g.parse(gauss ? gauss_intersection() : three_f2_intersection()),
                            g.symbols());
    expect(out, g.name + " normalized intersection printed matrix", m.empty(), m);
  });
}

inline void check_triangulation(std::vector<Check>& out, const std::string& name, const CayleyConfig& a,
                                const Triangulation& want, std::uint64_t seed) {
  guarded(out, name + " triangulation", [&] {
    bool hit = false, certified = false;
    for (auto& r : search_regular_triangulations(a, seed))
      if (r.t == want) {
        hit = true;
        certified = in_cone_CT(a, r.omega, r.t) && regular_triangulation(a, r.omega) == want;
      }
    expect(out, name + " triangulation found by search", hit);
    expect(out, name + " triangulation unimodular", is_unimodular(a, want));
    expect(out, name + " triangulation weight certificate", certified);
  });
}

inline std::vector<Check> verify(const std::string& which, std::uint64_t seed = 7, const SecondaryOptions& opt = {}) {
  std::vector<Check> out;
  if (which == "gauss") {
    Example g = gauss_example();
    check_toric(out, g);
    check_contiguity(out, g);
    check_pfaffian(out, g);
    check_integrability(out, g);
    check_secondary(out, g, opt);
    check_intersection(out, g, opt);
    check_triangulation(out, "gauss", g.config, g.t, seed);
  } else if (which == "3f2") {
    Example g = three_f2_example();
    check_pfaffian(out, g);
    check_integrability(out, g);
    check_secondary(out, g, opt);
    check_intersection(out, g, opt);
    check_triangulation(out, "3f2", g.config, g.t, seed);
  } else {
    throw ParseError("unknown fixture '" + which + "', expected gauss or 3f2");
  }
  return out;
}

}  // namespace gkz::fixtures
