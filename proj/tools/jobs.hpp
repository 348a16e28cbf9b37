#pragma once

#include <nlohmann/json.hpp>

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "gkz/format.hpp"
#include "gkz/intersection.hpp"
#include "gkz/l2.hpp"
#include "fixtures.hpp"

namespace gkz::jobs {

using json = nlohmann::ordered_json;

// Flat key=value settings. Later sources override earlier ones: defaults, config file, GKZ_* environment, --set.
struct Config {
  int truncation_K = 12;
  unsigned ansatz_degree = 8;
  unsigned denominator_power = 3;
  unsigned precision_digits = 50;
  std::size_t buchberger_step_limit = 20000;
  std::uint64_t seed = 7;
  unsigned workers = 1;  // accepted for compatibility; every job runs on one thread

  static const std::vector<std::string>& keys() {
    static const std::vector<std::string> k{"truncation_K",         "ansatz_degree", "denominator_power", "precision_digits",
                                            "buchberger_step_limit", "seed", "workers"};
    return k;
  }

  void set(const std::string& key, const std::string& value) {
    unsigned long long v = 0;
    try {
      std::size_t used = 0;
      if (value.empty() || !std::isdigit(static_cast<unsigned char>(value[0]))) throw std::invalid_argument(value);
      v = std::stoull(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ParseError("setting '" + key + "' needs a nonnegative integer, got '" + value + "'");
    }
    if (key == "truncation_K") truncation_K = int(v);
    else if (key == "ansatz_degree") ansatz_degree = unsigned(v);
    else if (key == "denominator_power") denominator_power = unsigned(v);
    else if (key == "precision_digits") precision_digits = unsigned(v);
    else if (key == "buchberger_step_limit") buchberger_step_limit = std::size_t(v);
    else if (key == "seed") seed = v;
    else if (key == "workers") workers = unsigned(v);
    else throw ParseError("unknown setting '" + key + "'");
  }

  void set_assignment(const std::string& kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value, got '" + kv + "'");
    set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
  }

  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read config file " + path);
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line.substr(0, line.find('#')));
      if (!line.empty()) set_assignment(line);
    }
  }

  void load_environment() {
    for (auto& k : keys()) {
      std::string name = "GKZ_";
      for (char c : k) name += char(std::toupper(static_cast<unsigned char>(c)));
      if (const char* v = std::getenv(name.c_str())) set(k, v);
    }
  }

  json to_json() const {
    return json{{"truncation_K", truncation_K},
                {"ansatz_degree", ansatz_degree},
                {"denominator_power", denominator_power},
                {"precision_digits", precision_digits},
                {"buchberger_step_limit", buchberger_step_limit},
                {"seed", seed},
                {"workers", workers}};
  }

  static std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n"), e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
  }
};

// ---- input helpers ----

inline const json& field(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError("missing field '" + key + "'");
  return j.at(key);
}

inline mpq_class to_q(const json& j) {
  if (j.is_number_integer()) return mpq_class(j.dump());
  if (j.is_number()) return parse_rational(j.dump());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw ParseError("expected a number, got " + j.dump());
}

inline QVec to_qvec(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of numbers, got " + j.dump());
  QVec v;
  for (auto& x : j) v.push_back(to_q(x));
  return v;
}

inline IntVec to_intvec(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of integers, got " + j.dump());
  IntVec v;
  for (auto& x : j) {
    if (!x.is_number_integer()) throw ParseError("expected an integer, got " + x.dump());
    v.push_back(x.get<long>());
  }
  return v;
}

inline CayleyConfig to_config(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("A must be a nonempty array of rows");
  std::vector<std::vector<long>> rows;
  for (auto& r : j) {
    IntVec v = to_intvec(r);
    if (!rows.empty() && v.size() != rows[0].size()) throw ParseError("rows of A differ in length");
    rows.push_back(v);
  }
  return CayleyConfig(IntMatrix(rows));
}

inline std::vector<IntVec> to_forms(const json& j, const CayleyConfig& a) {
  if (!j.is_array()) throw ParseError("basis must be an array");
  std::vector<IntVec> q;
  for (auto& f : j) {
    IntVec v;
    if (f.is_object()) {
      FormIndex fi{to_intvec(field(f, "q_prime")), to_intvec(field(f, "q_doubleprime"))};
      v = fi.q();
    } else {
      v = to_intvec(f);
    }
    if (int(v.size()) != a.d()) throw ParseError("form index " + f.dump() + " has the wrong length");
    q.push_back(v);
  }
  return q;
}

inline json forms_to_json(const std::vector<IntVec>& q, const CayleyConfig& a) {
  json out = json::array();
  for (auto& v : q)
    out.push_back({{"q_prime", IntVec(v.begin(), v.begin() + a.k())}, {"q_doubleprime", IntVec(v.begin() + a.k(), v.end())}});
  return out;
}

inline Triangulation to_triangulation(const json& j, const CayleyConfig& a) {
  Triangulation t;
  for (auto& s : j) {
    std::vector<int> v;
    for (long x : to_intvec(s)) {
      if (x < 1 || x > a.N()) throw ParseError("simplex index out of range in " + s.dump());
      v.push_back(int(x - 1));
    }
    std::sort(v.begin(), v.end());
    t.simplices.push_back(v);
  }
  std::sort(t.simplices.begin(), t.simplices.end());
  return t;
}

inline json triangulation_to_json(const Triangulation& t) {
  json out = json::array();
  for (auto& s : t.simplices) {
    json v = json::array();
    for (int x : s) v.push_back(x + 1);
    out.push_back(v);
  }
  return out;
}

inline json qvec_to_json(const QVec& v) {
  json out = json::array();
  for (auto& x : v) out.push_back(x.get_str());
  return out;
}

inline Complex to_complex(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw ParseError("complex numbers are [re, im] pairs");
    return Complex(to_real(to_q(j[0])), to_real(to_q(j[1])));
  }
  return Complex(to_real(to_q(j)));
}

inline std::vector<Complex> to_point(const json& j) {
  if (!j.is_array()) throw ParseError("z must be an array");
  std::vector<Complex> z;
  for (auto& x : j) z.push_back(to_complex(x));
  return z;
}

inline json complex_to_json(const Complex& z, int digits = 30) {
  return json::array({real_to_string(z.re, digits), real_to_string(z.im, digits)});
}

// delta from {"delta": {"gamma": [...], "c": [...]}} or from {"beta": [...]} through delta = -beta.
inline QVec to_delta(const json& in, const CayleyConfig& a) {
  QVec d;
  if (in.contains("delta")) {
    const json& j = in.at("delta");
    if (j.is_array()) {
      d = to_qvec(j);
    } else {
      d = to_qvec(field(j, "gamma"));
      QVec c = to_qvec(field(j, "c"));
      d.insert(d.end(), c.begin(), c.end());
    }
  } else if (in.contains("beta")) {
    for (auto& b : to_qvec(in.at("beta"))) d.push_back(-b);
  } else {
    throw ParseError("missing field 'delta' or 'beta'");
  }
  if (int(d.size()) != a.d()) throw ParseError("parameter has the wrong length");
  return d;
}

// {"z2": "-1", ...}: substitutions applied to printed matrices only.
inline RatMatrix apply_at(RatMatrix m, const json& in, const SymbolTable& sym) {
  if (!in.contains("at")) return m;
  for (auto& [name, v] : in.at("at").items()) m = m.substitute(sym.slot(name), to_q(v));
  return m;
}

inline json matrix_to_json(const RatMatrix& m, const SymbolTable& sym) { return json(matrix_to_strings(m, sym)); }

inline GkzBasis basis_for(const json& in, const CayleyConfig& a, const Config& cfg) {
  std::string order = in.value("order", std::string("grevlex"));
  return gkz_groebner(a, TermOrder::parse(order, a.N()), cfg.buchberger_step_limit);
}

// First unimodular regular triangulation whose cone holds the weight, or the first unimodular one.
inline Triangulation pick_triangulation(const CayleyConfig& a, const Config& cfg, const QVec* weight = nullptr) {
  for (auto& r : search_regular_triangulations(a, cfg.seed)) {
    if (!is_unimodular(a, r.t)) continue;
    if (!weight || in_cone_CT(a, *weight, r.t)) return r.t;
  }
  throw ParameterError(weight ? "no unimodular regular triangulation has the point in its cone"
                              : "no unimodular regular triangulation found");
}

// ---- commands ----

inline json run_basis(const json& in, const Config& cfg) {
  CayleyConfig a = to_config(field(in, "A"));
  GkzBasis g = basis_for(in, a, cfg);
  json gens = json::array(), std = json::array(), toric = json::array();
  for (auto& op : g.gb.generators()) gens.push_back(operator_to_string(op));
  for (auto& m : g.standard) std.push_back(dmonomial_to_string(m, a.N()));
  for (auto& t : g.toric.generators) toric.push_back(dpoly_to_string(t, a.N()));
  return json{{"A", field(in, "A")},
              {"order", in.value("order", std::string("grevlex"))},
              {"toric_generators", toric},
              {"generators", gens},
              {"standard_monomials", std},
              {"holonomic_rank", g.standard.size()}};
}

inline json run_pfaffian(const json& in, const Config& cfg) {
  CayleyConfig a = to_config(field(in, "A"));
  GkzBasis g = basis_for(in, a, cfg);
  auto q = to_forms(field(in, "basis"), a);
  Pfaffian pf(g, q);
  SymbolTable sym = g.gb.ring().symbols();
  json p = json::object();
  for (int i = 0; i < a.N(); ++i) p[std::to_string(i + 1)] = matrix_to_json(apply_at(pf.matrix(i), in, sym), sym);
  json std = json::array();
  for (auto& m : g.standard) std.push_back(dmonomial_to_string(m, a.N()));
  json out{{"A", field(in, "A")},
           {"order", in.value("order", std::string("grevlex"))},
           {"basis", forms_to_json(q, a)},
           {"standard_monomials", std},
           {"pfaffian", p}};
  if (in.contains("at")) out["at"] = in.at("at");
  return out;
}

inline json run_intersect(const json& in, const Config& cfg) {
  CayleyConfig a = to_config(field(in, "A"));
  GkzBasis g = basis_for(in, a, cfg);
  auto q = to_forms(field(in, "basis"), a);
  auto qd = in.contains("dual_basis") ? to_forms(in.at("dual_basis"), a) : q;
  Pfaffian pf(g, q), pfd(g, qd);
  auto sys = secondary_system(pf, pfd);
  SecondaryOptions opt;
  opt.max_degree = cfg.ansatz_degree;
  opt.max_exponent = cfg.denominator_power;
  opt.seed = cfg.seed;
  auto sol = solve_secondary(sys, opt);
  std::vector<Triangulation> candidates;
  if (in.contains("triangulation")) {
    candidates.push_back(to_triangulation(in.at("triangulation"), a));
  } else {
    for (auto& r : search_regular_triangulations(a, cfg.seed))
      if (is_unimodular(a, r.t)) candidates.push_back(r.t);
  }
  if (candidates.empty()) throw NormalizationError("no unimodular regular triangulation is available");
  std::optional<IntersectionResult> res;
  Triangulation used;
  std::string last;
  for (auto& t : candidates) {
    try {
      res = normalize_intersection(a, sol.matrix, q, qd, t);
      used = t;
      break;
    } catch (const NormalizationError& e) {
      last = e.what();
    }
  }
  if (!res) throw NormalizationError(last);
  SymbolTable sym = g.gb.ring().symbols();
  json slice = json::array();
  for (int j : sol.slice) slice.push_back(j + 1);
  json out{{"A", field(in, "A")},
           {"basis", forms_to_json(q, a)},
           {"dual_basis", forms_to_json(qd, a)},
           {"n", res->two_pi_i_power},
           {"I_ch_over_(2pii)^n", matrix_to_json(apply_at(res->ich, in, sym), sym)},
           {"C", ratfun_to_string(res->c, sym)},
           {"z0",
            {{"triangulation", triangulation_to_json(used)},
             {"omega", res->omega},
             {"zeta", qvec_to_json(res->zeta)},
             {"entry", {res->row + 1, res->col + 1}},
             {"laurent_order", res->order}}},
           {"secondary",
            {{"dimension", sol.dimension},
             {"degree", sol.degree},
             {"denominator_power", sol.exponent},
             {"unknowns", sol.unknowns},
             {"slice", slice}}},
           {"raw", matrix_to_json(sol.matrix, sym)}};
  if (in.contains("at")) out["at"] = in.at("at");
  return out;
}

inline json run_triangulate(const json& in, const Config& cfg) {
  CayleyConfig a = to_config(field(in, "A"));
  auto describe = [&](const Triangulation& t, const QVec& w) {
    return json{{"omega", qvec_to_json(w)},
                {"simplices", triangulation_to_json(t)},
                {"unimodular", is_unimodular(a, t)},
                {"normalized_volume", normalized_volume(a, t).get_str()}};
  };
  if (in.contains("omega")) {
    QVec w = to_qvec(in.at("omega"));
    if (int(w.size()) != a.N()) throw ParseError("omega has the wrong length");
    return describe(regular_triangulation(a, w), w);
  }
  json all = json::array();
  for (auto& r : search_regular_triangulations(a, cfg.seed)) all.push_back(describe(r.t, r.omega));
  return json{{"A", field(in, "A")}, {"triangulations", all}};
}

inline json run_series(const json& in, const Config& cfg) {
  CayleyConfig a = to_config(field(in, "A"));
  std::vector<int> sigma;
  for (long x : to_intvec(field(in, "sigma"))) {
    if (x < 1 || x > a.N()) throw ParseError("sigma index out of range: " + std::to_string(x));
    sigma.push_back(int(x - 1));
  }
  std::sort(sigma.begin(), sigma.end());
  QVec delta = to_delta(in, a);
  int K = in.value("K", cfg.truncation_K);
  auto z = to_point(field(in, "z"));
  if (int(z.size()) != a.N()) throw ParseError("z has the wrong length");
  std::string kind = in.value("kind", std::string("phi"));
  if (kind != "phi" && kind != "psi") throw ParseError("kind must be phi or psi");
  auto s = make_series(a, delta, sigma, K, kind == "phi");
  auto v = evaluate(s, z);
  json sig = json::array();
  for (int j : sigma) sig.push_back(j + 1);
  return json{{"kind", kind},
              {"sigma", sig},
              {"delta", qvec_to_json(delta)},
              {"K", K},
              {"terms", s.terms.size()},
              {"leading_exponent", qvec_to_json(s.leading_exponent)},
              {"value", complex_to_json(v.value)},
              {"last_shell", real_to_string(v.last_shell)}};
}

inline json run_rcin(const json& in, const Config& cfg) {
  CayleyConfig a = to_config(field(in, "A"));
  Triangulation t = in.contains("triangulation") ? to_triangulation(in.at("triangulation"), a) : pick_triangulation(a, cfg);
  auto q = to_forms(json::array({field(in, "q")}), a)[0];
  auto qd = to_forms(json::array({field(in, "q_dual")}), a)[0];
  FormPair fp = form_pair(a, q, qd);
  json out{{"triangulation", triangulation_to_json(t)}};
  if (in.contains("omega")) {
    IntVec omega = to_intvec(in.at("omega"));
    QVec zeta = in.contains("zeta") ? to_qvec(in.at("zeta")) : QVec(std::size_t(a.N()), 1);
    long order = in.value("order", 0L);
    SymbolTable sym = SymbolTable::gkz(a.d(), a.N());
    out["omega"] = omega;
    out["zeta"] = qvec_to_json(zeta);
    out["order"] = order;
    out["coefficient_over_(2pii)^n"] = ratfun_to_string(rcin_laurent_coefficient(a, t, fp, omega, zeta, order), sym);
    return out;
  }
  QVec delta = to_delta(in, a);
  int K = in.value("K", cfg.truncation_K);
  auto z = to_point(field(in, "z"));
  if (int(z.size()) != a.N()) throw ParseError("z has the wrong length");
  auto v = rcin_rhs(a, delta, t, fp, K, z);
  out["delta"] = qvec_to_json(delta);
  out["K"] = K;
  out["value_over_(2pii)^n"] = complex_to_json(v.value);
  out["last_shell"] = real_to_string(v.last_shell);
  return out;
}

// h_l as polynomials in x whose coefficients may use the symbol z.
inline json run_l2(const json& in, const Config& cfg) {
  SymbolTable sym(std::vector<std::string>{"x", "z"});
  const json& hs = field(in, "h");
  QVec gamma = to_qvec(field(in, "gamma"));
  QVec c = to_qvec(field(in, "c"));
  if (!hs.is_array() || hs.size() != gamma.size() || hs.empty()) throw ParseError("one gamma per polynomial h is required");
  if (c.size() != 1) throw ParameterError("only one integration variable is supported");
  mpq_class zval = in.contains("z") ? to_q(in.at("z")) : mpq_class(0);
  std::string method = in.value("method", std::string("both"));
  if (method != "series" && method != "quadrature" && method != "both")
    throw ParseError("method must be series, quadrature or both");
  int K = in.value("K", cfg.truncation_K);

  std::vector<std::vector<std::pair<long, mpq_class>>> polys;
  for (auto& h : hs) {
    if (!h.is_string()) throw ParseError("h entries must be strings");
    MultiPoly p = parse_poly(h.get<std::string>(), sym).substitute(1, MultiPoly(zval));
    std::vector<std::pair<long, mpq_class>> terms;
    for (auto& tm : p.terms()) terms.push_back({long(tm.m[0]), tm.c});
    std::sort(terms.begin(), terms.end(), [](auto& x, auto& y) { return x.first < y.first; });
    if (terms.empty()) throw ParameterError("h is identically zero");
    polys.push_back(terms);
  }
  json out{{"h", hs}, {"gamma", qvec_to_json(gamma)}, {"c", qvec_to_json(c)}, {"z", zval.get_str()}, {"method", method}};
  std::optional<double> series_value, quad_value;
  if (method != "quadrature") {
    std::size_t k = polys.size();
    std::vector<std::vector<long>> rows(k + 1);
    std::vector<Complex> zs;
    QVec weight;
    for (std::size_t l = 0; l < k; ++l)
      for (auto& [e, coef] : polys[l]) {
        for (std::size_t r = 0; r < k; ++r) rows[r].push_back(r == l ? 1 : 0);
        rows[k].push_back(e);
        zs.emplace_back(to_real(coef));
        // -log|z_j| rounded to 1e-9 for the cone test
        double w = -std::log(std::abs(coef.get_d()));
        mpq_class wq(long(std::llround(w * 1e9)), 1000000000L);
        wq.canonicalize();
        weight.push_back(wq);
      }
    CayleyConfig a{IntMatrix(rows)};
    Triangulation t = pick_triangulation(a, cfg, &weight);
    QVec delta = gamma;
    delta.push_back(c[0]);
    auto v = l2_series_value({a, delta, zs, t, K});
    series_value = v.value.convert_to<double>();
    Real tol = boost::multiprecision::abs(v.value) * Real("1e-8");
    out["series"] = {{"A", rows},
                     {"z", [&] {
                        json zj = json::array();
                        for (auto& x : zs) zj.push_back(real_to_string(x.re));
                        return zj;
                      }()},
                     {"triangulation", triangulation_to_json(t)},
                     {"K", K},
                     {"value", real_to_string(v.value)},
                     {"imaginary_part", real_to_string(v.imaginary)},
                     {"last_shell", real_to_string(v.last_shell)},
                     {"converged", v.last_shell <= tol}};
  }
  if (method != "series") {
    std::vector<CPoly> h;
    std::vector<double> g;
    for (std::size_t l = 0; l < polys.size(); ++l) {
      CPoly p(std::size_t(polys[l].back().first + 1), 0.0);
      for (auto& [e, coef] : polys[l]) p[std::size_t(e)] = coef.get_d();
      h.push_back(p);
      g.push_back(gamma[l].get_d());
    }
    auto r = quadrature_oracle(h, g, c[0].get_d());
    quad_value = r.value;
    std::ostringstream v, e;
    v.precision(15);
    e.precision(3);
    v << r.value;
    e << r.error;
    out["quadrature"] = {{"value", v.str()}, {"error_estimate", e.str()}};
  }
  if (series_value && quad_value) {
    std::ostringstream d;
    d.precision(3);
    d << std::abs(*series_value - *quad_value) / std::abs(*series_value);
    out["relative_difference"] = d.str();
  }
  return out;
}

// Carries a failed fixture run out of run() with its report attached.
struct VerifyFailure : Error {
  json report;
  explicit VerifyFailure(json r) : Error(ExitCode::failure, "fixture checks failed"), report(std::move(r)) {}
};

inline json run_verify(const json& in, const Config& cfg) {
  std::string which = field(in, "fixture").get<std::string>();
  SecondaryOptions opt;
  opt.max_degree = cfg.ansatz_degree;
  opt.max_exponent = cfg.denominator_power;
  opt.seed = cfg.seed;
  auto checks = fixtures::verify(which, cfg.seed, opt);
  json list = json::array();
  bool ok = true;
  for (auto& c : checks) {
    ok = ok && c.ok;
    json e{{"name", c.name}, {"pass", c.ok}};
    if (!c.ok) e["detail"] = c.detail;
    list.push_back(e);
  }
  json out{{"fixture", which}, {"pass", ok}, {"checks", list}};
  if (!ok) throw VerifyFailure(out);
  return out;
}

inline json run(const std::string& command, const json& in, const Config& cfg) {
  set_precision(cfg.precision_digits);
  if (command == "basis") return run_basis(in, cfg);
  if (command == "pfaffian") return run_pfaffian(in, cfg);
  if (command == "intersect") return run_intersect(in, cfg);
  if (command == "triangulate") return run_triangulate(in, cfg);
  if (command == "series") return run_series(in, cfg);
  if (command == "rcin") return run_rcin(in, cfg);
  if (command == "l2") return run_l2(in, cfg);
  if (command == "verify") return run_verify(in, cfg);
  throw ParseError("unknown command '" + command + "'");
}

}  // namespace gkz::jobs
