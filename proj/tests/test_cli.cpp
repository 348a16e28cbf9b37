#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "jobs.hpp"

using namespace gkz;
using gkz::jobs::json;

namespace {

namespace fs = std::filesystem;

const json kGaussA = json::parse("[[1,1,0,0],[0,0,1,1],[0,1,0,1]]");
const json kGaussBasis = json::parse(R"([{"q_prime":[1,0],"q_doubleprime":[0]},{"q_prime":[0,1],"q_doubleprime":[0]}])");

RatMatrix read_matrix(const json& j, const SymbolTable& sym) {
  return parse_matrix(j.get<std::vector<std::vector<std::string>>>(), sym);
}

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / "gkz_cli_test";
  fs::create_directories(d);
  return d / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(GKZ_CLI_PATH) + " " + args + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Jobs, BasisShape) {
  auto out = jobs::run("basis", {{"A", kGaussA}, {"order", "grevlex"}}, {});
  EXPECT_EQ(out["A"], kGaussA);
  EXPECT_EQ(out["order"], "grevlex");
  EXPECT_EQ(out["standard_monomials"], json::parse(R"(["dz4","1"])"));
  EXPECT_EQ(out["toric_generators"], json::parse(R"(["dz2*dz3-dz1*dz4"])"));
  EXPECT_EQ(out["generators"].size(), 4u);
}

TEST(Jobs, PfaffianUsesOneBasedDirections) {
  auto out = jobs::run("pfaffian", {{"A", kGaussA}, {"basis", kGaussBasis}}, {});
  SymbolTable sym = SymbolTable::gkz(3, 4);
  ASSERT_TRUE(out["pfaffian"].contains("4"));
  EXPECT_FALSE(out["pfaffian"].contains("0"));
  EXPECT_EQ(read_matrix(out["pfaffian"]["4"], sym),
            parse_matrix({{"b2*z1/(z1*z4-z2*z3)", "-b2*z3/(z1*z4-z2*z3)"},
                          {"-b1*z1*z2/(z1*z4^2-z2*z3*z4)", "(b3*z1*z4+(b1-b3)*z2*z3)/(z1*z4^2-z2*z3*z4)"}},
                         sym));
}

TEST(Jobs, IntersectGauss) {
  json in{{"A", kGaussA}, {"basis", kGaussBasis}, {"at", {{"z1", 1}, {"z2", 1}, {"z3", 1}}}};
  auto out = jobs::run("intersect", in, {});
  SymbolTable sym = SymbolTable::gkz(3, 4);
  EXPECT_EQ(out["n"], 1);
  EXPECT_EQ(read_matrix(out["I_ch_over_(2pii)^n"], sym), parse_matrix({{"1/b1-1/b3", "-1/b3"}, {"-1/b3", "1/b2-1/b3"}}, sym));
  EXPECT_EQ(out["z0"]["triangulation"], json::parse("[[1,2,3],[2,3,4]]"));
  EXPECT_EQ(out["secondary"]["dimension"], 1);
}

TEST(Jobs, TriangulateFromWeight) {
  auto out = jobs::run("triangulate", {{"A", kGaussA}, {"omega", {0, 0, 0, 1}}}, {});
  EXPECT_EQ(out["simplices"], json::parse("[[1,2,3],[2,3,4]]"));
  EXPECT_EQ(out["unimodular"], true);
  EXPECT_THROW(jobs::run("triangulate", {{"A", kGaussA}, {"omega", {0, 0, 0, 0}}}, {}), DegenerateError);
}

TEST(Jobs, SeriesCarriesTruncationMetadata) {
  json in{{"A", kGaussA}, {"sigma", {1, 2, 3}}, {"beta", {"13/71", "-29/83", "41/97"}}, {"z", {"1.1", "0.9", "1.3", "0.05"}}};
  jobs::Config cfg;
  auto a = jobs::run("series", in, cfg);
  EXPECT_EQ(a["K"], 12);
  EXPECT_TRUE(a.contains("last_shell"));
  cfg.truncation_K = 16;
  auto b = jobs::run("series", in, cfg);
  double va = std::stod(a["value"][0].get<std::string>()), vb = std::stod(b["value"][0].get<std::string>());
  EXPECT_LT(std::abs(va - vb), 10 * std::stod(a["last_shell"].get<std::string>()));
  in["sigma"] = {1, 2, 5};
  EXPECT_THROW(jobs::run("series", in, cfg), ParseError);
}

TEST(Jobs, RcinExactAndNumeric) {
  json in{{"A", kGaussA},
          {"triangulation", {{1, 2, 3}, {2, 3, 4}}},
          {"q", kGaussBasis[0]},
          {"q_dual", kGaussBasis[0]},
          {"beta", {"13/71", "-29/83", "41/97"}},
          {"z", {1, 1, 1, "0.01"}}};
  auto num = jobs::run("rcin", in, {});
  double expect = 71.0 / 13 - 97.0 / 41;
  EXPECT_NEAR(std::stod(num["value_over_(2pii)^n"][0].get<std::string>()), expect, 1e-9 * expect);
  in["omega"] = {0, 0, 0, 1};
  in["order"] = 0;
  auto exact = jobs::run("rcin", in, {});
  EXPECT_EQ(parse_ratfun(exact["coefficient_over_(2pii)^n"].get<std::string>(), SymbolTable::gkz(3, 4)),
            parse_ratfun("1/b1-1/b3", SymbolTable::gkz(3, 4)));
}

TEST(Jobs, L2BothMethodsAgree) {
  json in{{"h", {"1-x", "z-x"}}, {"gamma", {"0.3", "0.4"}}, {"c", {"0.6"}}, {"z", "0.2"}, {"method", "both"}};
  auto out = jobs::run("l2", in, {});
  EXPECT_LT(std::stod(out["relative_difference"].get<std::string>()), 1e-3);
  EXPECT_EQ(out["series"]["triangulation"], json::parse("[[1,2,4],[1,3,4]]"));
  EXPECT_EQ(out["series"]["converged"], true);
  in["gamma"] = {"1.2", "0.4"};
  in["method"] = "quadrature";
  EXPECT_THROW(jobs::run("l2", in, {}), DivergenceError);
}

TEST(Jobs, VerifyFixtures) {
  auto out = jobs::run("verify", {{"fixture", "gauss"}}, {});
  EXPECT_EQ(out["pass"], true);
  EXPECT_GE(out["checks"].size(), 10u);
  EXPECT_THROW(jobs::run("verify", {{"fixture", "nope"}}, {}), ParseError);
}

TEST(Jobs, MissingFieldIsParseError) {
  EXPECT_THROW(jobs::run("pfaffian", {{"A", kGaussA}}, {}), ParseError);
  EXPECT_THROW(jobs::run("basis", {{"A", "x"}}, {}), ParseError);
  EXPECT_THROW(jobs::run("frobnicate", json::object(), {}), ParseError);
}

TEST(Config, Precedence) {
  auto file = scratch("settings.conf");
  write(file, "# comment\ntruncation_K = 9\nseed=3\n");
  jobs::Config cfg;
  cfg.load_file(file.string());
  EXPECT_EQ(cfg.truncation_K, 9);
  ::setenv("GKZ_TRUNCATION_K", "11", 1);
  cfg.load_environment();
  ::unsetenv("GKZ_TRUNCATION_K");
  EXPECT_EQ(cfg.truncation_K, 11);
  cfg.set_assignment("truncation_K=14");
  EXPECT_EQ(cfg.truncation_K, 14);
  EXPECT_EQ(cfg.seed, 3u);
  EXPECT_THROW(cfg.set_assignment("nonsense=1"), ParseError);
  EXPECT_THROW(cfg.set_assignment("seed=-4"), ParseError);
  EXPECT_THROW(cfg.set_assignment("seed"), ParseError);
}

TEST(Binary, ExitCodes) {
  auto bad = scratch("bad.json"), out = scratch("out.json");
  write(bad, "{\"A\": [[1,1");
  fs::remove(out);
  EXPECT_EQ(run_cli("basis --input " + bad.string() + " --output " + out.string()), 2);
  EXPECT_FALSE(fs::exists(out));

  auto lattice = scratch("lattice.json");
  write(lattice, R"({"A": [[1,1],[0,2]]})");
  EXPECT_EQ(run_cli("basis --input " + lattice.string() + " --output " + out.string()), 3);
  EXPECT_FALSE(fs::exists(out));

  auto short_basis = scratch("short.json");
  write(short_basis, R"({"A": [[1,1,0,0],[0,0,1,1],[0,1,0,1]], "basis": [[1,0,0]]})");
  EXPECT_EQ(run_cli("pfaffian --input " + short_basis.string()), 5);

  EXPECT_EQ(run_cli("nosuchcommand"), 2);
  EXPECT_EQ(run_cli("basis --set bogus=1 --input " + lattice.string()), 2);
}

TEST(Binary, VerifyBothExamples) {
  EXPECT_EQ(run_cli("verify gauss --output " + scratch("vg.json").string()), 0);
  EXPECT_EQ(run_cli("verify 3f2 --output " + scratch("v3.json").string()), 0);
}

TEST(Binary, Deterministic) {
  auto in = scratch("intersect.json");
  write(in, json{{"A", kGaussA}, {"basis", kGaussBasis}}.dump());
  auto a = scratch("a.json"), b = scratch("b.json");
  ASSERT_EQ(run_cli("intersect --input " + in.string() + " --output " + a.string()), 0);
  ASSERT_EQ(run_cli("intersect --input " + in.string() + " --output " + b.string()), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  auto t = scratch("tri.json");
  write(t, R"({"A": [[1,1,0,0,0,0],[0,0,1,1,0,0],[0,0,0,0,1,1],[1,0,0,1,0,0],[0,0,1,0,0,1]]})");
  ASSERT_EQ(run_cli("triangulate --set seed=5 --input " + t.string() + " --output " + a.string()), 0);
  ASSERT_EQ(run_cli("triangulate --set seed=5 --input " + t.string() + " --output " + b.string()), 0);
  EXPECT_EQ(slurp(a), slurp(b));
}
