#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "jobs.hpp"

using gkz::jobs::json;

namespace {

json read_input(const std::string& path) {
  std::string text;
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path);
    if (!in) throw gkz::ParseError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw gkz::ParseError(std::string("malformed JSON: ") + e.what());
  }
}

void write_output(const std::string& path, const json& out) {
  std::string text = out.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw gkz::ResourceError("cannot write " + path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GKZ systems: Groebner bases, Pfaffians, intersection matrices, series and L2 integrals"};
  app.require_subcommand(1);
  std::string input, output, config_file;
  std::vector<std::string> sets;
  std::string fixture;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--input,-i", input, "input JSON file, - for stdin");
    sub->add_option("--output,-o", output, "output JSON file, stdout by default");
    sub->add_option("--set", sets, "override a setting: key=value");
    sub->add_option("--config", config_file, "flat key=value settings file");
  };
  const std::vector<std::pair<std::string, std::string>> commands{
      {"basis", "toric ideal, Groebner basis and standard monomials"},
      {"pfaffian", "Pfaffian matrices for a basis of forms"},
      {"intersect", "secondary equation and normalized intersection matrix"},
      {"triangulate", "regular triangulations with weight certificates"},
      {"series", "truncated Gamma series at a point"},
      {"rcin", "intersection number from the series side"},
      {"l2", "L2 integral by series and quadrature"}};
  for (auto& [name, help] : commands) common(app.add_subcommand(name, help));
  auto* verify = app.add_subcommand("verify", "run the built-in fixture pipelines");
  verify->add_option("fixture", fixture, "gauss or 3f2")->required();
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : int(gkz::ExitCode::parse);
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    gkz::jobs::Config cfg;
    if (!config_file.empty()) cfg.load_file(config_file);
    cfg.load_environment();
    for (auto& s : sets) cfg.set_assignment(s);
    json in = command == "verify" ? json{{"fixture", fixture}} : read_input(input);
    json out;
    try {
      out = gkz::jobs::run(command, in, cfg);
    } catch (const gkz::jobs::VerifyFailure& f) {
      write_output(output, f.report);
      throw;
    }
    write_output(output, out);
    return 0;
  } catch (const gkz::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return int(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return int(gkz::ExitCode::failure);
  }
}
