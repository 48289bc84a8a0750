#include "gkz/cli.hpp"
#include "gkz/error.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gkz::Error(gkz::ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GKZ systems on toric curves: operators, volumes, ranks and periods"};
  app.require_subcommand(1);

  gkz::cli::RunOptions options;
  std::string input = "-";
  std::string at_path;

  std::size_t max_degree = 0;
  std::size_t nodes = 0;
  double tol = 0.0;
  int max_order = 0;
  std::uint64_t seed = 0;
  std::string beta, g, c, d;

  std::map<std::string, CLI::App*> subs;
  for (const auto& name : gkz::cli::subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    subs[name] = sub;
    const bool optional_input = name == "cokernel-demo";
    auto* opt = sub->add_option("input", input, "Problem file, or - for stdin");
    if (!optional_input) opt->required();
  }
  subs["operators"]->add_option("--max-degree", max_degree, "Degree bound for box operators")
      ->check(CLI::PositiveNumber);
  for (const char* name : {"periods", "report"}) {
    CLI::App* sub = subs[name];
    sub->add_option("--at", at_path, "JSON file holding the evaluation point");
    sub->add_option("--nodes", nodes, "Quadrature nodes per cycle (power of two, >= 256)");
    sub->add_option("--tol", tol, "Relative rank threshold");
    sub->add_option("--max-order", max_order, "Largest derivative order in the period matrix")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", seed, "Seed for the evaluation point when none is given");
  }
  subs["report"]->add_option("--max-degree", max_degree, "Degree bound for box operators")
      ->check(CLI::PositiveNumber);
  CLI::App* demo = subs["cokernel-demo"];
  demo->add_option("--beta", beta, "Exponent beta (non-integral rational)");
  demo->add_option("--g", g, "Value of g (nonzero rational)");
  demo->add_option("--c", c, "Comma-separated coefficients of d_s^0, d_s^1, ...");
  demo->add_option("--d", d, "Comma-separated coefficients of s^1, s^2, ...");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  auto given = [&](const char* flag) {
    const CLI::Option* opt = chosen->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--max-degree")) options.max_degree = max_degree;
  if (given("--nodes")) options.nodes = nodes;
  if (given("--tol")) options.tol = tol;
  if (given("--max-order")) options.max_order = max_order;
  if (given("--seed")) options.seed = seed;
  if (given("--beta")) options.beta = beta;
  if (given("--g")) options.g = g;
  if (given("--c")) options.c = c;
  if (given("--d")) options.d = d;

  try {
    if (given("--at")) {
      gkz::cli::Json doc;
      try {
        doc = gkz::cli::Json::parse(read_input(at_path));
      } catch (const gkz::cli::Json::parse_error& e) {
        throw gkz::Error(gkz::ErrorCode::ParseError, at_path + ": " + e.what());
      }
      options.at = gkz::cli::parse_point(doc, "--at");
    }
    std::optional<gkz::cli::ProblemFile> problem;
    if (name != "cokernel-demo" || given("input")) {
      problem = gkz::cli::parse_problem_text(read_input(input));
    }
    const auto report = gkz::cli::run(name, problem ? &*problem : nullptr, options);
    std::cout << report.dump(2) << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "gkz " << name << ": " << e.what() << '\n';
    return gkz::cli::exit_code_for(e);
  }
}
