#include "gkz/cli.hpp"
#include "gkz/error.hpp"

#include <doctest.h>

#include <random>
#include <string>

using namespace gkz;
using gkz::cli::Json;

namespace {

const char* kExample1 = R"({"r":1,"n":1,"weights":[[[0],[1],[-1]]],"beta":["-1/2"]})";
const char* kExample2 = R"({"r":1,"n":1,"weights":[[[0],[1],[2],[-1]]],"beta":["-1/2"]})";
const char* kExample3 = R"({"r":1,"n":1,"weights":[[[0],[1],[2],[-1],[-2]]],"beta":["-1/2"]})";

ErrorCode code_of(const std::string& text) {
  try {
    cli::parse_problem_text(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error for " << text);
  return ErrorCode::ParseError;
}

std::string message_of(const std::string& text) {
  try {
    cli::parse_problem_text(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

Json run_text(const std::string& cmd, const char* text, const cli::RunOptions& o = {}) {
  const auto p = cli::parse_problem_text(text);
  return cli::run(cmd, &p, o);
}

}  // namespace

TEST_CASE("parse example 1") {
  const auto p = cli::parse_problem_text(kExample1);
  CHECK(p.r == 1);
  CHECK(p.n == 1);
  CHECK(p.weights.size() == 1);
  CHECK(p.weights[0].size() == 3);
  CHECK(p.beta == RatVector{Rational(-1, 2)});
  const GkzSystem sys = p.system();
  CHECK(sys.m() == 3);
}

TEST_CASE("validation diagnostics carry JSON paths") {
  CHECK(code_of(R"({"r":1,"n":1,"weights":[[[0],[1],[-1]]],"beta":["1"]})") == ErrorCode::ValidationError);
  CHECK(message_of(R"({"r":1,"n":1,"weights":[[[0],[1],[-1]]],"beta":["1"]})").find("$.beta") !=
        std::string::npos);
  CHECK(message_of(R"({"r":1,"n":1,"weights":[[[0],[1],[-1]]],"beta":["1"]})").find("IntegralBeta") !=
        std::string::npos);
  CHECK(message_of(R"({"r":1,"n":1,"weights":[[[0],[1,2],[-1]]],"beta":["1/2"]})")
            .find("$.weights[0][1]") != std::string::npos);
  CHECK(message_of(R"({"r":1,"n":1,"weights":[[[0],[1],[-1]]],"beta":["1/2"],"bogus":0})")
            .find("$.bogus") != std::string::npos);
  CHECK(message_of(R"({"r":1,"n":1,"weights":[[[0],[1],[-1]]],"beta":["a/b"]})").find("$.beta[0]") !=
        std::string::npos);
  CHECK(message_of(R"({"r":1,"n":1,"weights":[[[0],[2],[-2]]],"beta":["1/2"]})").find("LatticeNotSpanned") !=
        std::string::npos);
  CHECK(message_of(R"({"r":1,"n":1,"weights":[[[0],[1],[-1]]],"beta":["1/2"],"nodes":300})")
            .find("$.nodes") != std::string::npos);
  CHECK(message_of(R"({"r":1,"n":1,"weights":[[[0],[1],[-1]]],"beta":["1/2"],"x":[[1,2]]})")
            .find("$.x[0]") != std::string::npos);
  CHECK(code_of(R"({"r":1,)") == ErrorCode::ParseError);
  CHECK(code_of(R"([1,2])") == ErrorCode::ValidationError);
  CHECK(code_of(R"({"r":1,"n":1,"weights":[[[0],[1],[-1]]]})") == ErrorCode::ValidationError);
  CHECK(code_of(R"({"r":-1,"n":1,"weights":[[[0],[1],[-1]]],"beta":["1/2"]})") == ErrorCode::ValidationError);
}

TEST_CASE("serialization is idempotent") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> w(-4, 4), len(2, 4);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 60; ++trial) {
    Json doc = Json::object();
    doc["r"] = 1;
    doc["n"] = 1;
    Json block = Json::array();
    const int count = len(rng);
    for (int j = 0; j < count; ++j) block.push_back(Json::array({w(rng)}));
    doc["weights"] = Json::array({block});
    doc["beta"] = Json::array({"-1/3"});
    if (trial % 2 == 0) {
      Json x = Json::array();
      for (int j = 0; j < count; ++j) x.push_back(Json::array({0.5 + j, -0.25 * j}));
      doc["x"] = Json::array({x});
      doc["nodes"] = 512;
      doc["tol"] = 1e-7;
      doc["seed"] = trial;
    }
    cli::ProblemFile p;
    try {
      p = cli::parse_problem(doc);
    } catch (const Error&) {
      continue;
    }
    const Json once = cli::serialize_problem(p);
    const Json twice = cli::serialize_problem(cli::parse_problem(once));
    CHECK(once.dump() == twice.dump());
    ++checked;
  }
  CHECK(checked >= 30);
}

TEST_CASE("reports of the worked examples") {
  const Json v1 = run_text("validate", kExample1);
  CHECK(v1["valid"] == true);
  CHECK(v1["hypothesis"] == true);

  cli::RunOptions deg2;
  deg2.max_degree = 2;
  const Json ops = run_text("operators", kExample1, deg2);
  REQUIRE(ops["box"].size() == 1);
  CHECK(ops["box"][0]["text"] == "D1^2 - D2*D3");

  const Json t1 = run_text("toric", kExample1);
  CHECK(t1["a"]["rho_0"] == Json::array({1}));
  CHECK(t1["a"]["rho_inf"] == Json::array({1}));
  CHECK(t1["I"].empty());
  CHECK(t1["rank"] == 2);

  const Json r2 = run_text("rank", kExample2);
  CHECK(r2["rank"] == 3);
  CHECK(r2["volume"] == 3);
  CHECK(r2["I"] == Json::array({"rho_inf"}));

  const Json t2 = run_text("toric", kExample2);
  std::vector<std::string> keys;
  for (const auto& [k, v] : t2.items()) keys.push_back(k);
  const std::vector<std::string> expected{"schema_version", "command", "a",       "lengths",
                                          "I",              "J",       "profile", "les",
                                          "rank"};
  CHECK(keys == expected);
  CHECK(t2["les"].dump() == R"({"h1_int":0,"h1_U":2,"h1_rel":3,"h0_int":1,"h0_U":0,"h0_rel":0})");

  CHECK(run_text("volume", kExample3)["volume"] == 4);
}

TEST_CASE("cokernel demo") {
  const Json out = cli::run("cokernel-demo", nullptr, {});
  CHECK(out["verified"] == true);
  CHECK(out["L"] == "0");
  cli::RunOptions bad;
  bad.c = "1";
  CHECK_THROWS_AS(cli::run("cokernel-demo", nullptr, bad), Error);
}

TEST_CASE("reports are deterministic") {
  const char* with_x = R"({"r":1,"n":1,"weights":[[[0],[1],[2],[-1]]],"beta":["-1/2"],"seed":9})";
  cli::RunOptions o;
  o.nodes = 1024;
  const std::string a = run_text("periods", with_x, o).dump();
  const std::string b = run_text("periods", with_x, o).dump();
  CHECK(a == b);
  CHECK(run_text("report", kExample3).dump() == run_text("report", kExample3).dump());
}

TEST_CASE("periods report on example 1") {
  const char* text = R"({"r":1,"n":1,"weights":[[[0],[1],[-1]]],"beta":["-1/2"],"x":[[3,1,1]]})";
  const Json out = run_text("periods", text);
  CHECK(out["rank"] == 2);
  CHECK(out["expected_rank"] == 2);
  REQUIRE(out["circles"].size() == 3);
  CHECK(out["circles"][1]["closed"] == true);
  for (const auto& r : out["circles"][1]["euler_residuals"]) CHECK(r.get<double>() < 1e-8);
}

TEST_CASE("exit codes by failure class") {
  CHECK(cli::exit_code_for(Error(ErrorCode::ValidationError, "x")) == 2);
  CHECK(cli::exit_code_for(Error(ErrorCode::HypothesisFailed, "x")) == 2);
  CHECK(cli::exit_code_for(Error(ErrorCode::BranchJump, "x")) == 3);
  CHECK(cli::exit_code_for(Error(ErrorCode::RootFindingDiverged, "x")) == 3);
  CHECK(cli::exit_code_for(std::runtime_error("x")) == 1);
}
