#pragma once

// Problem-file parsing and the JSON reports behind the gkz command-line tool.
// Reports use insertion-ordered objects so output is byte-stable.

#include "gkz/arith.hpp"
#include "gkz/periods.hpp"
#include "gkz/system.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gkz::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr std::size_t kDefaultNodes = 4096;
inline constexpr double kDefaultTol = 1e-6;
inline constexpr int kDefaultMaxOrder = 2;
inline constexpr std::uint64_t kDefaultSeed = 0;

struct ProblemFile {
  std::size_t r = 0;
  std::size_t n = 0;
  std::vector<WeightBlock> weights;
  RatVector beta;
  std::optional<EvaluationPoint> x;
  std::optional<std::size_t> nodes;
  std::optional<double> tol;
  std::optional<int> max_order;
  std::optional<std::size_t> degree_bound;
  std::optional<std::uint64_t> seed;

  GkzSystem system() const;
};

// Throws ParseError for malformed JSON and ValidationError, prefixed with the
// JSON path of the offending field, for anything that does not describe a
// valid system.
ProblemFile parse_problem(const Json& doc);
ProblemFile parse_problem_text(std::string_view text);
Json serialize_problem(const ProblemFile& problem);

// Accepts either a bare per-block array or an object with an "x" field.
// Entries are numbers or [re, im] pairs.
EvaluationPoint parse_point(const Json& doc, const std::string& path);
Json serialize_point(const EvaluationPoint& x);

// Deterministic point with coefficients of modulus in [1/2, 2].
EvaluationPoint seeded_point(const GkzSystem& sys, std::uint64_t seed);

struct RunOptions {
  std::optional<std::size_t> max_degree;
  std::optional<EvaluationPoint> at;
  std::optional<std::size_t> nodes;
  std::optional<double> tol;
  std::optional<int> max_order;
  std::optional<std::uint64_t> seed;
  // cokernel-demo
  std::optional<std::string> beta;
  std::optional<std::string> g;
  std::optional<std::string> c;  // comma-separated coefficients of d_s^0, d_s^1, ...
  std::optional<std::string> d;  // comma-separated coefficients of s^1, s^2, ...
};

const std::vector<std::string>& subcommands();

// problem may be null only for cokernel-demo.
Json run(const std::string& subcommand, const ProblemFile* problem, const RunOptions& options);

// 0 success, 2 validation, 3 numeric failure, 1 internal error.
int exit_code_for(const std::exception& e) noexcept;

}  // namespace gkz::cli
