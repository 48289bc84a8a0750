#include "gkz/cli.hpp"

#include "gkz/error.hpp"
#include "gkz/toric_curve.hpp"
#include "gkz/twist.hpp"
#include "gkz/volume.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace gkz::cli {

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ValidationError, path + ": " + what);
}

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

std::uint64_t read_unsigned(const Json& v, const std::string& path) {
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0)) {
    invalid(path, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

const Json& require_array(const Json& v, const std::string& path) {
  if (!v.is_array()) invalid(path, "expected an array");
  return v;
}

Complex read_complex(const Json& v, const std::string& path) {
  if (v.is_number()) return Complex(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return Complex(v[0].get<double>(), v[1].get<double>());
  }
  invalid(path, "expected a number or an [re, im] pair");
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json integer_json(const Integer& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max()) {
    return Json(static_cast<long long>(v));
  }
  return Json(to_string(v));
}

Json vector_json(const IntVector& v) {
  Json out = Json::array();
  for (const auto& e : v) out.push_back(integer_json(e));
  return out;
}

Json rationals_json(const RatVector& v) {
  Json out = Json::array();
  for (const auto& e : v) out.push_back(to_string(e));
  return out;
}

Json rays_json(const std::vector<Ray>& rays) {
  Json out = Json::array();
  for (Ray ray : rays) out.push_back(ray_label(ray));
  return out;
}

Json header(const std::string& command) {
  Json out = Json::object();
  out["schema_version"] = kSchemaVersion;
  out["command"] = command;
  return out;
}

void append(Json& target, const Json& body) {
  for (const auto& [key, value] : body.items()) target[key] = value;
}

const std::set<std::string> kProblemKeys{"r", "n", "weights", "beta", "x", "nodes",
                                         "tol", "max_order", "degree_bound", "seed"};

void check_point_shape(const EvaluationPoint& x, const GkzSystem& sys, const std::string& path) {
  if (x.x.size() != sys.r()) {
    invalid(path, "expected " + std::to_string(sys.r()) + " blocks, got " + std::to_string(x.x.size()));
  }
  for (std::size_t k = 0; k < sys.r(); ++k) {
    if (x.x[k].size() != sys.weight_blocks()[k].size()) {
      invalid(index_path(path, k), "expected " + std::to_string(sys.weight_blocks()[k].size()) +
                                       " coefficients, got " + std::to_string(x.x[k].size()));
    }
  }
}

std::vector<Rational> parse_list(const std::string& text, const std::string& flag) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(parse_rational(item));
    } catch (const Error& e) {
      invalid(flag, e.what());
    }
  }
  return out;
}

Rational parse_flag_rational(const std::string& text, const std::string& flag) {
  try {
    return parse_rational(text);
  } catch (const Error& e) {
    invalid(flag, e.what());
  }
}

// Sections ---------------------------------------------------------------

std::size_t degree_for(const ProblemFile& p, const GkzSystem& sys, const RunOptions& o) {
  if (o.max_degree) return *o.max_degree;
  if (p.degree_bound) return *p.degree_bound;
  return default_degree_bound(sys);
}

Json validate_section(const ProblemFile& p, const GkzSystem& sys, const RunOptions& o) {
  Json out = Json::object();
  out["valid"] = true;
  out["r"] = sys.r();
  out["n"] = sys.n();
  out["m"] = sys.m();
  Json matrix = Json::array();
  for (std::size_t i = 0; i < sys.matrix().rows(); ++i) matrix.push_back(vector_json(sys.matrix().row(i)));
  out["matrix"] = matrix;
  out["beta"] = rationals_json(sys.beta());
  out["hypothesis"] = check_semi_nonresonant(sys);
  const std::size_t degree = degree_for(p, sys, o);
  out["euler_count"] = euler_operators(sys).size();
  out["box_count"] = box_operators(sys, degree).size();
  out["degree_bound"] = degree;
  return out;
}

Json operators_section(const ProblemFile& p, const GkzSystem& sys, const RunOptions& o) {
  const std::size_t degree = degree_for(p, sys, o);
  Json out = Json::object();
  out["degree_bound"] = degree;
  Json euler = Json::array();
  for (const auto& op : euler_operators(sys)) {
    Json e = Json::object();
    e["row"] = op.row_index;
    e["coefficients"] = vector_json(op.coefficients);
    e["beta"] = to_string(op.beta_i);
    e["text"] = render(op);
    euler.push_back(e);
  }
  out["euler"] = euler;
  Json box = Json::array();
  for (const auto& op : box_operators(sys, degree)) {
    Json b = Json::object();
    b["plus"] = vector_json(op.nu_plus);
    b["minus"] = vector_json(op.nu_minus);
    b["text"] = render(op);
    box.push_back(b);
  }
  out["box"] = box;
  return out;
}

Json volume_section(const GkzSystem& sys) {
  Json out = Json::object();
  out["volume"] = integer_json(normalized_volume(PointConfiguration{sys.columns()}));
  return out;
}

Json toric_section(const GkzSystem& sys) {
  const ToricCurveReport rep = toric_curve_report(sys);
  Json out = Json::object();
  Json a = Json::object();
  for (Ray ray : kRays) a[ray_label(ray)] = vector_json(rep.divisor.at(ray));
  out["a"] = a;
  out["lengths"] = vector_json(rep.divisor.lengths);
  out["I"] = rays_json(rep.split.integral);
  out["J"] = rays_json(rep.split.nonintegral);
  Json profile = Json::array();
  for (const auto& pun : rep.profile.punctures) {
    Json e = Json::object();
    if (pun.kind == Puncture::Kind::BlockZero) {
      e["kind"] = "zero";
      e["block"] = pun.block + 1;
    } else {
      e["kind"] = "ray";
      e["ray"] = ray_label(pun.ray);
    }
    e["exponent"] = to_string(pun.exponent);
    e["multiplicity"] = pun.multiplicity;
    profile.push_back(e);
  }
  out["profile"] = profile;
  Json les = Json::object();
  les["h1_int"] = rep.les.h1_int;
  les["h1_U"] = rep.les.h1_U;
  les["h1_rel"] = rep.les.h1_rel;
  les["h0_int"] = rep.les.h0_int;
  les["h0_U"] = rep.les.h0_U;
  les["h0_rel"] = rep.les.h0_rel;
  out["les"] = les;
  out["rank"] = rep.rank;
  return out;
}

Json rank_section(const GkzSystem& sys) {
  const ToricCurveReport rep = toric_curve_report(sys);
  Json out = Json::object();
  out["rank"] = rep.rank;
  out["volume"] = integer_json(normalized_volume(PointConfiguration{sys.columns()}));
  out["I"] = rays_json(rep.split.integral);
  out["J"] = rays_json(rep.split.nonintegral);
  out["hypothesis"] = true;
  return out;
}

Json periods_section(const ProblemFile& p, const GkzSystem& sys, const RunOptions& o) {
  std::string source;
  EvaluationPoint x;
  if (o.at) {
    x = *o.at;
    source = "at";
    check_point_shape(x, sys, "--at");
  } else if (p.x) {
    x = *p.x;
    source = "problem";
  } else {
    x = seeded_point(sys, o.seed.value_or(p.seed.value_or(kDefaultSeed)));
    source = "seed";
  }
  const std::size_t nodes = o.nodes.value_or(p.nodes.value_or(kDefaultNodes));
  const double tol = o.tol.value_or(p.tol.value_or(kDefaultTol));
  const int max_order = o.max_order.value_or(p.max_order.value_or(kDefaultMaxOrder));
  if (nodes < 256 || (nodes & (nodes - 1)) != 0) invalid("nodes", "must be a power of two >= 256");
  if (!(tol > 0.0)) invalid("tol", "must be positive");
  if (max_order < 0) invalid("max_order", "must be non-negative");

  check_evaluation_point(sys, x);
  Json out = Json::object();
  out["x"] = serialize_point(x);
  out["x_source"] = source;
  out["nodes"] = nodes;
  out["tol"] = tol;
  out["max_order"] = max_order;
  Json zeros = Json::array();
  for (std::size_t k = 0; k < sys.r(); ++k) {
    Json block = Json::array();
    for (const Complex& z : find_zeros(sys, x, k)) block.push_back(complex_json(z));
    zeros.push_back(block);
  }
  out["zeros"] = zeros;
  Json circles = Json::array();
  for (const auto& cand : admissible_circles(sys, x, nodes)) {
    const PeriodValue v = twisted_period(sys, x, cand.cycle);
    Json c = Json::object();
    c["radius"] = cand.cycle.radius;
    c["enclosed_exponent"] = to_string(cand.enclosed_exponent);
    c["closed"] = cand.closed;
    c["value"] = complex_json(v.value);
    c["nodes_used"] = v.nodes_used;
    if (cand.closed) {
      Json res = Json::array();
      for (double r : euler_residual(sys, x, cand.cycle)) res.push_back(r);
      c["euler_residuals"] = res;
    }
    circles.push_back(c);
  }
  out["circles"] = circles;
  out["cycles"] = cycle_inventory(sys, x, nodes).size();
  out["rank"] = period_matrix_rank(sys, x, max_order, tol, nodes);
  if (check_semi_nonresonant(sys)) {
    out["expected_rank"] = solution_rank(sys);
  } else {
    out["expected_rank"] = nullptr;
  }
  return out;
}

QuotientElement element_json_input(const RunOptions& o) {
  return QuotientElement(o.c ? parse_list(*o.c, "--c") : RatVector{},
                         o.d ? parse_list(*o.d, "--d") : RatVector{});
}

Json element_json(const QuotientElement& u) {
  Json out = Json::object();
  out["c"] = rationals_json(u.c);
  out["d"] = rationals_json(u.d);
  return out;
}

Json cokernel_section(const ProblemFile* p, const RunOptions& o) {
  Rational beta = p ? p->beta.front() : Rational(-1, 2);
  if (o.beta) beta = parse_flag_rational(*o.beta, "--beta");
  const Rational g = o.g ? parse_flag_rational(*o.g, "--g") : Rational(2);
  const TwistContext ctx(beta, g);

  QuotientElement target;
  std::string source;
  if (o.c || o.d) {
    target = element_json_input(o);
    source = "flags";
  } else {
    // Image of d_s + s, so the default target always lies in the image.
    target = apply_twisted_derivation(ctx, QuotientElement(RatVector{0, 1}, RatVector{1}));
    source = "default";
  }
  Json out = Json::object();
  out["beta"] = to_string(beta);
  out["g"] = to_string(g);
  out["target_source"] = source;
  out["target"] = element_json(target);
  out["L"] = to_string(functional_L(ctx, target));
  const PreimageTrace trace = solve_preimage_traced(ctx, target);
  out["a"] = rationals_json(trace.a);
  out["b"] = rationals_json(trace.b);
  out["preimage"] = element_json(trace.u);
  out["verified"] = apply_twisted_derivation(ctx, trace.u) == target;
  return out;
}

const ProblemFile& need(const ProblemFile* p, const std::string& cmd) {
  if (!p) throw Error(ErrorCode::ValidationError, cmd + " needs a problem file");
  return *p;
}

}  // namespace

GkzSystem ProblemFile::system() const { return assemble_system(r, n, weights, beta); }

EvaluationPoint parse_point(const Json& doc, const std::string& path) {
  const Json* body = &doc;
  std::string base = path;
  if (doc.is_object()) {
    for (const auto& [key, value] : doc.items())
      if (key != "x") invalid(path + "." + key, "unknown field");
    if (!doc.contains("x")) invalid(path, "missing field x");
    body = &doc["x"];
    base = path + ".x";
  }
  require_array(*body, base);
  EvaluationPoint x;
  for (std::size_t k = 0; k < body->size(); ++k) {
    const std::string bpath = index_path(base, k);
    const Json& block = require_array((*body)[k], bpath);
    std::vector<Complex> coeffs;
    for (std::size_t j = 0; j < block.size(); ++j) {
      coeffs.push_back(read_complex(block[j], index_path(bpath, j)));
      if (!std::isfinite(coeffs.back().real()) || !std::isfinite(coeffs.back().imag())) {
        invalid(index_path(bpath, j), "coefficient is not finite");
      }
    }
    x.x.push_back(std::move(coeffs));
  }
  return x;
}

Json serialize_point(const EvaluationPoint& x) {
  Json out = Json::array();
  for (const auto& block : x.x) {
    Json b = Json::array();
    for (const Complex& z : block) b.push_back(complex_json(z));
    out.push_back(b);
  }
  return out;
}

EvaluationPoint seeded_point(const GkzSystem& sys, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  EvaluationPoint x;
  for (std::size_t k = 0; k < sys.r(); ++k) {
    std::vector<Complex> block;
    for (std::size_t j = 0; j < sys.weight_blocks()[k].size(); ++j) {
      const double modulus = 0.5 * std::pow(4.0, unit());
      const double angle = std::numbers::pi * (2.0 * unit() - 1.0);
      block.push_back(std::polar(modulus, angle));
    }
    x.x.push_back(std::move(block));
  }
  return x;
}

ProblemFile parse_problem(const Json& doc) {
  if (!doc.is_object()) invalid("$", "expected an object");
  for (const auto& [key, value] : doc.items())
    if (!kProblemKeys.count(key)) invalid("$." + key, "unknown field");
  for (const char* key : {"r", "n", "weights", "beta"})
    if (!doc.contains(key)) invalid(std::string("$.") + key, "missing required field");

  ProblemFile p;
  p.r = read_unsigned(doc["r"], "$.r");
  p.n = read_unsigned(doc["n"], "$.n");
  if (p.r == 0) invalid("$.r", "must be at least 1");
  if (p.n == 0) invalid("$.n", "must be at least 1");

  const Json& weights = require_array(doc["weights"], "$.weights");
  if (weights.size() != p.r) {
    invalid("$.weights", "expected " + std::to_string(p.r) + " blocks, got " + std::to_string(weights.size()));
  }
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const std::string bpath = index_path("$.weights", k);
    const Json& block = require_array(weights[k], bpath);
    if (block.empty()) invalid(bpath, "block is empty");
    WeightBlock wb;
    for (std::size_t j = 0; j < block.size(); ++j) {
      const std::string vpath = index_path(bpath, j);
      const Json& vec = require_array(block[j], vpath);
      if (vec.size() != p.n) {
        invalid(vpath, "expected a vector of length " + std::to_string(p.n) + ", got " +
                           std::to_string(vec.size()));
      }
      IntVector w;
      for (std::size_t i = 0; i < vec.size(); ++i) {
        if (!vec[i].is_number_integer()) invalid(index_path(vpath, i), "expected an integer");
        w.push_back(vec[i].is_number_unsigned() ? Integer(vec[i].get<std::uint64_t>())
                                                : Integer(vec[i].get<long long>()));
      }
      wb.push_back(std::move(w));
    }
    p.weights.push_back(std::move(wb));
  }

  const Json& beta = require_array(doc["beta"], "$.beta");
  if (beta.size() != p.r) {
    invalid("$.beta", "expected " + std::to_string(p.r) + " entries, got " + std::to_string(beta.size()));
  }
  for (std::size_t k = 0; k < beta.size(); ++k) {
    const std::string path = index_path("$.beta", k);
    if (!beta[k].is_string()) invalid(path, "expected a rational string such as \"-1/2\"");
    try {
      p.beta.push_back(parse_rational(beta[k].get<std::string>()));
    } catch (const Error& e) {
      invalid(path, e.what());
    }
  }

  if (doc.contains("nodes")) {
    const std::uint64_t nodes = read_unsigned(doc["nodes"], "$.nodes");
    if (nodes < 256 || (nodes & (nodes - 1)) != 0) invalid("$.nodes", "must be a power of two >= 256");
    p.nodes = nodes;
  }
  if (doc.contains("tol")) {
    if (!doc["tol"].is_number() || !(doc["tol"].get<double>() > 0.0)) invalid("$.tol", "expected a positive number");
    p.tol = doc["tol"].get<double>();
  }
  if (doc.contains("max_order")) {
    const std::uint64_t k = read_unsigned(doc["max_order"], "$.max_order");
    if (k > 16) invalid("$.max_order", "must be at most 16");
    p.max_order = static_cast<int>(k);
  }
  if (doc.contains("degree_bound")) {
    const std::uint64_t d = read_unsigned(doc["degree_bound"], "$.degree_bound");
    if (d == 0) invalid("$.degree_bound", "must be at least 1");
    p.degree_bound = d;
  }
  if (doc.contains("seed")) p.seed = read_unsigned(doc["seed"], "$.seed");

  GkzSystem sys = [&] {
    try {
      return p.system();
    } catch (const Error& e) {
      invalid(e.code() == ErrorCode::IntegralBeta ? "$.beta" : "$.weights", e.what());
    }
  }();
  if (doc.contains("x")) {
    p.x = parse_point(doc["x"], "$.x");
    check_point_shape(*p.x, sys, "$.x");
  }
  return p;
}

ProblemFile parse_problem_text(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return parse_problem(doc);
}

Json serialize_problem(const ProblemFile& p) {
  Json out = Json::object();
  out["r"] = p.r;
  out["n"] = p.n;
  Json weights = Json::array();
  for (const auto& block : p.weights) {
    Json b = Json::array();
    for (const auto& w : block) b.push_back(vector_json(w));
    weights.push_back(b);
  }
  out["weights"] = weights;
  out["beta"] = rationals_json(p.beta);
  if (p.x) out["x"] = serialize_point(*p.x);
  if (p.nodes) out["nodes"] = *p.nodes;
  if (p.tol) out["tol"] = *p.tol;
  if (p.max_order) out["max_order"] = *p.max_order;
  if (p.degree_bound) out["degree_bound"] = *p.degree_bound;
  if (p.seed) out["seed"] = *p.seed;
  return out;
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"validate", "operators", "volume",        "toric",
                                              "rank",     "periods",   "cokernel-demo", "report"};
  return names;
}

Json run(const std::string& subcommand, const ProblemFile* problem, const RunOptions& options) {
  Json out = header(subcommand);
  if (subcommand == "cokernel-demo") {
    append(out, cokernel_section(problem, options));
    return out;
  }
  const ProblemFile& p = need(problem, subcommand);
  const GkzSystem sys = p.system();
  if (subcommand == "validate") {
    append(out, validate_section(p, sys, options));
  } else if (subcommand == "operators") {
    append(out, operators_section(p, sys, options));
  } else if (subcommand == "volume") {
    append(out, volume_section(sys));
  } else if (subcommand == "toric") {
    append(out, toric_section(sys));
  } else if (subcommand == "rank") {
    append(out, rank_section(sys));
  } else if (subcommand == "periods") {
    append(out, periods_section(p, sys, options));
  } else if (subcommand == "report") {
    out["problem"] = serialize_problem(p);
    out["validate"] = validate_section(p, sys, options);
    out["operators"] = operators_section(p, sys, options);
    out["volume"] = volume_section(sys);
    const bool curve = sys.n() == 1 && check_semi_nonresonant(sys);
    if (curve) {
      out["toric"] = toric_section(sys);
      out["rank"] = rank_section(sys);
      if (p.x || options.at) out["periods"] = periods_section(p, sys, options);
    }
  } else {
    throw Error(ErrorCode::ValidationError, "unknown subcommand " + subcommand);
  }
  return out;
}

int exit_code_for(const std::exception& e) noexcept {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return is_numeric_failure(err->code()) ? 3 : 2;
  return 1;
}

}  // namespace gkz::cli
