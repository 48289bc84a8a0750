#include "gkz/error.hpp"
#include "gkz/toric_curve.hpp"
#include "gkz/volume.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <random>

using namespace gkz;
using namespace gkz::testing;

TEST_CASE("divisor coefficients of the examples") {
  auto d1 = divisor_coefficients(example1());
  CHECK(d1.at(Ray::Zero) == IntVector{1});
  CHECK(d1.at(Ray::Infinity) == IntVector{1});
  auto d2 = divisor_coefficients(example2());
  CHECK(d2.at(Ray::Zero) == IntVector{1});
  CHECK(d2.at(Ray::Infinity) == IntVector{2});
  auto d3 = divisor_coefficients(example3());
  CHECK(d3.at(Ray::Zero) == IntVector{2});
  CHECK(d3.at(Ray::Infinity) == IntVector{2});
  CHECK(d3.lengths == IntVector{4});
}

TEST_CASE("divisor coefficient errors") {
  const GkzSystem two_dim = assemble_system(
      1, 2, {WeightBlock{IntVector{0, 0}, IntVector{1, 0}, IntVector{0, 1}}}, {Rational(-1, 2)});
  CHECK_THROWS_AS(divisor_coefficients(two_dim), Error);
  try {
    divisor_coefficients(two_dim);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedDimension);
  }
  // Second block constant: columns (1,0,0),(1,0,1),(0,1,0) still span Z^3.
  const GkzSystem constant = assemble_system(2, 1, {weights_1d({0, 1}), weights_1d({0})},
                                             {Rational(-1, 2), Rational(-1, 3)});
  try {
    divisor_coefficients(constant);
    FAIL("expected ConstantBlock");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConstantBlock);
  }
}

TEST_CASE("integral ray sets") {
  const auto ex = [](const GkzSystem& sys) {
    return split_integral_rays(divisor_coefficients(sys), sys.beta_head());
  };
  CHECK(ex(example1()).integral.empty());
  CHECK(ex(example2()).integral == std::vector<Ray>{Ray::Infinity});
  CHECK(ex(example2()).nonintegral == std::vector<Ray>{Ray::Zero});
  CHECK(ex(example3()).integral == std::vector<Ray>{Ray::Zero, Ray::Infinity});
}

TEST_CASE("monodromy profiles") {
  const GkzSystem sys = example2();
  const auto div = divisor_coefficients(sys);
  const auto profile = monodromy_profile(sys, div, split_integral_rays(div, sys.beta_head()));
  REQUIRE(profile.punctures.size() == 3);
  CHECK(profile.punctures[0].exponent == Rational(-1, 2));
  CHECK(profile.punctures[0].multiplicity == 3);
  CHECK(profile.punctures[1].ray == Ray::Zero);
  CHECK(profile.punctures[1].exponent == Rational(1, 2));
  CHECK(profile.punctures[2].ray == Ray::Infinity);
  CHECK(profile.punctures[2].exponent == 1);
  CHECK(profile.exponent_sum() == 0);
  CHECK(profile.u_b_punctures().size() == 2);

  const GkzSystem s1 = example1();
  const auto d1 = divisor_coefficients(s1);
  const auto p1 = monodromy_profile(s1, d1, split_integral_rays(d1, s1.beta_head()));
  CHECK(p1.punctures[0].multiplicity == 2);
  CHECK(p1.punctures[1].exponent == Rational(1, 2));
  CHECK(p1.punctures[2].exponent == Rational(1, 2));
  CHECK(p1.exponent_sum() == 0);
}

TEST_CASE("LES tables of the examples") {
  CHECK(toric_curve_report(example3()).les == LesTable{0, 2, 4, 2, 0, 0});
  CHECK(toric_curve_report(example2()).les == LesTable{0, 2, 3, 1, 0, 0});
  CHECK(toric_curve_report(example1()).les == LesTable{0, 2, 2, 0, 0, 0});
  for (const GkzSystem& sys : {example1(), example2(), example3()})
    CHECK(toric_curve_report(sys).les.alternating_sum() == 0);
}

TEST_CASE("LES degenerate inputs") {
  ExponentProfile tiny;
  Puncture z;
  z.exponent = Rational(1, 2);
  z.multiplicity = 1;
  tiny.punctures.push_back(z);
  try {
    les_dimensions(tiny);
    FAIL("expected TooFewPunctures");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewPunctures);
  }
  ExponentProfile trivial;
  z.exponent = 1;
  z.multiplicity = 3;
  trivial.punctures.push_back(z);
  try {
    les_dimensions(trivial);
    FAIL("expected TrivialLocalSystem");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TrivialLocalSystem);
  }
}

TEST_CASE("solution ranks of the examples") {
  CHECK(solution_rank(example1()) == 2);
  CHECK(solution_rank(example2()) == 3);
  CHECK(solution_rank(example3()) == 4);
  try {
    solution_rank(example_system({1, 2}));
    FAIL("expected HypothesisFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HypothesisFailed);
  }
}

TEST_CASE("lifted rays") {
  auto lift = [](const GkzSystem& sys) { return lifted_rays(sys, divisor_coefficients(sys)); };
  CHECK(lift(example2()) == std::vector<IntVector>{{1, 1}, {-1, 2}});
  CHECK(lift(example1()) == std::vector<IntVector>{{1, 1}, {-1, 1}});
  CHECK(lift(example3()) == std::vector<IntVector>{{1, 2}, {-1, 2}});
}

TEST_CASE("rank invariances under translation and reflection") {
  const std::vector<std::vector<long long>> data{{0, 1, -1}, {0, 1, 2, -1}, {0, 1, 2, -1, -2},
                                                 {-3, 1, 0}, {2, -1, 0, 1}};
  for (const auto& ws : data) {
    WeightBlock block, negated;
    for (long long w : ws) {
      block.push_back(IntVector{w});
      negated.push_back(IntVector{-w});
    }
    const GkzSystem base = assemble_system(1, 1, {block}, {Rational(-1, 3)});
    if (!check_semi_nonresonant(base)) continue;
    const std::size_t rank = solution_rank(base);
    CHECK(solution_rank(assemble_system(1, 1, {negated}, {Rational(-1, 3)})) == rank);
    // Translating w changes -beta's position: rank is checked whenever the
    // hypothesis still holds.
    for (long long shift : {-1, 1}) {
      WeightBlock moved;
      for (long long w : ws) moved.push_back(IntVector{w + shift});
      const GkzSystem translated = assemble_system(1, 1, {moved}, {Rational(-1, 3)});
      if (check_semi_nonresonant(translated)) CHECK(solution_rank(translated) == rank);
    }
  }
}

TEST_CASE("degree identity and rank = volume on a two-block system") {
  const GkzSystem sys = assemble_system(2, 1, {weights_1d({0, 1, -1}), weights_1d({1, -2})},
                                        {Rational(-1, 2), Rational(-1, 3)});
  const auto div = divisor_coefficients(sys);
  for (std::size_t k = 0; k < sys.r(); ++k)
    CHECK(div.at(Ray::Zero)[k] + div.at(Ray::Infinity)[k] == div.lengths[k]);
  REQUIRE(check_semi_nonresonant(sys));
  CHECK(solution_rank(sys) == normalized_volume({sys.columns()}));
  CHECK(solution_rank(sys) == 5);
}
