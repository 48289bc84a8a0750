#include "gkz/error.hpp"
#include "gkz/system.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace gkz;
using namespace gkz::testing;

namespace {

ErrorCode failure_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::ValidationError;
}

}  // namespace

TEST_CASE("assembling example 1") {
  const GkzSystem sys = example1();
  CHECK(sys.matrix() == IntMatrix{{1, 1, 1}, {0, 1, -1}});
  CHECK(sys.beta() == RatVector{parse_rational("-1/2"), Rational(0)});
  CHECK(sys.r() == 1);
  CHECK(sys.n() == 1);
  CHECK(sys.m() == 3);
}

TEST_CASE("assembly failure modes") {
  CHECK(failure_of([] { example_system({0, 2}); }) == ErrorCode::LatticeNotSpanned);
  CHECK(failure_of([] { example_system({0, 1, -1}, "2"); }) == ErrorCode::IntegralBeta);
  CHECK(failure_of([] { example_system({3, 3}); }) == ErrorCode::NotFullRank);
  CHECK(failure_of([] {
          assemble_system(2, 1, {weights_1d({0, 1})}, {Rational(1, 2), Rational(1, 2)});
        }) == ErrorCode::ShapeError);
  CHECK(failure_of([] {
          assemble_system(1, 1, {WeightBlock{IntVector{0, 1}}}, {Rational(1, 2)});
        }) == ErrorCode::ShapeError);
  CHECK(failure_of([] { assemble_system(1, 1, {weights_1d({0, 1})}, {}); }) ==
        ErrorCode::ShapeError);
}

TEST_CASE("fuzzed assembly rejects exactly the documented failures") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> weight(-3, 3), count(1, 4), den(1, 3), num(-6, 6);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t r = 1 + trial % 2;
    std::vector<WeightBlock> blocks;
    for (std::size_t k = 0; k < r; ++k) {
      WeightBlock b;
      for (int j = count(rng); j > 0; --j) b.push_back(IntVector{weight(rng)});
      blocks.push_back(b);
    }
    RatVector beta;
    for (std::size_t k = 0; k < r; ++k) beta.push_back(Rational(num(rng), den(rng)));

    // Independent classification.
    ErrorCode expected = ErrorCode::ValidationError;
    bool ok = true;
    for (const auto& b : beta)
      if (ok && is_integral(b)) expected = ErrorCode::IntegralBeta, ok = false;
    std::vector<IntVector> cols;
    for (std::size_t k = 0; k < r; ++k)
      for (const auto& w : blocks[k]) {
        IntVector c(r + 1, Integer(0));
        c[k] = 1;
        c[r] = w[0];
        cols.push_back(c);
      }
    const IntMatrix a = IntMatrix::from_columns(cols);
    if (ok && rational_rank(a) != r + 1) expected = ErrorCode::NotFullRank, ok = false;
    if (ok) {
      Integer idx = 1;
      for (const auto& d : smith_normal_form(a).diagonal()) idx *= d;
      if (idx != 1) expected = ErrorCode::LatticeNotSpanned, ok = false;
    }

    try {
      const GkzSystem sys = assemble_system(r, 1, blocks, beta);
      CHECK(ok);
      CHECK(sys.matrix() == a);
    } catch (const Error& e) {
      CHECK_FALSE(ok);
      CHECK(e.code() == expected);
    }
  }
}

TEST_CASE("hypothesis check") {
  CHECK(check_semi_nonresonant(example1()));
  CHECK(check_semi_nonresonant(example2()));
  CHECK(check_semi_nonresonant(example3()));
  CHECK_FALSE(check_semi_nonresonant(example_system({1, 2})));
  CHECK_FALSE(check_semi_nonresonant(example_system({0, 1, -1}, "1/2")));
}

TEST_CASE("euler operators") {
  const auto ops = euler_operators(example1());
  REQUIRE(ops.size() == 2);
  CHECK(ops[0].coefficients == IntVector{1, 1, 1});
  CHECK(ops[0].beta_i == Rational(-1, 2));
  CHECK(ops[1].coefficients == IntVector{0, 1, -1});
  CHECK(ops[1].beta_i == 0);
  CHECK(render(ops[0]) == "1*x1*D1 + 1*x2*D2 + 1*x3*D3 - (-1/2)");
  CHECK(render(ops[1]) == "1*x2*D2 + -1*x3*D3 - (0)");

  const auto ops2 = euler_operators(example2());
  REQUIRE(ops2.size() == 2);
  CHECK(ops2[0].coefficients == IntVector{1, 1, 1, 1});
  CHECK(ops2[1].coefficients == IntVector{0, 1, 2, -1});
  CHECK(ops2[1].beta_i == 0);
}

TEST_CASE("euler operators follow column permutations within a block") {
  const auto a = euler_operators(example_system({0, 1, -1}));
  const auto b = euler_operators(example_system({-1, 0, 1}));
  const std::vector<std::size_t> perm{2, 0, 1};  // b column j is a column perm[j]
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].beta_i == b[i].beta_i);
    for (std::size_t j = 0; j < 3; ++j) CHECK(b[i].coefficients[j] == a[i].coefficients[perm[j]]);
  }
}

TEST_CASE("box operators of example 1") {
  const auto ops = box_operators(example1(), 2);
  REQUIRE(ops.size() == 1);
  CHECK(ops[0].nu_plus == IntVector{2, 0, 0});
  CHECK(ops[0].nu_minus == IntVector{0, 1, 1});
  CHECK(render(ops[0]) == "D1^2 - D2*D3");
  CHECK(box_operators(example1(), 0).empty());
  CHECK(box_operators(example1(), 4).size() == 2);
}

TEST_CASE("box operators of example 2") {
  const auto ops = box_operators(example2(), 2);
  const BoxOperator expected{{1, 0, 1, 0}, {0, 2, 0, 0}};
  CHECK(std::find(ops.begin(), ops.end(), expected) != ops.end());
  CHECK(std::is_sorted(ops.begin(), ops.end()));
}

TEST_CASE("box operator invariants") {
  for (const GkzSystem& sys : {example1(), example2(), example3()}) {
    const auto ops = box_operators(sys, default_degree_bound(sys));
    CHECK_FALSE(ops.empty());
    for (const auto& op : ops) {
      CHECK(sys.matrix() * op.nu_plus == sys.matrix() * op.nu_minus);
      for (std::size_t j = 0; j < sys.m(); ++j) CHECK((op.nu_plus[j] == 0 || op.nu_minus[j] == 0));
      CHECK(op.nu_plus > op.nu_minus);
      for (std::size_t k = 0; k < sys.r(); ++k) {
        Integer plus = 0, minus = 0;
        for (std::size_t j = 0; j < sys.m(); ++j)
          if (sys.block_of(j) == k) plus += op.nu_plus[j], minus += op.nu_minus[j];
        CHECK(plus == minus);
      }
    }
  }
  CHECK(default_degree_bound(example3()) == 6);
}

TEST_CASE("system report") {
  const auto rep1 = system_report(example1());
  CHECK(rep1.valid);
  CHECK(rep1.hypothesis);
  CHECK(rep1.volume == 2);
  CHECK(rep1.euler_count == 2);
  CHECK(system_report(example2()).volume == 3);
  CHECK(system_report(example3()).volume == 4);
}
