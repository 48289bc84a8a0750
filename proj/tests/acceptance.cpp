// Acceptance gate: one PASS/FAIL line per criterion, with wall-clock limits.

#include "gkz/cli.hpp"
#include "gkz/error.hpp"
#include "gkz/linalg.hpp"
#include "gkz/periods.hpp"
#include "gkz/system.hpp"
#include "gkz/toric_curve.hpp"
#include "gkz/twist.hpp"
#include "gkz/volume.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace gkz;

namespace {

// Collects the first failed expectation of a criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++count_;
    if (!ok && failure_.empty()) failure_ = what;
  }
  bool ok() const { return failure_.empty(); }
  const std::string& failure() const { return failure_; }
  std::size_t count() const { return count_; }

 private:
  std::string failure_;
  std::size_t count_ = 0;
};

bool criterion(int id, const char* title, double limit_seconds, const std::function<void(Check&)>& body) {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.expect(false, std::string("unexpected exception: ") + e.what());
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream limit;
  limit << "runtime " << seconds << " s exceeds " << limit_seconds << " s";
  check.expect(seconds < limit_seconds, limit.str());
  std::printf("%s criterion %d: %s (%zu checks, %.3f s)%s%s\n", check.ok() ? "PASS" : "FAIL", id, title,
              check.count(), seconds, check.ok() ? "" : " -- ", check.failure().c_str());
  std::fflush(stdout);
  return check.ok();
}

WeightBlock block_1d(std::initializer_list<long long> w) {
  WeightBlock b;
  for (long long v : w) b.push_back(IntVector{Integer(v)});
  return b;
}

GkzSystem curve(std::initializer_list<long long> w) {
  return assemble_system(1, 1, {block_1d(w)}, {Rational(-1, 2)});
}

Integer volume_of(const GkzSystem& sys) { return normalized_volume(PointConfiguration{sys.columns()}); }

bool same_rays(const std::vector<Ray>& a, std::initializer_list<Ray> b) {
  return a == std::vector<Ray>(b);
}

void worked_example(Check& c, std::initializer_list<long long> w, long long a0, long long ainf,
                    std::initializer_list<Ray> integral, const LesTable& les, std::size_t rank) {
  const GkzSystem sys = curve(w);
  c.expect(check_semi_nonresonant(sys), "hypothesis");
  const ToricCurveReport rep = toric_curve_report(sys);
  c.expect(rep.divisor.at(Ray::Zero) == IntVector{a0}, "a_rho0");
  c.expect(rep.divisor.at(Ray::Infinity) == IntVector{ainf}, "a_rhoinf");
  c.expect(same_rays(rep.split.integral, integral), "integral ray set");
  c.expect(rep.les == les, "LES table");
  c.expect(rep.rank == rank, "solution rank");
  c.expect(solution_rank(sys) == rank, "solution_rank");
  c.expect(volume_of(sys) == Integer(rank), "normalized volume");
}

Rational pick(std::mt19937_64& rng, const std::vector<Rational>& options) {
  return options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
}

}  // namespace

int main() {
  bool all = true;

  all &= criterion(1, "example 1 end to end", 1.0, [](Check& c) {
    const auto problem = cli::parse_problem_text(
        R"({"r":1,"n":1,"weights":[[[0],[1],[-1]]],"beta":["-1/2"]})");
    const auto report = cli::run("validate", &problem, {});
    c.expect(report["valid"] == true, "validate");
    c.expect(report["hypothesis"] == true, "hypothesis reported");
    worked_example(c, {0, 1, -1}, 1, 1, {}, LesTable{0, 2, 2, 0, 0, 0}, 2);
    const auto box = box_operators(curve({0, 1, -1}), 2);
    c.expect(box == std::vector<BoxOperator>{BoxOperator{IntVector{2, 0, 0}, IntVector{0, 1, 1}}},
             "box operators at degree 2");
  });

  all &= criterion(2, "example 2 divisors, I, LES table, rank = volume", 1.0, [](Check& c) {
    worked_example(c, {0, 1, 2, -1}, 1, 2, {Ray::Infinity}, LesTable{0, 2, 3, 1, 0, 0}, 3);
  });

  all &= criterion(3, "example 3 divisors, I, LES table, rank = volume", 1.0, [](Check& c) {
    worked_example(c, {0, 1, 2, -1, -2}, 2, 2, {Ray::Zero, Ray::Infinity}, LesTable{0, 2, 4, 2, 0, 0}, 4);
  });

  all &= criterion(4, "rank = volume on 200 random curve systems", 10.0, [](Check& c) {
    std::mt19937_64 rng(4);
    const std::vector<Rational> betas{Rational(1, 2),  Rational(-1, 2), Rational(1, 3), Rational(-1, 3),
                                      Rational(2, 3),  Rational(-2, 3), Rational(1, 4), Rational(-1, 4)};
    std::uniform_int_distribution<int> weight(-4, 4), blocks(1, 2), len(2, 4);
    std::size_t accepted = 0, attempts = 0;
    while (accepted < 200 && attempts < 200000) {
      ++attempts;
      const std::size_t r = static_cast<std::size_t>(blocks(rng));
      std::vector<WeightBlock> ws(r);
      RatVector beta;
      for (std::size_t k = 0; k < r; ++k) {
        const int count = len(rng);
        for (int j = 0; j < count; ++j) ws[k].push_back(IntVector{Integer(weight(rng))});
        beta.push_back(pick(rng, betas));
      }
      // A block with a single distinct weight is a monomial section with no
      // zeros; it lies outside the curve model, so it is resampled.
      bool constant = false;
      for (const auto& b : ws)
        if (std::all_of(b.begin(), b.end(), [&](const IntVector& w) { return w == b.front(); })) constant = true;
      if (constant) continue;
      std::optional<GkzSystem> sys;
      try {
        sys = assemble_system(r, 1, ws, beta);
      } catch (const Error&) {
        continue;
      }
      if (!check_semi_nonresonant(*sys)) continue;
      try {
        const std::size_t rank = solution_rank(*sys);
        c.expect(Integer(rank) == volume_of(*sys), "rank differs from volume");
      } catch (const Error& e) {
        c.expect(false, e.what());
      }
      ++accepted;
    }
    c.expect(accepted == 200, "rejection sampling did not reach 200 systems");
  });

  all &= criterion(5, "twisted derivation calculus on fuzzed inputs", 5.0, [](Check& c) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> len(0, 6), num(-20, 20), den(1, 9), bnum(-15, 15), bden(2, 7);
    auto rational = [&] { return Rational(num(rng), den(rng)); };
    auto nonintegral = [&] {
      while (true) {
        Rational q(bnum(rng), bden(rng));
        if (!is_integral(q)) return q;
      }
    };
    auto nonzero = [&] {
      while (true) {
        Rational q = rational();
        if (q != 0) return q;
      }
    };
    for (int i = 0; i < 1000; ++i) {
      const TwistContext ctx(nonintegral(), nonzero());
      RatVector cs(len(rng)), ds(len(rng));
      for (auto& v : cs) v = rational();
      for (auto& v : ds) v = rational();
      const QuotientElement u(cs, ds);
      const QuotientElement image = apply_twisted_derivation(ctx, u);
      c.expect(functional_L(ctx, image) == 0, "L(D u) != 0");
      c.expect(solve_preimage(ctx, image) == u, "preimage round trip");
    }
    for (int i = 0; i < 100; ++i) {
      RatVector dg(3);
      for (auto& v : dg) v = rational();
      const Rational beta = nonintegral();
      const Rational g = nonzero();
      const TwistContext ctx(beta, g, dg);
      for (std::size_t k = 0; k < dg.size(); ++k)
        c.expect(connection_residue(ctx, k) == -beta * dg[k] / g, "connection residue");
    }
  });

  all &= criterion(6, "numerical periods", 30.0, [](Check& c) {
    const GkzSystem ex1 = curve({0, 1, -1});
    const EvaluationPoint x{{{3.0, 1.0, 1.0}}};
    CycleSpec unit;
    unit.radius = 1.0;
    unit.nodes = 4096;
    for (double r : euler_residual(ex1, x, unit)) c.expect(r < 1e-8, "Euler residual");

    CycleSpec inner = unit, outer = unit;
    inner.radius = 0.9;
    outer.radius = 1.1;
    c.expect(std::abs(twisted_period(ex1, x, inner).value - twisted_period(ex1, x, outer).value) < 1e-10,
             "Cauchy deformation");

    const double h = 1e-4;
    for (std::size_t j = 0; j < ex1.m(); ++j) {
      std::vector<int> alpha(ex1.m(), 0);
      alpha[j] = 1;
      const Complex exact = derivative_period(ex1, x, unit, alpha);
      EvaluationPoint plus = x, minus = x;
      plus.x[0][j] += h;
      minus.x[0][j] -= h;
      const Complex fd =
          (twisted_period(ex1, plus, unit).value - twisted_period(ex1, minus, unit).value) / (2.0 * h);
      c.expect(std::abs(exact - fd) < 1e-6 * std::abs(exact), "finite-difference gradient");
    }
    c.expect(period_matrix_rank(ex1, x, 2, 1e-6) == 2, "example 1 period rank");

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const GkzSystem ex2 = curve({0, 1, 2, -1});
      const GkzSystem ex3 = curve({0, 1, 2, -1, -2});
      c.expect(period_matrix_rank(ex2, cli::seeded_point(ex2, seed), 2, 1e-6) == 3, "example 2 period rank");
      c.expect(period_matrix_rank(ex3, cli::seeded_point(ex3, seed), 2, 1e-6) == 4, "example 3 period rank");
    }
  });

  all &= criterion(7, "exact linear algebra properties", 5.0, [](Check& c) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dim(1, 5), entry(-9, 9);
    for (int trial = 0; trial < 500; ++trial) {
      IntMatrix a(dim(rng), dim(rng));
      for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = entry(rng);
      const auto snf = smith_normal_form(a);
      c.expect(abs(determinant(snf.U)) == 1, "U unimodular");
      c.expect(abs(determinant(snf.V)) == 1, "V unimodular");
      c.expect(snf.U * a * snf.V == snf.S, "U A V = S");
      bool diagonal = true;
      for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
          if (i != j && snf.S(i, j) != 0) diagonal = false;
      c.expect(diagonal, "S diagonal");
      const IntVector d = snf.diagonal();
      for (std::size_t i = 0; i < d.size(); ++i) {
        c.expect(d[i] >= 0, "nonnegative diagonal");
        if (i + 1 < d.size()) {
          c.expect(d[i] == 0 ? d[i + 1] == 0 : d[i + 1] % d[i] == 0, "divisibility chain");
        }
      }
      const auto kernel = integer_kernel_basis(a);
      c.expect(kernel.size() == a.cols() - rational_rank(a), "kernel dimension");
      for (const auto& v : kernel) {
        const IntVector image = a * v;
        bool zero = true;
        for (const auto& e : image)
          if (e != 0) zero = false;
        c.expect(zero, "kernel vector");
      }
    }

    using V = std::vector<IntVector>;
    const V orthant{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    c.expect(cone_interior_contains(orthant, to_rationals(IntVector{1, 2, 3})), "orthant interior");
    c.expect(!cone_interior_contains(orthant, to_rationals(IntVector{1, 2, 0})), "orthant facet");
    c.expect(!cone_interior_contains(orthant, to_rationals(IntVector{0, 0, 1})), "orthant ray");
    c.expect(!cone_interior_contains(orthant, to_rationals(IntVector{0, 0, 0})), "orthant apex");
    c.expect(!cone_interior_contains(orthant, to_rationals(IntVector{-1, 2, 3})), "orthant exterior");
    const V ex1{{1, 0}, {1, 1}, {1, -1}};
    c.expect(cone_interior_contains(ex1, {Rational(1, 2), Rational(0)}), "example 1 interior");
    c.expect(!cone_interior_contains(ex1, {Rational(1), Rational(1)}), "example 1 boundary");
    c.expect(!cone_interior_contains(ex1, {Rational(1), Rational(2)}), "example 1 exterior");
    const V pyramid{{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}};
    c.expect(cone_facet_normals(pyramid).size() == 4, "pyramid facets");
    c.expect(cone_interior_contains(pyramid, to_rationals(IntVector{0, 0, 1})), "pyramid axis");
    c.expect(!cone_interior_contains(pyramid, to_rationals(IntVector{1, 1, 2})), "pyramid edge midpoint");
    c.expect(!cone_interior_contains(pyramid, to_rationals(IntVector{2, 0, 1})), "pyramid exterior");
  });

  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
