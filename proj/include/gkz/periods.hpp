#pragma once

// Numerical twisted periods  (1 / 2 pi i) \oint prod_k b_k(t)^{beta_k} dt / t
// for base dimension one, with the branch of every log b_k continued node to
// node. Double precision throughout; every sum runs in a fixed sequential
// order, so results do not depend on how callers schedule independent jobs.

#include "gkz/arith.hpp"
#include "gkz/system.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gkz {

using Complex = std::complex<double>;

/// Coefficients x_{k,j} of the sections b_k(t) = sum_j x_{k,j} t^{w_{k,j}}.
struct EvaluationPoint {
  std::vector<std::vector<Complex>> x;  // per block, per column of the block
};

// Direct: coordinate t. Inverted: u = 1/t, used for cycles through t = infinity.
enum class Chart { Direct, Inverted };

// Circle: closed loop, trapezoid rule. OriginLoop: the circle through the
// chart origin with the given center, traversed from the origin back to it
// (a relative cycle with boundary on the corresponding toric divisor).
// Segment: the regularized path from puncture `center` to puncture `end`,
// i.e. small circles of radius `radius` and `end_radius` around the ends,
// divided by (monodromy - 1), joined by the straight path between them.
enum class CycleShape { Circle, OriginLoop, Segment };

struct CycleSpec {
  double radius = 1.0;
  int orientation = 1;
  std::size_t nodes = 4096;  // power of two, >= 256; per piece for segments
  Complex center{0.0, 0.0};
  CycleShape shape = CycleShape::Circle;
  Chart chart = Chart::Direct;
  Complex end{0.0, 0.0};     // segments only
  double end_radius = 0.0;   // segments only
};

CycleSpec origin_loop(Complex center, Chart chart, std::size_t nodes = 4096);

// Endpoints must be punctures (zeros or the chart origin) with non-integral
// exponent; the end circles must not meet each other or any other puncture.
// Each end resolves to the puncture within half its radius, so a segment
// built at one point x stays valid under small changes of x.
CycleSpec regularized_segment(Complex from, Complex to, double from_radius, double to_radius,
                              Chart chart = Chart::Direct, std::size_t nodes = 4096);

struct PeriodValue {
  Complex value;
  // Circles: sum of the local exponents of prod b_k^{beta_k} at the enclosed
  // punctures. Origin loops: the exponent at the chart origin. Segments: 0.
  Rational enclosed_exponent;
  bool closed = false;
  std::size_t nodes_used = 0;
};

struct CircleCandidate {
  CycleSpec cycle;
  Rational enclosed_exponent;
  bool closed = false;
};

// Roots of sum_i coeffs[i] z^i by Aberth iteration, sorted by modulus then
// argument. Throws DegenerateCoefficients or RootFindingDiverged.
std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs);

// Zeros in the torus of b_k, i.e. the roots of t^{-min w} b_k(t).
std::vector<Complex> find_zeros(const GkzSystem& sys, const EvaluationPoint& x, std::size_t k);

// Throws ShapeError/UnsupportedDimension, DegenerateCoefficients, or
// NonGenericPoint when two zeros (or a zero and the origin) nearly coincide.
void check_evaluation_point(const GkzSystem& sys, const EvaluationPoint& x);

// Origin-centered circles: one inside the smallest zero modulus, one per gap
// between consecutive zero moduli (geometric mean), one outside the largest.
std::vector<CircleCandidate> admissible_circles(const GkzSystem& sys, const EvaluationPoint& x,
                                                std::size_t nodes = 4096);

// Throws BranchJump once refinement reaches 2^16 nodes.
PeriodValue twisted_period(const GkzSystem& sys, const EvaluationPoint& x, const CycleSpec& cycle);

// d^alpha / dx^alpha of the period, alpha indexed by the columns of A.
Complex derivative_period(const GkzSystem& sys, const EvaluationPoint& x, const CycleSpec& cycle,
                          const std::vector<int>& alpha);

// |sum_j a_{ij} x_j d_j Phi - beta_i Phi| for each row i of A.
// Throws CycleNotClosed.
std::vector<double> euler_residual(const GkzSystem& sys, const EvaluationPoint& x,
                                   const CycleSpec& cycle);

// Closed circles around the origin, regularized segments between nearby
// punctures with non-integral exponent, and origin loops for every ray whose
// exponent is integral.
std::vector<CycleSpec> cycle_inventory(const GkzSystem& sys, const EvaluationPoint& x,
                                       std::size_t nodes = 4096);

// All multi-indices over m columns with |alpha| <= max_order, by degree then
// lexicographically descending.
std::vector<std::vector<int>> multi_indices(std::size_t m, int max_order);

// Numerical rank of M[cycle][alpha] = derivative_period(alpha) after row and
// column equilibration, by complete-pivoting elimination with relative
// threshold tol. Throws InsufficientCycles (no cycles) or CycleNotClosed.
std::size_t period_matrix_rank(const GkzSystem& sys, const EvaluationPoint& x,
                               const std::vector<CycleSpec>& cycles, int max_order, double tol);

// Uses cycle_inventory; throws InsufficientCycles when it yields fewer cycles
// than the predicted solution rank.
std::size_t period_matrix_rank(const GkzSystem& sys, const EvaluationPoint& x, int max_order,
                               double tol, std::size_t nodes = 4096);

}  // namespace gkz
