#pragma once

// Topological side of the rank formula for base dimension one: X is the
// projective line with rays rho_0 = +1 and rho_inf = -1.

#include "gkz/arith.hpp"
#include "gkz/system.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace gkz {

enum class Ray { Zero = 0, Infinity = 1 };

inline constexpr std::array<Ray, 2> kRays{Ray::Zero, Ray::Infinity};

const char* ray_label(Ray ray) noexcept;  // "rho_0" / "rho_inf"
int ray_direction(Ray ray) noexcept;       // +1 / -1

struct DivisorData {
  // a[ray][k]: multiplicity of D_ray in L_k^{-1}.
  std::array<IntVector, 2> a;
  IntVector lengths;  // lattice length of each block's segment

  const IntVector& at(Ray ray) const { return a[static_cast<std::size_t>(ray)]; }
};

struct RaySplit {
  std::vector<Ray> integral;     // I
  std::vector<Ray> nonintegral;  // J
};

struct Puncture {
  enum class Kind { BlockZero, Ray };
  Kind kind = Kind::BlockZero;
  std::size_t block = 0;  // BlockZero only
  Ray ray = Ray::Zero;    // Ray only
  Rational exponent;
  std::size_t multiplicity = 1;
};

struct ExponentProfile {
  std::vector<Puncture> punctures;  // all zeros, then both rays
  RaySplit split;

  // Zeros plus the rays in J: the punctures of U_b on the sphere.
  std::vector<Puncture> u_b_punctures() const;
  Rational exponent_sum() const;
};

struct LesTable {
  std::size_t h1_int = 0, h1_U = 0, h1_rel = 0;
  std::size_t h0_int = 0, h0_U = 0, h0_rel = 0;

  long long alternating_sum() const;
  friend bool operator==(const LesTable&, const LesTable&) = default;
};

struct ToricCurveReport {
  DivisorData divisor;
  RaySplit split;
  ExponentProfile profile;
  LesTable les;
  std::size_t rank = 0;
};

// Throws UnsupportedDimension (n != 1) or ConstantBlock.
DivisorData divisor_coefficients(const GkzSystem& sys);

RaySplit split_integral_rays(const DivisorData& div, const RatVector& beta_head);

// Ray exponents carry the residue-consistent sign -sum_k a_{rho,k} beta_k, so
// the exponents over all punctures sum to zero. Integrality does not depend
// on the sign.
ExponentProfile monodromy_profile(const GkzSystem& sys, const DivisorData& div,
                                  const RaySplit& split);

// Dimensions of the relative-homology long exact sequence for generic b.
// Throws TooFewPunctures or TrivialLocalSystem.
LesTable les_dimensions(const ExponentProfile& profile);

// Throws HypothesisFailed when -beta is not interior to the cone of A.
std::size_t solution_rank(const GkzSystem& sys);

// (rho, a_{rho,1}, ..., a_{rho,r}) for rho_0 then rho_inf.
std::vector<IntVector> lifted_rays(const GkzSystem& sys, const DivisorData& div);

ToricCurveReport toric_curve_report(const GkzSystem& sys);

}  // namespace gkz
