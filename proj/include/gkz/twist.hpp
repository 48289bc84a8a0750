#pragma once

// Exact calculus on the quotient module O[s, d_s] / (s d_s - beta + 1) with
// the twisted derivation D_f(u) = d_s u + g u, at a sample point where all
// coefficients are rational numbers.

#include "gkz/arith.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace gkz {

/// The class sum_i c_i d_s^i + sum_j d_j s^j; d[0] is the coefficient of s^1.
struct QuotientElement {
  RatVector c;
  RatVector d;

  QuotientElement() = default;
  QuotientElement(RatVector c_, RatVector d_);

  void trim();
  bool is_zero() const { return c.empty() && d.empty(); }
  friend bool operator==(const QuotientElement&, const QuotientElement&) = default;
};

QuotientElement operator+(const QuotientElement& a, const QuotientElement& b);
QuotientElement operator*(const Rational& k, const QuotientElement& a);

struct TwistContext {
  Rational beta;
  Rational g;
  std::optional<RatVector> dg;  // partial derivatives of g at the point

  // Throws IntegralBeta.
  TwistContext(Rational beta_, Rational g_, std::optional<RatVector> dg_ = std::nullopt);
};

// d_s * d_s^i = d_s^{i+1}, d_s * s^j = (beta - 1 + j) s^{j-1}, plus g u.
QuotientElement apply_twisted_derivation(const TwistContext& ctx, const QuotientElement& u);

// The cokernel functional divided by Gamma(1 + beta):
//   beta sum_k [Gamma(k+beta)/Gamma(1+beta)] (-g)^{-k} d_k + sum_l (-g)^l c_l.
// Throws GIsZero.
Rational functional_L(const TwistContext& ctx, const QuotientElement& u);

struct PreimageTrace {
  RatVector a;  // coefficients of d_s^0 .. d_s^{p-1}
  RatVector b;  // coefficients of s^1 .. s^q
  QuotientElement u;
};

// Backward recursions for a_k and b_j. Throws NotInImage or GIsZero.
PreimageTrace solve_preimage_traced(const TwistContext& ctx, const QuotientElement& r);
QuotientElement solve_preimage(const TwistContext& ctx, const QuotientElement& r);

// functional_L of d_{x_i} . 1 = s dg_i; equals -beta dg_i / g.
// Throws GIsZero or MissingGradient.
Rational connection_residue(const TwistContext& ctx, std::size_t i);

}  // namespace gkz
