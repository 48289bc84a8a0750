#include "gkz/twist.hpp"

#include "gkz/error.hpp"

#include <algorithm>

namespace gkz {

namespace {

void trim_zeros(RatVector& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

RatVector add(const RatVector& a, const RatVector& b) {
  RatVector out(std::max(a.size(), b.size()), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

void require_nonzero_g(const TwistContext& ctx) {
  if (ctx.g == 0) throw Error(ErrorCode::GIsZero, "g vanishes at the sample point");
}

}  // namespace

QuotientElement::QuotientElement(RatVector c_, RatVector d_)
    : c(std::move(c_)), d(std::move(d_)) {
  trim();
}

void QuotientElement::trim() {
  trim_zeros(c);
  trim_zeros(d);
}

QuotientElement operator+(const QuotientElement& a, const QuotientElement& b) {
  return QuotientElement(add(a.c, b.c), add(a.d, b.d));
}

QuotientElement operator*(const Rational& k, const QuotientElement& a) {
  RatVector c = a.c, d = a.d;
  for (auto& x : c) x *= k;
  for (auto& x : d) x *= k;
  return QuotientElement(std::move(c), std::move(d));
}

TwistContext::TwistContext(Rational beta_, Rational g_, std::optional<RatVector> dg_)
    : beta(std::move(beta_)), g(std::move(g_)), dg(std::move(dg_)) {
  if (is_integral(beta)) {
    throw Error(ErrorCode::IntegralBeta, "beta = " + to_string(beta) + " is an integer");
  }
}

QuotientElement apply_twisted_derivation(const TwistContext& ctx, const QuotientElement& u) {
  RatVector c(u.c.size() + 1, Rational(0));
  RatVector d(u.d.size(), Rational(0));
  for (std::size_t i = 0; i < u.c.size(); ++i) {
    c[i + 1] += u.c[i];
    c[i] += ctx.g * u.c[i];
  }
  // u.d[j - 1] multiplies s^j.
  for (std::size_t j = 1; j <= u.d.size(); ++j) {
    const Rational& coeff = u.d[j - 1];
    const Rational lowered = (ctx.beta - 1 + static_cast<long>(j)) * coeff;
    if (j == 1) {
      c[0] += lowered;
    } else {
      d[j - 2] += lowered;
    }
    d[j - 1] += ctx.g * coeff;
  }
  return QuotientElement(std::move(c), std::move(d));
}

Rational functional_L(const TwistContext& ctx, const QuotientElement& u) {
  require_nonzero_g(ctx);
  const Rational minus_g = -ctx.g;
  Rational total = 0;
  Rational power = 1;  // (-g)^l
  for (const auto& cl : u.c) {
    total += power * cl;
    power *= minus_g;
  }
  Rational inv_power = 1;  // (-g)^{-k}
  for (std::size_t k = 1; k <= u.d.size(); ++k) {
    inv_power /= minus_g;
    total += ctx.beta * gamma_ratio(ctx.beta, 1, static_cast<int>(k)) * inv_power * u.d[k - 1];
  }
  return total;
}

PreimageTrace solve_preimage_traced(const TwistContext& ctx, const QuotientElement& r) {
  require_nonzero_g(ctx);
  const Rational value = functional_L(ctx, r);
  if (value != 0) {
    throw Error(ErrorCode::NotInImage, "functional value " + to_string(value) + " is nonzero");
  }
  const std::size_t p = r.c.empty() ? 0 : r.c.size() - 1;
  const std::size_t q = r.d.size();
  const Rational minus_g = -ctx.g;

  PreimageTrace trace;
  // a_k = c_{k+1} - g c_{k+2} + ... + (-g)^{p-k-1} c_p
  trace.a.assign(p, Rational(0));
  for (std::size_t k = 0; k < p; ++k) {
    Rational power = 1;
    for (std::size_t l = k + 1; l <= p; ++l) {
      trace.a[k] += power * r.c[l];
      power *= minus_g;
    }
  }
  // b_j = sum_{k=j}^{q} (-1)^{k-j} [Gamma(k+beta)/Gamma(j+beta)] d_k g^{j-k-1}
  trace.b.assign(q, Rational(0));
  for (std::size_t j = 1; j <= q; ++j) {
    Rational acc = 0;
    for (std::size_t k = j; k <= q; ++k) {
      Rational term = gamma_ratio(ctx.beta, static_cast<int>(j), static_cast<int>(k)) * r.d[k - 1];
      for (std::size_t e = 0; e < k - j + 1; ++e) term /= ctx.g;
      if ((k - j) % 2 == 1) term = -term;
      acc += term;
    }
    trace.b[j - 1] = acc;
  }
  trace.u = QuotientElement(trace.a, trace.b);
  return trace;
}

QuotientElement solve_preimage(const TwistContext& ctx, const QuotientElement& r) {
  return solve_preimage_traced(ctx, r).u;
}

Rational connection_residue(const TwistContext& ctx, std::size_t i) {
  require_nonzero_g(ctx);
  if (!ctx.dg || i >= ctx.dg->size()) {
    throw Error(ErrorCode::MissingGradient,
                "no partial derivative of g for coordinate " + std::to_string(i + 1));
  }
  return functional_L(ctx, QuotientElement({}, {(*ctx.dg)[i]}));
}

}  // namespace gkz
