#include "gkz/toric_curve.hpp"

#include "gkz/error.hpp"

#include <algorithm>

namespace gkz {

const char* ray_label(Ray ray) noexcept {
  return ray == Ray::Zero ? "rho_0" : "rho_inf";
}

int ray_direction(Ray ray) noexcept { return ray == Ray::Zero ? 1 : -1; }

std::vector<Puncture> ExponentProfile::u_b_punctures() const {
  std::vector<Puncture> out;
  for (const auto& p : punctures) {
    if (p.kind == Puncture::Kind::BlockZero) {
      out.push_back(p);
    } else if (std::find(split.nonintegral.begin(), split.nonintegral.end(), p.ray) !=
               split.nonintegral.end()) {
      out.push_back(p);
    }
  }
  return out;
}

Rational ExponentProfile::exponent_sum() const {
  Rational s = 0;
  for (const auto& p : punctures) s += p.exponent * p.multiplicity;
  return s;
}

long long LesTable::alternating_sum() const {
  return static_cast<long long>(h1_int) - static_cast<long long>(h1_U) +
         static_cast<long long>(h1_rel) - static_cast<long long>(h0_int) +
         static_cast<long long>(h0_U) - static_cast<long long>(h0_rel);
}

DivisorData divisor_coefficients(const GkzSystem& sys) {
  if (sys.n() != 1) {
    throw Error(ErrorCode::UnsupportedDimension,
                "toric curve data needs n = 1, got n = " + std::to_string(sys.n()));
  }
  DivisorData div;
  for (std::size_t k = 0; k < sys.r(); ++k) {
    const auto& block = sys.weight_blocks()[k];
    Integer lo = block.front()[0];
    Integer hi = block.front()[0];
    for (const auto& w : block) {
      lo = std::min(lo, w[0]);
      hi = std::max(hi, w[0]);
    }
    if (lo == hi) {
      throw Error(ErrorCode::ConstantBlock,
                  "block " + std::to_string(k + 1) + " has a single exponent");
    }
    div.a[0].push_back(-lo);
    div.a[1].push_back(hi);
    div.lengths.push_back(hi - lo);
  }
  return div;
}

namespace {

Rational weighted_beta(const IntVector& coeffs, const RatVector& beta_head) {
  Rational s = 0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) s += coeffs[k] * beta_head[k];
  return s;
}

}  // namespace

RaySplit split_integral_rays(const DivisorData& div, const RatVector& beta_head) {
  RaySplit split;
  for (Ray ray : kRays) {
    if (is_integral(weighted_beta(div.at(ray), beta_head))) {
      split.integral.push_back(ray);
    } else {
      split.nonintegral.push_back(ray);
    }
  }
  return split;
}

ExponentProfile monodromy_profile(const GkzSystem& sys, const DivisorData& div,
                                  const RaySplit& split) {
  ExponentProfile profile;
  profile.split = split;
  for (std::size_t k = 0; k < sys.r(); ++k) {
    Puncture p;
    p.kind = Puncture::Kind::BlockZero;
    p.block = k;
    p.exponent = sys.beta_head()[k];
    p.multiplicity = static_cast<std::size_t>(div.lengths[k]);
    profile.punctures.push_back(p);
  }
  for (Ray ray : kRays) {
    Puncture p;
    p.kind = Puncture::Kind::Ray;
    p.ray = ray;
    p.exponent = -weighted_beta(div.at(ray), sys.beta_head());
    profile.punctures.push_back(p);
  }
  return profile;
}

LesTable les_dimensions(const ExponentProfile& profile) {
  const auto on_sphere = profile.u_b_punctures();
  std::size_t count = 0;
  bool nontrivial = false;
  for (const auto& p : on_sphere) {
    count += p.multiplicity;
    if (p.multiplicity > 0 && !is_integral(p.exponent)) nontrivial = true;
  }
  if (count < 2) {
    throw Error(ErrorCode::TooFewPunctures,
                "U_b has " + std::to_string(count) + " punctures, need at least 2");
  }
  if (!nontrivial) {
    throw Error(ErrorCode::TrivialLocalSystem, "every monodromy exponent on U_b is integral");
  }
  LesTable les;
  les.h0_U = 0;
  les.h1_U = count - 2;
  les.h0_int = profile.split.integral.size();
  les.h1_int = 0;
  les.h1_rel = les.h1_U + les.h0_int;
  les.h0_rel = 0;
  return les;
}

ToricCurveReport toric_curve_report(const GkzSystem& sys) {
  ToricCurveReport rep;
  rep.divisor = divisor_coefficients(sys);
  if (!check_semi_nonresonant(sys)) {
    throw Error(ErrorCode::HypothesisFailed, "-beta is not in the interior of the cone of A");
  }
  rep.split = split_integral_rays(rep.divisor, sys.beta_head());
  rep.profile = monodromy_profile(sys, rep.divisor, rep.split);
  rep.les = les_dimensions(rep.profile);
  rep.rank = rep.les.h1_rel;
  return rep;
}

std::size_t solution_rank(const GkzSystem& sys) { return toric_curve_report(sys).rank; }

std::vector<IntVector> lifted_rays(const GkzSystem& sys, const DivisorData& div) {
  std::vector<IntVector> out;
  for (Ray ray : kRays) {
    IntVector v{Integer(ray_direction(ray))};
    for (std::size_t k = 0; k < sys.r(); ++k) v.push_back(div.at(ray)[k]);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace gkz
