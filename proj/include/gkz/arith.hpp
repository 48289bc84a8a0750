#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace gkz {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

// Accepts "p/q" or "p" with an optional sign; rejects q == 0 and junk.
Rational parse_rational(std::string_view text);

// "p/q" in lowest terms, or "p" when the denominator is one.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

bool is_integral(const Rational& q);

Integer floor_div(const Integer& a, const Integer& b);

// Falling factorial beta (beta - 1) ... (beta - count + 1); 1 for count == 0.
Rational falling_factorial(const Rational& beta, int count);

// Rising product (beta + from)(beta + from + 1)...(beta + to - 1); 1 when
// to <= from. Equals Gamma(to + beta) / Gamma(from + beta).
Rational gamma_ratio(const Rational& beta, int from, int to);

IntVector to_integers(const std::vector<long long>& values);
RatVector to_rationals(const IntVector& values);

}  // namespace gkz
