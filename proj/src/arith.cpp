#include "gkz/arith.hpp"

#include "gkz/error.hpp"

#include <cctype>

namespace gkz {

namespace {

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!is_digits(s)) {
    throw Error(ErrorCode::ParseError,
                "not a rational number: \"" + std::string(whole) + "\"");
  }
  Integer value{std::string(s)};
  return negative ? Integer(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_integer(text, text));
  }
  const Integer num = parse_integer(text.substr(0, slash), text);
  const auto den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text.front() == '-' || den_text.front() == '+')) {
    throw Error(ErrorCode::ParseError,
                "denominator must be unsigned: \"" + std::string(text) + "\"");
  }
  const Integer den = parse_integer(den_text, text);
  if (den == 0) {
    throw Error(ErrorCode::ParseError,
                "zero denominator: \"" + std::string(text) + "\"");
  }
  return Rational(num, den);
}

std::string to_string(const Integer& z) { return z.str(); }

std::string to_string(const Rational& q) {
  const Integer& den = boost::multiprecision::denominator(q);
  if (den == 1) return boost::multiprecision::numerator(q).str();
  return boost::multiprecision::numerator(q).str() + "/" + den.str();
}

bool is_integral(const Rational& q) {
  return boost::multiprecision::denominator(q) == 1;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

Rational falling_factorial(const Rational& beta, int count) {
  Rational out = 1;
  for (int i = 0; i < count; ++i) out *= beta - i;
  return out;
}

Rational gamma_ratio(const Rational& beta, int from, int to) {
  Rational out = 1;
  for (int i = from; i < to; ++i) out *= beta + i;
  return out;
}

IntVector to_integers(const std::vector<long long>& values) {
  return IntVector(values.begin(), values.end());
}

RatVector to_rationals(const IntVector& values) {
  return RatVector(values.begin(), values.end());
}

}  // namespace gkz
