#include "momdec/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace momdec {

Rational rational_pow(const Rational& base, long exp) {
  if (exp == 0) return Rational(1);
  if (base == 0) {
    if (exp < 0) throw std::domain_error("rational_pow: zero base with negative exponent");
    return Rational(0);
  }
  Rational acc(1);
  Rational b = exp > 0 ? base : Rational(1) / base;
  unsigned long e = exp > 0 ? static_cast<unsigned long>(exp) : static_cast<unsigned long>(-exp);
  while (e != 0) {
    if (e & 1u) acc *= b;
    b *= b;
    e >>= 1u;
  }
  return acc;
}

Rational rational_pow(long long base, long exp) { return rational_pow(Rational(base), exp); }

Rational rational_from_decimal(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty decimal literal");
  bool negative = false;
  std::size_t pos = 0;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  BigInt numerator = 0;
  BigInt denominator = 1;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c == '.') {
      if (seen_point) throw std::invalid_argument("malformed decimal literal: " + std::string(text));
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') throw std::invalid_argument("malformed decimal literal: " + std::string(text));
    numerator = numerator * 10 + (c - '0');
    if (seen_point) denominator *= 10;
    seen_digit = true;
  }
  if (!seen_digit) throw std::invalid_argument("malformed decimal literal: " + std::string(text));
  Rational value(numerator, denominator);
  return negative ? -value : value;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value has no rational form");
  if (value == 0.0) return Rational(0);
  int exponent = 0;
  double mantissa = std::frexp(value, &exponent);  // value = mantissa * 2^exponent, |mantissa| in [0.5,1)
  // 53 doublings make the mantissa integral
  mantissa = std::ldexp(mantissa, 53);
  exponent -= 53;
  BigInt numerator(static_cast<long long>(mantissa));
  if (exponent >= 0) return Rational(numerator << exponent);
  return Rational(numerator, BigInt(1) << -exponent);
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::string to_string(const Rational& value) { return value.str(); }

}  // namespace momdec
