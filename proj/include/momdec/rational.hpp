#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace momdec {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// base^exp with possibly negative exp (base must then be nonzero).
Rational rational_pow(const Rational& base, long exp);
Rational rational_pow(long long base, long exp);

/// Parse a plain decimal literal ("2", "-0.5", "1.25") into an exact rational.
Rational rational_from_decimal(std::string_view text);

/// Exact rational value of a finite double (doubles are dyadic rationals).
Rational rational_from_double(double value);

double to_double(const Rational& value);

std::string to_string(const Rational& value);

}  // namespace momdec
