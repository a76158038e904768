#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace feller {

// Exact rational scalar. Arbitrary precision is required throughout: blow-up
// certificates carry exponents like m*s2 with m far beyond anything a fixed
// width type survives, and transport pivoting must be free of rounding.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "p/q" or "p". Throws DataError on malformed input or q == 0.
Rational parse_rational(std::string_view s);

/// Renders as "p/q", or just "p" when the denominator is 1.
std::string rational_str(const Rational& r);

/// Exact conversion of a finite double (every finite double is rational).
/// Throws DataError on NaN or infinity.
Rational rational_from_double(double d);

double rational_to_double(const Rational& r);

/// Largest integer <= r.
BigInt rational_floor(const Rational& r);

/// Smallest integer >= r.
BigInt rational_ceil(const Rational& r);

}  // namespace feller
