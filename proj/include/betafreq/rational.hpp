#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>

namespace betafreq {

using Int = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// Parses "p/q", an integer, or a terminating decimal ("1.285") exactly.
Rational parse_rational(const std::string& text);

// Canonical "p/q" (or "p" when the denominator is 1).
std::string rational_to_string(const Rational& q);

// Decimal rendering of a rational, rounded to `digits` places (half away
// from zero), as used when matching published table values.
std::string rational_to_decimal(const Rational& q, int digits);

inline int sign_of(const Rational& q) { return q.sign(); }

}  // namespace betafreq
