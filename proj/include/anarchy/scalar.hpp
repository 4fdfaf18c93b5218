#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>

namespace anarchy {

// All game data, curve entries and LP coefficients are exact rationals.
// Float (binary64) arithmetic is an opt-in LP backend, not a data type.
using Integer  = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// Parses "3", "-5/2", "1.25", "2.5e-3". Decimal and scientific forms are
// converted exactly (1.25 -> 5/4). Throws ValidationError on anything else.
Rational parse_scalar(const std::string& text);

// Canonical exact form: integer when the denominator is 1, else "p/q".
std::string format_scalar(const Rational& value);

// Shortest-ish decimal rendering for human-facing tables (12 significant
// digits via binary64).
std::string format_decimal(const Rational& value);

double to_double(const Rational& value);

Integer pow10(unsigned digits);

} // namespace anarchy
