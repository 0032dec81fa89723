#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace bfactory {

// Exact rational scalar. GMP-backed, always stored in lowest terms with a
// positive denominator; arithmetic never rounds.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Parses "p/q" or "p" (q must be nonzero). The result is normalized even if
// the input is not, e.g. "-6/4" -> -3/2, "4/-6" -> -2/3.
Rational parse_rational(std::string_view text);

// "p/q", or just "p" when the denominator is 1.
std::string to_string(const Rational& q);

inline int sign(const Rational& q) { return q.sign(); }

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Largest integer <= q.
BigInt floor(const Rational& q);

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

}  // namespace bfactory
