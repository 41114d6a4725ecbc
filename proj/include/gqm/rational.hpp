#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace gqm {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_string(const Rational& r);

/// Accepts "p", "-p" and "p/q". Throws ParseError otherwise.
Rational parse_rational(std::string_view text);

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// Smallest integer >= r.
BigInt ceil(const Rational& r);
/// Largest integer <= r.
BigInt floor(const Rational& r);

inline bool is_integer(const Rational& r) {
  return boost::multiprecision::denominator(r) == 1;
}

}  // namespace gqm
