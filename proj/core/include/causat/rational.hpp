#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace causat {

/// Exact arbitrary-precision rational. Always kept in lowest terms.
using Rational = mpq_class;
using Integer = mpz_class;

/// num/den in lowest terms. gmpxx does not canonicalize two-argument
/// constructions on its own.
inline Rational ratio(const Integer& num, const Integer& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "n", "-n", "n/d" or a finite decimal such as "0.0474" exactly.
/// Throws causat::Error on malformed input or a zero denominator.
Rational parseRational(std::string_view text);

/// Lowest-terms "n/d", or "n" when the denominator is 1.
std::string formatRational(const Rational& value);

/// Decimal rendering rounded half away from zero to `digits` places.
std::string formatDecimal(const Rational& value, int digits);

}  // namespace causat
