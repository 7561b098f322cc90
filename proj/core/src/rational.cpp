#include "causat/rational.hpp"

#include <cctype>

#include "causat/errors.hpp"

namespace causat {
namespace {

bool allDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

Integer pow10(std::size_t exponent) {
  Integer result;
  mpz_ui_pow_ui(result.get_mpz_t(), 10, exponent);
  return result;
}

// Base 10 explicitly: the default base 0 would read "0474" as octal.
Integer decimalInteger(std::string_view digits) { return Integer(std::string(digits), 10); }

}  // namespace

Rational parseRational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!allDigits(num) || !allDigits(den)) {
      throw Error("malformed rational '" + std::string(text) + "'");
    }
    Integer d = decimalInteger(den);
    if (d == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    result = Rational(decimalInteger(num), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !allDigits(whole)) || !allDigits(frac)) {
      throw Error("malformed decimal '" + std::string(text) + "'");
    }
    Integer w = whole.empty() ? Integer(0) : decimalInteger(whole);
    Integer f = decimalInteger(frac);
    Integer scale = pow10(frac.size());
    result = Rational(w * scale + f, scale);
  } else {
    if (!allDigits(body)) {
      throw Error("malformed number '" + std::string(text) + "'");
    }
    result = Rational(decimalInteger(body));
  }
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

std::string formatRational(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

std::string formatDecimal(const Rational& value, int digits) {
  const bool negative = sgn(value) < 0;
  Rational magnitude = abs(value);
  Integer scale = pow10(static_cast<std::size_t>(digits));
  // round(|v| * 10^digits) computed as floor((2 * num * scale + den) / (2 * den))
  Integer scaled = (2 * magnitude.get_num() * scale + magnitude.get_den()) /
                   (2 * magnitude.get_den());
  std::string s = scaled.get_str();
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits)) {
      s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    }
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  if (negative && scaled != 0) s.insert(0, "-");
  return s;
}

}  // namespace causat
