#include "causat/polynomial.hpp"

#include "causat/errors.hpp"

namespace causat {

Polynomial Polynomial::constant(int numVars, const Rational& c) {
  Polynomial p(numVars);
  p.addTerm(Monomial(static_cast<std::size_t>(numVars), 0), c);
  return p;
}

Polynomial Polynomial::variable(int numVars, int index) {
  if (index < 0 || index >= numVars) throw Error("polynomial variable index out of range");
  Polynomial p(numVars);
  Monomial m(static_cast<std::size_t>(numVars), 0);
  m[static_cast<std::size_t>(index)] = 1;
  p.addTerm(m, 1);
  return p;
}

void Polynomial::addTerm(const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

bool Polynomial::isConstant() const { return degree() <= 0; }

Rational Polynomial::constantTerm() const {
  auto it = terms_.find(Monomial(static_cast<std::size_t>(numVars_), 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    int total = 0;
    for (int e : m) total += e;
    d = std::max(d, total);
  }
  return d;
}

Rational Polynomial::linearCoefficient(int index) const {
  Monomial m(static_cast<std::size_t>(numVars_), 0);
  m[static_cast<std::size_t>(index)] = 1;
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

bool Polynomial::mentions(int index) const {
  for (const auto& [m, c] : terms_) {
    if (m[static_cast<std::size_t>(index)] != 0) return true;
  }
  return false;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  if (static_cast<int>(point.size()) != numVars_) throw Error("point has wrong dimension");
  Rational total = 0;
  for (const auto& [m, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (int e = 0; e < m[i]; ++e) term *= point[i];
    }
    total += term;
  }
  return total;
}

Polynomial Polynomial::substitute(int index, const Polynomial& value) const {
  Polynomial out(numVars_);
  std::vector<Polynomial> powers{constant(numVars_, 1)};
  for (const auto& [m, c] : terms_) {
    int e = m[static_cast<std::size_t>(index)];
    while (static_cast<int>(powers.size()) <= e) powers.push_back(powers.back() * value);
    Monomial rest = m;
    rest[static_cast<std::size_t>(index)] = 0;
    Polynomial head(numVars_);
    head.addTerm(rest, c);
    out += head * powers[static_cast<std::size_t>(e)];
  }
  return out;
}

std::vector<Rational> Polynomial::univariate(int index, std::span<const Rational> point) const {
  std::vector<Rational> coeffs(static_cast<std::size_t>(std::max(degree(), 0)) + 1, Rational(0));
  for (const auto& [m, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (static_cast<int>(i) == index) continue;
      for (int e = 0; e < m[i]; ++e) term *= point[i];
    }
    coeffs[static_cast<std::size_t>(m[static_cast<std::size_t>(index)])] += term;
  }
  while (coeffs.size() > 1 && sgn(coeffs.back()) == 0) coeffs.pop_back();
  return coeffs;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.numVars_ != numVars_) throw Error("polynomial arity mismatch");
  for (const auto& [m, c] : other.terms_) addTerm(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.numVars_ != numVars_) throw Error("polynomial arity mismatch");
  for (const auto& [m, c] : other.terms_) addTerm(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.numVars_ != b.numVars_) throw Error("polynomial arity mismatch");
  Polynomial out(a.numVars_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m = ma;
      for (std::size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
      out.addTerm(m, ca * cb);
    }
  }
  return out;
}

std::string Polynomial::toString(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::string s;
  // Highest degree first, then reverse lexicographic on exponents.
  std::vector<std::pair<Monomial, Rational>> ordered(terms_.rbegin(), terms_.rend());
  for (std::size_t k = 0; k < ordered.size(); ++k) {
    const auto& [m, c] = ordered[k];
    Rational mag = abs(c);
    bool negative = sgn(c) < 0;
    if (k == 0) {
      if (negative) s += "-";
    } else {
      s += negative ? " - " : " + ";
    }
    std::string factors;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (int e = 0; e < m[i]; ++e) {
        if (!factors.empty()) factors += "*";
        factors += names[i];
      }
    }
    if (factors.empty()) {
      s += formatRational(mag);
    } else if (mag == 1) {
      s += factors;
    } else {
      s += formatRational(mag) + "*" + factors;
    }
  }
  return s;
}

bool holds(const Rational& value, RelOp rel) {
  int s = sgn(value);
  switch (rel) {
    case RelOp::Le: return s <= 0;
    case RelOp::Lt: return s < 0;
    case RelOp::Eq: return s == 0;
    case RelOp::Ne: return s != 0;
    case RelOp::Ge: return s >= 0;
    case RelOp::Gt: return s > 0;
  }
  return false;
}

}  // namespace causat
