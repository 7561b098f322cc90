#pragma once

// Sparse multivariate polynomials with exact rational coefficients.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "causat/ast.hpp"
#include "causat/rational.hpp"

namespace causat {

/// Exponent vector, one entry per unknown.
using Monomial = std::vector<int>;

class Polynomial {
 public:
  explicit Polynomial(int numVars = 0) : numVars_(numVars) {}
  static Polynomial constant(int numVars, const Rational& c);
  static Polynomial variable(int numVars, int index);

  int numVars() const noexcept { return numVars_; }
  const std::map<Monomial, Rational>& terms() const noexcept { return terms_; }

  bool isZero() const noexcept { return terms_.empty(); }
  bool isConstant() const;
  Rational constantTerm() const;
  /// Total degree; 0 for constants, -1 for the zero polynomial.
  int degree() const;
  /// Coefficient of x_i (degree-one monomial).
  Rational linearCoefficient(int index) const;
  bool mentions(int index) const;

  Rational evaluate(std::span<const Rational> point) const;
  /// x_index := value.
  Polynomial substitute(int index, const Polynomial& value) const;
  /// Coefficients c_0..c_d of the univariate polynomial in x_index obtained by
  /// fixing every other unknown to `point`.
  std::vector<Rational> univariate(int index, std::span<const Rational> point) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  /// Human-readable form, e.g. "q1*q2 - 1/4". Unknown i prints as names[i].
  std::string toString(const std::vector<std::string>& names) const;

 private:
  void addTerm(const Monomial& m, const Rational& c);

  int numVars_;
  std::map<Monomial, Rational> terms_;
};

/// poly rel 0.
struct PolyConstraint {
  Polynomial poly;
  RelOp rel = RelOp::Le;
};

/// True iff `value rel 0`.
bool holds(const Rational& value, RelOp rel);

}  // namespace causat
