#include "causat/poly_feasibility.hpp"

#include <numeric>
#include <optional>

#include "causat/errors.hpp"

namespace causat {
namespace {

// Unknowns expressed through the remaining free ones.
struct Elimination {
  std::vector<std::optional<Polynomial>> value;  // per unknown
  std::vector<PolyConstraint> residual;
};

Elimination eliminate(const PolySystem& sys) {
  Elimination e;
  e.value.resize(static_cast<std::size_t>(sys.numVars));
  e.residual = sys.constraints;
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t k = 0; k < e.residual.size(); ++k) {
      const auto& c = e.residual[k];
      if (c.rel != RelOp::Eq || c.poly.degree() != 1) continue;
      int pivot = -1;
      for (int v = sys.numVars - 1; v >= 0; --v) {
        if (sgn(c.poly.linearCoefficient(v)) != 0) {
          pivot = v;
          break;
        }
      }
      Rational a = c.poly.linearCoefficient(pivot);
      Polynomial rest = c.poly - Polynomial::variable(sys.numVars, pivot) * a;
      Polynomial solved = rest * Rational(-1 / a);
      e.residual.erase(e.residual.begin() + static_cast<std::ptrdiff_t>(k));
      for (auto& r : e.residual) r.poly = r.poly.substitute(pivot, solved);
      for (auto& v : e.value) {
        if (v) v = v->substitute(pivot, solved);
      }
      e.value[static_cast<std::size_t>(pivot)] = solved;
      progress = true;
      break;
    }
  }
  return e;
}

bool satisfiesAll(const PolySystem& sys, const std::vector<Rational>& point) {
  for (const auto& q : point) {
    if (sgn(q) < 0) return false;
  }
  for (const auto& c : sys.constraints) {
    if (!holds(c.poly.evaluate(point), c.rel)) return false;
  }
  return true;
}

// Completes the free coordinates with the eliminated ones.
std::vector<Rational> complete(const Elimination& e, std::vector<Rational> point) {
  for (std::size_t v = 0; v < e.value.size(); ++v) {
    if (e.value[v]) point[v] = e.value[v]->evaluate(point);
  }
  return point;
}

std::vector<Integer> divisors(const Integer& n) {
  std::vector<Integer> out;
  Integer m = abs(n);
  if (m == 0 || m > Integer("1000000000000")) return out;
  for (Integer d = 1; d * d <= m; ++d) {
    if (m % d == 0) {
      out.push_back(d);
      if (d * d != m) out.push_back(m / d);
    }
  }
  return out;
}

// Rational roots in [0, 1] of c_0 + c_1 x + ... + c_d x^d.
std::vector<Rational> rationalRootsInUnit(std::vector<Rational> coeffs) {
  std::vector<Rational> roots;
  while (coeffs.size() > 1 && sgn(coeffs.back()) == 0) coeffs.pop_back();
  if (coeffs.size() <= 1) return roots;
  if (sgn(coeffs.front()) == 0) {
    roots.push_back(0);
    while (coeffs.size() > 1 && sgn(coeffs.front()) == 0) coeffs.erase(coeffs.begin());
    if (coeffs.size() <= 1) return roots;
  }
  Integer lcm = 1;
  for (const auto& c : coeffs) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
  std::vector<Integer> ints;
  for (const auto& c : coeffs) ints.push_back(Integer(c * lcm));
  for (const auto& p : divisors(ints.front())) {
    for (const auto& q : divisors(ints.back())) {
      if (p > q) continue;
      Rational r = ratio(p, q);
      Rational value = 0;
      for (std::size_t k = coeffs.size(); k-- > 0;) value = value * r + coeffs[k];
      if (sgn(value) == 0 && std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    }
  }
  return roots;
}

}  // namespace

LinearSystem toLinearSystem(const PolySystem& sys) {
  LinearSystem lin;
  lin.numVars = sys.numVars;
  for (const auto& c : sys.constraints) {
    if (c.poly.degree() > 1) throw ConfigError("nonlinear constraint in a linear system");
    LinearConstraint row;
    for (int v = 0; v < sys.numVars; ++v) row.coeffs.push_back(c.poly.linearCoefficient(v));
    row.rel = c.rel;
    row.rhs = -c.poly.constantTerm();
    lin.constraints.push_back(std::move(row));
  }
  return lin;
}

PolyResult polyFeasibilityNaive(const PolySystem& sys, const PolyOptions& options) {
  PolyResult result;
  bool linear = true;
  bool hasNe = false;
  for (const auto& c : sys.constraints) {
    linear = linear && c.poly.degree() <= 1;
    hasNe = hasNe || c.rel == RelOp::Ne;
  }
  if (linear && !hasNe) {
    LpResult lp = linearFeasibilityExact(toLinearSystem(sys), LpOptions{options.maxPivots, false});
    if (lp.status == LpResult::Status::Feasible) {
      result.status = PolyResult::Status::Feasible;
      result.point = std::move(lp.point);
    } else if (lp.status == LpResult::Status::Infeasible) {
      result.status = PolyResult::Status::Infeasible;
      result.reason = "linear system infeasible";
    } else {
      result.reason = "pivot limit";
    }
    return result;
  }

  Elimination e = eliminate(sys);
  std::vector<int> free;
  for (int v = 0; v < sys.numVars; ++v) {
    if (!e.value[static_cast<std::size_t>(v)]) free.push_back(v);
  }
  std::vector<const PolyConstraint*> equalities;
  for (const auto& c : e.residual) {
    if (c.rel == RelOp::Eq && c.poly.degree() >= 1) equalities.push_back(&c);
  }

  std::size_t visited = 0;
  std::vector<Rational> point(static_cast<std::size_t>(sys.numVars), Rational(0));
  auto tryPoint = [&](const std::vector<Rational>& candidate) {
    std::vector<Rational> full = complete(e, candidate);
    if (satisfiesAll(sys, full)) {
      result.status = PolyResult::Status::Feasible;
      result.point = std::move(full);
      return true;
    }
    return false;
  };

  for (int den = 1; den <= options.maxDenominator; ++den) {
    std::vector<int> num(free.size(), 0);
    while (true) {
      int g = den;
      for (int a : num) g = std::gcd(g, a);
      if (g == 1 || den == 1) {
        if (++visited > options.maxPoints) {
          result.reason = "grid budget exhausted";
          return result;
        }
        for (std::size_t k = 0; k < free.size(); ++k) {
          point[static_cast<std::size_t>(free[k])] = ratio(num[k], den);
        }
        if (tryPoint(point)) return result;
        for (const PolyConstraint* c : equalities) {
          for (int v : free) {
            if (!c->poly.mentions(v)) continue;
            for (const Rational& r : rationalRootsInUnit(c->poly.univariate(v, point))) {
              std::vector<Rational> refined = point;
              refined[static_cast<std::size_t>(v)] = r;
              if (tryPoint(refined)) return result;
            }
          }
        }
      }
      std::size_t k = 0;
      while (k < num.size() && num[k] == den) num[k++] = 0;
      if (k == num.size()) break;
      ++num[k];
    }
  }
  result.reason = "no point found on grids up to denominator " + std::to_string(options.maxDenominator);
  return result;
}

}  // namespace causat
