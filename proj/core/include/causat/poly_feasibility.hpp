#pragma once

// Incomplete search for a rational point of a polynomial system.
//
// Linear equalities are eliminated by substitution; the remaining unknowns
// are scanned on rational grids k/N in [0, 1] and refined along single
// coordinates with the rational root theorem. Every reported point is checked
// exactly. A system of degree at most one goes to linearFeasibilityExact.

#include <cstddef>
#include <string>
#include <vector>

#include "causat/lp.hpp"
#include "causat/polynomial.hpp"

namespace causat {

struct PolySystem {
  int numVars = 0;
  std::vector<PolyConstraint> constraints;
};

struct PolyOptions {
  int maxDenominator = 12;
  std::size_t maxPoints = 20'000;
  std::size_t maxPivots = 100'000;
};

struct PolyResult {
  /// Infeasible only comes from the exact linear backend.
  enum class Status { Feasible, Infeasible, Unknown };
  Status status = Status::Unknown;
  std::vector<Rational> point;
  std::string reason;
};

PolyResult polyFeasibilityNaive(const PolySystem& sys, const PolyOptions& options = {});

/// The same system as linear rows; requires degree <= 1 everywhere.
LinearSystem toLinearSystem(const PolySystem& sys);

}  // namespace causat
