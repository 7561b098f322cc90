#pragma once

// Exact rational linear feasibility with strict inequalities.
//
// Unknowns are implicitly nonnegative. Strict constraints are handled by
// maximizing a common slack t (0 <= t <= 1) that every strict row must clear;
// the system is feasible iff phase one succeeds and the optimum has t > 0.
// Two-phase dense simplex with Bland's rule, so the returned vertex is
// deterministic.

#include <cstddef>
#include <vector>

#include "causat/ast.hpp"
#include "causat/rational.hpp"

namespace causat {

/// coeffs · q  rel  rhs. `rel` must not be RelOp::Ne.
struct LinearConstraint {
  std::vector<Rational> coeffs;
  RelOp rel = RelOp::Le;
  Rational rhs;
};

struct LinearSystem {
  int numVars = 0;
  std::vector<LinearConstraint> constraints;
};

struct LpOptions {
  std::size_t maxPivots = 100'000;
  /// Compute an irreducible infeasible subset on infeasibility.
  bool certificate = true;
};

struct LpResult {
  enum class Status { Feasible, Infeasible, PivotLimit };
  Status status = Status::Infeasible;
  std::vector<Rational> point;
  /// Indices into `constraints` forming an irreducible infeasible subsystem
  /// (together with q >= 0).
  std::vector<std::size_t> conflict;
  std::size_t pivots = 0;
};

LpResult linearFeasibilityExact(const LinearSystem& sys, const LpOptions& options = {});

}  // namespace causat
