#pragma once

// Bounded-model satisfiability and validity.
//
// The model class has one exogenous variable U with at most p support points.
// Each support point selects one row of response tables; the endogenous
// behavior of U = j is exactly that row. The search enumerates sets of rows,
// translates the formula into polynomial constraints over the support
// weights q_j and decides each Boolean branch exactly (linear) or by the
// naive polynomial search.
//
// Two rows that give every leaf of the formula the same truth value are
// interchangeable, so structures are enumerated as sets of distinct leaf
// signatures. Layer-1 formulas only see the joint distribution, so constant
// tables suffice there.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "causat/ast.hpp"
#include "causat/model.hpp"
#include "causat/poly_feasibility.hpp"
#include "causat/structures.hpp"
#include "causat/transform.hpp"

namespace causat {

enum class Backend { Auto, LinearExact, PolyNaive, PolyExport };

std::string backendName(Backend b);
/// "auto", "linear-exact", "poly-naive" or "poly-export"; ConfigError otherwise.
Backend parseBackend(const std::string& name);

struct SolveLimits {
  /// 0 means unlimited.
  std::size_t maxStructures = 0;
  std::size_t maxLpPivots = 100'000;
  /// 0 means unlimited.
  std::chrono::milliseconds timeBudget{0};
  /// Upper bound on response rows per causal order.
  std::uint64_t maxRows = 4'000'000;
  /// Upper bound on Boolean branches per structure.
  std::size_t maxBranches = 100'000;
};

struct SolveConfig {
  std::vector<std::string> vars;
  Domain domain;
  int supportBound = 1;
  std::optional<Dag> dag;
  std::optional<Ordering> ordering;
  Backend backend = Backend::Auto;
  SolveLimits limits;
  /// Independent exogenous variable per endogenous one, with product-form
  /// support of total size at most p. Stricter than the default class.
  bool strictMarkovian = false;
  /// Layer-1 formulas only see the joint distribution, so constant tables in
  /// one order suffice. Off: search the full response tables anyway.
  bool observationalShortcut = true;
  int jobs = 1;
  std::uint64_t sumBudget = 1'000'000;
  PolyOptions poly;
};

/// Throws ConfigError when the configuration is inconsistent.
void validateConfig(const SolveConfig& cfg);

enum class SatVerdict { Sat, UnsatWithinBounds, Unknown };

std::string verdictName(SatVerdict v);

struct SolveStats {
  std::size_t structures = 0;
  std::size_t rows = 0;
  std::size_t signatures = 0;
  std::size_t branches = 0;
  std::size_t lpCalls = 0;
  std::size_t polyCalls = 0;
  double elapsedMs = 0;
};

struct SatResult {
  SatVerdict verdict = SatVerdict::Unknown;
  std::optional<Scm> witness;
  std::string reason;
  SolveStats stats;
};

/// Throws ConfigError on an inconsistent config, a formula mentioning
/// undeclared variables or free dummies; BudgetExceeded when Σ expansion is
/// too large.
SatResult solveSat(const FormulaPtr& f, const SolveConfig& cfg);

/// solveSat on NOT f: a witness is a counterexample, UNSAT_WITHIN_BOUNDS
/// means valid within the bounds.
SatResult solveValidityBounded(const FormulaPtr& f, const SolveConfig& cfg);

/// A set of distinct response rows for one causal order.
struct CandidateStructure {
  CausalOrder order;
  /// rows[j][v]: table of variable v at support point j.
  std::vector<std::vector<std::vector<int>>> rows;
};

struct EnumerationSummary {
  std::size_t count = 0;
  bool truncated = false;
};

/// Every structure of size 1..p over the config's class, formula-free.
/// Rows are strictly increasing within a structure. Without a DAG or
/// ordering every causal order is used and a structure is reported only in
/// the smallest topological order of the dependencies it actually has.
/// `visit` returning false stops the enumeration.
EnumerationSummary enumerateStructures(const SolveConfig& cfg,
                                       const std::function<bool(const CandidateStructure&)>& visit);

/// SCM with one exogenous variable U, P(U = j) = weights[j] and mechanisms
/// reading the structure's parents.
Scm structureToScm(const std::vector<std::string>& vars, const Domain& domain, const CandidateStructure& s,
                   const std::vector<Rational>& weights);

}  // namespace causat
