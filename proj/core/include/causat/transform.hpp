#pragma once

// Constructive reductions between satisfiability problems, as formula and
// model transformations.

#include <cstdint>
#include <string>
#include <vector>

#include "causat/ast.hpp"
#include "causat/model.hpp"

namespace causat {

/// Replaces every Σx.t by t[0/x] + ... + t[c-1/x] (innermost sums are
/// expanded inside each copy). Throws BudgetExceeded, reporting the required
/// number of leaves, when the result would exceed `budget` leaves.
FormulaPtr expandSums(const FormulaPtr& f, int card, std::uint64_t budget = 1'000'000);
TermPtr expandSums(const TermPtr& t, int card, std::uint64_t budget = 1'000'000);

struct CompleteDagReduction {
  FormulaPtr formula;
  Dag dag;
};

/// Layer-1 satisfiability is unchanged by requiring the complete DAG over
/// `vars` (X_i -> X_j for i < j). Throws ConfigError for layer >= 2.
CompleteDagReduction reduceToCompleteDag(const FormulaPtr& f, const std::vector<std::string>& vars);

/// A permutation of the endogenous variables, first = earliest.
using Ordering = std::vector<std::string>;

struct OrderingEncoding {
  FormulaPtr formula;
  /// Name of the added control variable ("C", or "_freshC..." when taken).
  std::string control;
  /// Input variables followed by the control variable.
  std::vector<std::string> vars;
};

/// Prepends [C=0] to every intervention of f and adds, for each consecutive
/// pair (V, W) of `ordering` and each k in Val, the conjunct
/// P([C=1, V=k](W=k)) = 1. Throws ConfigError for layer-3 input or when
/// `ordering` is not a permutation of `vars`.
OrderingEncoding encodeCausalOrdering(const FormulaPtr& f, const Ordering& ordering,
                                      const std::vector<std::string>& vars, const Domain& domain);

/// For every variable X with parents T in g:
///   Σ v_1 ... Σ v_n . P([T=v_T](X) ≠ [V∖X = v](X)) = 0,
/// with ≠ unfolded by desugarNeq. A model satisfies the conjunction iff no
/// mechanism's output changes with a non-parent on the exogenous support.
FormulaPtr encodeDagConstraintL3(const Dag& g, const Domain& domain);

/// Σx Σy Σz Σw (P([X=x](Y=y) | [X=x](Z=z, W=w)) - P([X=x](Y=y) | [X=x](W=w)))^2 = 0
FormulaPtr buildDoCalcObservationRule(const std::string& x, const std::string& y,
                                      const std::string& z, const std::string& w,
                                      const Domain& domain);

/// Rewrites f without rational constants. Each comparison is multiplied by
/// the least common multiple of its constant denominators; k * P(e) becomes
/// k copies of P(e), an integer n becomes |n| copies of P(V=0 || V!=0) and 0
/// becomes P(V=0 && V!=0), where V is `anchor`. Throws BudgetExceeded when
/// the result would exceed `budget` leaves.
FormulaPtr eliminateConstants(const FormulaPtr& f, const std::string& anchor,
                              std::uint64_t budget = 1'000'000);

/// `base` if unused, otherwise base1, base2, ...
std::string freshName(const std::string& base, const std::set<std::string>& taken);

}  // namespace causat
