#pragma once

// Exact semantics of events, terms and formulas in an SCM.
//
// P(ψ) sums P(u) over the exogenous support points whose worlds satisfy ψ.
// P(ψ | δ) is P(ψ ∧ δ) / P(δ), undefined when P(δ) = 0. Formulas use strong
// Kleene logic over {true, false, undefined}.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "causat/ast.hpp"
#include "causat/model.hpp"

namespace causat {

/// The conditional whose condition had probability zero.
struct Undefined {
  TermPtr conditional;
};

using EvalOutcome = std::variant<Rational, Undefined>;

enum class Truth { False, True, Undefined };

struct Verdict {
  Truth truth = Truth::False;
  /// For Truth::Undefined: the leftmost-innermost undefined conditional.
  std::optional<Undefined> evidence;

  bool isTrue() const noexcept { return truth == Truth::True; }
};

struct EvalOptions {
  /// Maximum number of leaves after Σ expansion.
  std::uint64_t sumBudget = 1'000'000;
};

/// F, u ⊨ e. Throws EvalError on unknown variables or free dummies.
bool satisfiesCf(const Scm& scm, std::span<const int> u, const CfPtr& e);

/// ⟦P(e)⟧.
Rational probabilityOf(const Scm& scm, const CfPtr& e);

/// Throws BudgetExceeded before evaluating anything when the Σ expansion
/// would exceed the budget.
EvalOutcome termValue(const Scm& scm, const TermPtr& t, const EvalOptions& options = {});

Verdict evalFormula(const Scm& scm, const FormulaPtr& f, const EvalOptions& options = {});

/// Layer-1 formulas only; throws EvalError("interventional formula on BN")
/// otherwise.
Verdict evalFormulaBn(const Bn& bn, const FormulaPtr& f, const EvalOptions& options = {});

/// Layer-1 formulas against an explicit joint distribution.
Verdict evalFormulaJoint(const JointTable& jt, const FormulaPtr& f, const EvalOptions& options = {});

std::string truthName(Truth t);

}  // namespace causat
