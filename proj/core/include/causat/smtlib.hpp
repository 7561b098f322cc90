#pragma once

// SMT-LIB 2 export of satisfiability problems over the reals.
//
// joint-table: layer-1 formulas only. One unknown per full endogenous
// assignment, named p_<v1>_..._<vn> with the values in declaration order
// (p_0_1 is P(X1=0, X2=1)). Entries are nonnegative and sum to one.
//
// per-structure: one problem per CandidateStructure of the config, each in
// its own push/pop scope, over support weights q_1..q_k (positive, summing
// to one).
//
// Conditionals are emitted as cross-multiplied comparisons guarded by the
// positivity of every non-constant denominator, so an atom with an
// undefined conditional is neither asserted nor refuted. The logic is
// QF_LRA when every emitted polynomial has degree at most one, QF_NRA
// otherwise.

#include <string>
#include <vector>

#include "causat/solve.hpp"

namespace causat {

enum class ExportMode { JointTable, PerStructure };

std::string exportModeName(ExportMode m);
/// "joint-table" or "per-structure"; ConfigError otherwise.
ExportMode parseExportMode(const std::string& name);

/// Throws ConfigError for joint-table mode on a formula of layer >= 2.
std::string exportSmtLib(const FormulaPtr& f, const SolveConfig& cfg, ExportMode mode);

/// Unknown name of a full assignment in joint-table mode.
std::string jointVariableName(const Assignment& x);

/// SMT-LIB real literal: "3.0", "(/ 1.0 4.0)", "(- 2.0)".
std::string smtReal(const Rational& value);

}  // namespace causat
