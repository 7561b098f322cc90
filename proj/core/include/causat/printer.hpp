#pragma once

// Canonical text for ASTs: fixed spacing, minimal parentheses, and
// parseFormula(printFormula(f)) == f for every well-formed tree.

#include <string>

#include "causat/ast.hpp"

namespace causat {

std::string printFormula(const FormulaPtr& f);
std::string printTerm(const TermPtr& t);
/// An event as it appears inside P(...).
std::string printEvent(const CfPtr& e);
std::string printProp(const PropPtr& p);
std::string printIntervention(const Intervention& alpha);
std::string printRelOp(RelOp op);

}  // namespace causat
