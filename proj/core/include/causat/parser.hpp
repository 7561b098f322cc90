#pragma once

// Concrete syntax (see docs/grammar.md):
//
//   P([X=1](Y=1) | X=0 && Y=0) = 1 AND NOT P(X=1) <= 1/2
//   sum x . P(Y=1, X=x) = P(Y=1)
//
// Event connectives are && || ! (a comma inside P(...) is a conjunction),
// formula connectives AND OR NOT, and '#' starts a comment.

#include <string>
#include <string_view>
#include <vector>

#include "causat/ast.hpp"
#include "causat/model.hpp"

namespace causat {

/// The declared endogenous variables and their shared value set.
struct Signature {
  std::vector<std::string> vars;
  Domain domain;
};

struct ParseOptions {
  int maxDepth = 128;
};

/// Throws ParseError (with 1-based line and column) on syntax errors,
/// undeclared variables, unbound or shadowing dummies, values outside Val
/// and nesting deeper than `maxDepth`.
FormulaPtr parseFormula(std::string_view text, const Signature& sig,
                        const ParseOptions& options = {});
TermPtr parseTerm(std::string_view text, const Signature& sig,
                  const ParseOptions& options = {});
CfPtr parseEvent(std::string_view text, const Signature& sig,
                 const ParseOptions& options = {});

/// "X=1, Z=0" as used by the command line. Values must be literals.
Intervention parseInterventionList(std::string_view text, const Signature& sig);

/// True for the reserved words sum, P, AND, OR, NOT.
bool isKeyword(std::string_view word);

}  // namespace causat
