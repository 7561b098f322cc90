#pragma once

#include <string>

#include "causat/ast.hpp"

namespace causat {

enum class Arithmetic { Base = 0, Lin = 1, Poly = 2 };

/// Least language label containing a formula or term.
///
/// Layer: 1 when no probability mentions an intervention; 2 when every
/// probability is P([a]p) or P([a]p | [a]q) for a single post-interventional
/// leaf per argument, sharing one intervention; 3 otherwise. Connectives over
/// leaves with an intervention make a term layer 3 even when the
/// interventions coincide.
/// Arithmetic: base for probabilities and constants (Σ allowed), lin once
/// sums, differences or negations appear or a term is scaled by a
/// probability-free factor, poly for products of two probability-bearing
/// factors.
struct Classification {
  int layer = 1;
  Arithmetic arithmetic = Arithmetic::Base;
  bool usesSum = false;
  bool usesCond = false;
  friend bool operator==(const Classification&, const Classification&) = default;
};

Classification classify(const FormulaPtr& f);
Classification classifyTerm(const TermPtr& t);

std::string arithmeticName(Arithmetic a);
/// e.g. "L2 lin<sum> cond".
std::string describe(const Classification& c);

/// Layer of a single probability P(e) or P(e | d) (`d` may be null).
int eventLayer(const CfPtr& e, const CfPtr& d = nullptr);

}  // namespace causat
