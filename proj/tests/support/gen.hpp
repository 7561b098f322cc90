#pragma once

// Seeded random formulas and terms for property tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "causat/ast.hpp"
#include "causat/classify.hpp"
#include "causat/model.hpp"

namespace causat::testing {

struct GenConfig {
  std::vector<std::string> vars;
  int card = 2;
  int maxLayer = 3;
  Arithmetic arithmetic = Arithmetic::Poly;
  /// Maximum Σ nesting.
  int maxSums = 0;
  /// Below poly arithmetic a conditional only appears alone against a
  /// constant, where clearing its denominator stays linear.
  bool conditionals = true;
  int termDepth = 2;
  int formulaDepth = 2;
  int eventDepth = 2;
};

class Generator {
 public:
  Generator(std::uint64_t seed, GenConfig cfg) : rng_(seed), cfg_(std::move(cfg)) {}

  TermPtr term();
  FormulaPtr formula();
  /// A probability P(e) or P(e | d) whose layer is at most maxLayer.
  TermPtr probability();

  int below(int k) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(k)); }

 private:
  ValueRef value(const std::vector<std::string>& dummies);
  PropPtr prop(int depth, const std::vector<std::string>& dummies);
  Intervention intervention(const std::vector<std::string>& dummies);
  CfPtr event(int depth, int layer, const std::vector<std::string>& dummies);
  TermPtr probability(const std::vector<std::string>& dummies);
  TermPtr constantTerm();
  TermPtr term(int depth, int sums, std::vector<std::string>& dummies);
  FormulaPtr formula(int depth);

  bool linearOnly() const { return cfg_.arithmetic != Arithmetic::Poly; }

  std::mt19937_64 rng_;
  GenConfig cfg_;
  bool forceCond_ = false;
};

/// Fixed family of base-arithmetic layer-1 formulas over X, Y (binary).
std::vector<FormulaPtr> microCorpusL1();

/// Every joint table over `vars` whose entries are multiples of 1/N (zero
/// entries omitted), for N = 1..maxDen.
std::vector<JointTable> gridJoints(const std::vector<std::string>& vars, int card, int maxDen);

/// Genuine dependence of some mechanism on an endogenous variable outside
/// its parents in g, witnessed on the exogenous support.
bool violatesDag(const Scm& scm, const Dag& g);

/// Every DAG over the given variables.
std::vector<Dag> allDags(const std::vector<std::string>& vars);

}  // namespace causat::testing
