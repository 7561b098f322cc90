#pragma once

// Translation of a formula, evaluated on a fixed discrete structure, into a
// Boolean combination of polynomial constraints over the support weights.
//
// A structure is a list of support points. Each point carries the truth
// value of every post-interventional leaf of the (Σ-expanded) formula, its
// signature, and a polynomial giving its probability. P(ψ) becomes the sum of
// the probabilities of the points whose signature satisfies ψ.

#include <memory>
#include <string>
#include <vector>

#include "causat/ast.hpp"
#include "causat/model.hpp"
#include "causat/polynomial.hpp"

namespace causat {

/// A resolved intervention: (variable index, value), sorted by variable.
using World = std::vector<std::pair<int, int>>;
using LeafSignature = std::vector<bool>;

/// Σ-expanded formula with every distinct leaf [α](δ) numbered. Node
/// children are indices into the node vectors.
struct CompiledFormula {
  struct PropNode {
    Prop::Kind kind = Prop::Kind::Atom;
    int var = -1;
    int value = 0;
    int a = -1;
    int b = -1;
  };
  struct EventNode {
    Cf::Kind kind = Cf::Kind::Leaf;
    int leaf = -1;
    int a = -1;
    int b = -1;
  };
  struct TermNode {
    Term::Kind kind = Term::Kind::Const;
    int event = -1;
    int condition = -1;
    Rational value;
    int a = -1;
    int b = -1;
  };
  struct FormulaNode {
    Formula::Kind kind = Formula::Kind::Cmp;
    RelOp op = RelOp::Le;
    int a = -1;  // term (Cmp) or formula
    int b = -1;
  };

  FormulaPtr expanded;
  std::vector<std::string> vars;
  int card = 2;

  std::vector<World> worlds;
  std::vector<int> leafWorld;  // leaf -> world
  std::vector<int> leafProp;   // leaf -> prop node
  std::vector<PropNode> props;
  std::vector<EventNode> events;
  std::vector<TermNode> terms;
  std::vector<FormulaNode> formulas;
  int root = -1;

  std::size_t numLeaves() const { return leafWorld.size(); }
  bool eventHolds(int event, const LeafSignature& sig) const;
  bool propHolds(int prop, const Assignment& x) const;
  /// LeafSignature from the endogenous assignment of every world.
  LeafSignature signature(const std::vector<Assignment>& worldValues) const;
  /// Events e with a top-level conjunct forcing P(e) = 1 (`mustHold`) or
  /// P(e) = 0 (`!mustHold`); every support point must agree.
  std::vector<std::pair<int, bool>> unitEvents() const;
};

/// Expands Σ (BudgetExceeded past `sumBudget` leaves) and numbers leaves.
/// Throws ConfigError on variables outside `vars` or free dummies.
CompiledFormula compileFormula(const FormulaPtr& f, const std::vector<std::string>& vars, int card,
                               std::uint64_t sumBudget = 1'000'000);

struct SupportPointModel {
  LeafSignature signature;
  Polynomial probability;
};

/// Boolean combination of polynomial atoms `poly rel 0`.
struct ConstraintNode;
using ConstraintPtr = std::shared_ptr<const ConstraintNode>;
struct ConstraintNode {
  enum class Kind { True, False, Atom, And, Or };
  Kind kind = Kind::True;
  PolyConstraint atom;
  std::vector<ConstraintPtr> children;
};

/// Constraints under which the formula is true (strong Kleene; an atom that
/// touches an undefined conditional is neither true nor false). Conditionals
/// whose condition has a non-zero probability polynomial are defined because
/// every support weight is positive; those with an identically zero one are
/// undefined. The domain constraints (weights positive, normalization) are
/// not included.
ConstraintPtr structureToConstraints(const CompiledFormula& f, const std::vector<SupportPointModel>& points,
                                     int numUnknowns);

/// Renders a constraint tree for diagnostics; unknown i prints as names[i].
std::string describeConstraints(const ConstraintPtr& c, const std::vector<std::string>& names);

}  // namespace causat
