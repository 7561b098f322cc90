#pragma once

// Abstract syntax for events, terms and formulas of the three layers.
//
// Nodes are immutable and shared through shared_ptr<const T>; equality is
// structural. Every node type has a small set of builder functions below, which
// is the only supported way to create nodes.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "causat/rational.hpp"

namespace causat {

/// An integer literal or a reference to a Σ-bound dummy.
struct ValueRef {
  int value = 0;
  std::string dummy;  // non-empty for dummy references

  bool isDummy() const noexcept { return !dummy.empty(); }
  static ValueRef literal(int v) { return ValueRef{v, {}}; }
  static ValueRef ofDummy(std::string name) { return ValueRef{0, std::move(name)}; }
  friend bool operator==(const ValueRef&, const ValueRef&) = default;
};

// ---------------------------------------------------------------------------
// Propositional events: atoms X = v under Not / And / Or.

struct Prop;
using PropPtr = std::shared_ptr<const Prop>;

struct Prop {
  enum class Kind { Atom, Not, And, Or };
  Kind kind;
  std::string var;  // Atom
  ValueRef value;   // Atom
  PropPtr lhs;      // Not, And, Or
  PropPtr rhs;      // And, Or
};

struct InterventionItem {
  std::string var;
  ValueRef value;
  friend bool operator==(const InterventionItem&, const InterventionItem&) = default;
};
/// Empty list denotes ⊤ (no intervention).
using Intervention = std::vector<InterventionItem>;

// ---------------------------------------------------------------------------
// Counterfactual events: leaves [α](δ) under Not / And / Or.

struct Cf;
using CfPtr = std::shared_ptr<const Cf>;

struct Cf {
  enum class Kind { Leaf, Not, And, Or };
  Kind kind;
  Intervention intervention;  // Leaf
  PropPtr prop;               // Leaf
  CfPtr lhs;
  CfPtr rhs;
};

// ---------------------------------------------------------------------------
// Terms.

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Prob, CondProb, Const, Add, Sub, Neg, Mul, Sum };
  Kind kind;
  CfPtr event;      // Prob, CondProb
  CfPtr condition;  // CondProb
  Rational value;   // Const
  TermPtr lhs;      // Add, Sub, Mul, Neg (operand), Sum (body)
  TermPtr rhs;      // Add, Sub, Mul
  std::string dummy;  // Sum
};

// ---------------------------------------------------------------------------
// Formulas.

enum class RelOp { Le, Lt, Eq, Ne, Ge, Gt };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { Cmp, Not, And, Or };
  Kind kind;
  TermPtr left;   // Cmp
  RelOp op = RelOp::Le;
  TermPtr right;  // Cmp
  FormulaPtr lhs;
  FormulaPtr rhs;
};

// ---------------------------------------------------------------------------
// Builders.

PropPtr atom(std::string var, ValueRef value);
PropPtr atom(std::string var, int value);
PropPtr propNot(PropPtr p);
PropPtr propAnd(PropPtr a, PropPtr b);
PropPtr propOr(PropPtr a, PropPtr b);

CfPtr leaf(Intervention alpha, PropPtr p);
/// ⊤-leaf: a purely observational event.
CfPtr obs(PropPtr p);
CfPtr cfNot(CfPtr e);
CfPtr cfAnd(CfPtr a, CfPtr b);
CfPtr cfOr(CfPtr a, CfPtr b);

TermPtr prob(CfPtr e);
TermPtr condProb(CfPtr e, CfPtr given);
TermPtr constant(Rational value);
TermPtr add(TermPtr a, TermPtr b);
TermPtr sub(TermPtr a, TermPtr b);
TermPtr neg(TermPtr a);
TermPtr mul(TermPtr a, TermPtr b);
TermPtr sum(std::string dummy, TermPtr body);

FormulaPtr cmp(TermPtr a, RelOp op, TermPtr b);
FormulaPtr fNot(FormulaPtr f);
FormulaPtr fAnd(FormulaPtr a, FormulaPtr b);
FormulaPtr fOr(FormulaPtr a, FormulaPtr b);

/// Left-associated conjunction of a non-empty list.
FormulaPtr fAndAll(const std::vector<FormulaPtr>& parts);

// ---------------------------------------------------------------------------
// Structural equality (null-safe).

bool equal(const PropPtr& a, const PropPtr& b);
bool equal(const CfPtr& a, const CfPtr& b);
bool equal(const TermPtr& a, const TermPtr& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

// ---------------------------------------------------------------------------
// Traversals.

/// Replaces every occurrence of `dummy` by the literal `v`. An inner Sum that
/// rebinds the same name stops the substitution for its subtree.
PropPtr substituteDummy(const PropPtr& p, const std::string& dummy, int v);
CfPtr substituteDummy(const CfPtr& e, const std::string& dummy, int v);
TermPtr substituteDummy(const TermPtr& t, const std::string& dummy, int v);
FormulaPtr substituteDummy(const FormulaPtr& f, const std::string& dummy, int v);

/// Dummies that occur without an enclosing Sum.
std::set<std::string> freeDummies(const TermPtr& t);
std::set<std::string> freeDummies(const FormulaPtr& f);

/// Every endogenous variable name mentioned in atoms or interventions.
std::set<std::string> mentionedVariables(const FormulaPtr& f);
std::set<std::string> mentionedVariables(const TermPtr& t);

/// Number of Prob, CondProb and Const leaves once every Σ is expanded over a
/// value set of size `card`. Saturates at UINT64_MAX.
std::uint64_t expandedSize(const TermPtr& t, int card);
std::uint64_t expandedSize(const FormulaPtr& f, int card);

/// Every Σ dummy name bound anywhere in the formula.
std::set<std::string> boundDummies(const FormulaPtr& f);

/// ([ι1](X=0) && [ι2](!(X=0))) || ... over every d in Val, left-associated.
/// Under a fixed exogenous assignment it holds iff the two post-interventional
/// values of `var` differ.
CfPtr desugarNeq(const Intervention& iota1, const Intervention& iota2,
                 const std::string& var, int card);

}  // namespace causat
