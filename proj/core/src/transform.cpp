#include "causat/transform.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>

#include "causat/classify.hpp"
#include "causat/errors.hpp"
#include "causat/parser.hpp"

namespace causat {
namespace {

TermPtr expandTerm(const TermPtr& t, int card) {
  switch (t->kind) {
    case Term::Kind::Prob:
    case Term::Kind::CondProb:
    case Term::Kind::Const: return t;
    case Term::Kind::Neg: return neg(expandTerm(t->lhs, card));
    case Term::Kind::Add: return add(expandTerm(t->lhs, card), expandTerm(t->rhs, card));
    case Term::Kind::Sub: return sub(expandTerm(t->lhs, card), expandTerm(t->rhs, card));
    case Term::Kind::Mul: return mul(expandTerm(t->lhs, card), expandTerm(t->rhs, card));
    case Term::Kind::Sum: {
      TermPtr out;
      for (int v = 0; v < card; ++v) {
        TermPtr copy = expandTerm(substituteDummy(t->lhs, t->dummy, v), card);
        out = out ? add(out, copy) : copy;
      }
      return out;
    }
  }
  throw Error("internal: unknown term kind");
}

FormulaPtr expandFormula(const FormulaPtr& f, int card) {
  switch (f->kind) {
    case Formula::Kind::Cmp: return cmp(expandTerm(f->left, card), f->op, expandTerm(f->right, card));
    case Formula::Kind::Not: return fNot(expandFormula(f->lhs, card));
    case Formula::Kind::And: return fAnd(expandFormula(f->lhs, card), expandFormula(f->rhs, card));
    case Formula::Kind::Or: return fOr(expandFormula(f->lhs, card), expandFormula(f->rhs, card));
  }
  throw Error("internal: unknown formula kind");
}

void requireCard(int card) {
  if (card < 1) throw ConfigError("domain size must be positive");
}

// A connective tree over unintervened leaves as one propositional event.
PropPtr observationalProp(const CfPtr& e) {
  switch (e->kind) {
    case Cf::Kind::Leaf: return e->intervention.empty() ? e->prop : nullptr;
    case Cf::Kind::Not: {
      PropPtr p = observationalProp(e->lhs);
      return p ? propNot(p) : nullptr;
    }
    case Cf::Kind::And:
    case Cf::Kind::Or: {
      PropPtr a = observationalProp(e->lhs);
      PropPtr b = a ? observationalProp(e->rhs) : nullptr;
      if (!b) return nullptr;
      return e->kind == Cf::Kind::And ? propAnd(a, b) : propOr(a, b);
    }
  }
  return nullptr;
}

CfPtr prefixInterventions(const CfPtr& e, const InterventionItem& item) {
  // Keeps an observational event a single leaf under [C=0].
  if (e->kind != Cf::Kind::Leaf) {
    if (PropPtr p = observationalProp(e)) return leaf({item}, p);
  }
  switch (e->kind) {
    case Cf::Kind::Leaf: {
      Intervention alpha{item};
      alpha.insert(alpha.end(), e->intervention.begin(), e->intervention.end());
      return leaf(std::move(alpha), e->prop);
    }
    case Cf::Kind::Not: return cfNot(prefixInterventions(e->lhs, item));
    case Cf::Kind::And: return cfAnd(prefixInterventions(e->lhs, item), prefixInterventions(e->rhs, item));
    case Cf::Kind::Or: return cfOr(prefixInterventions(e->lhs, item), prefixInterventions(e->rhs, item));
  }
  throw Error("internal: unknown event kind");
}

TermPtr prefixInterventions(const TermPtr& t, const InterventionItem& item) {
  switch (t->kind) {
    case Term::Kind::Prob: return prob(prefixInterventions(t->event, item));
    case Term::Kind::CondProb:
      return condProb(prefixInterventions(t->event, item), prefixInterventions(t->condition, item));
    case Term::Kind::Const: return t;
    case Term::Kind::Neg: return neg(prefixInterventions(t->lhs, item));
    case Term::Kind::Sum: return sum(t->dummy, prefixInterventions(t->lhs, item));
    case Term::Kind::Add: return add(prefixInterventions(t->lhs, item), prefixInterventions(t->rhs, item));
    case Term::Kind::Sub: return sub(prefixInterventions(t->lhs, item), prefixInterventions(t->rhs, item));
    case Term::Kind::Mul: return mul(prefixInterventions(t->lhs, item), prefixInterventions(t->rhs, item));
  }
  throw Error("internal: unknown term kind");
}

FormulaPtr prefixInterventions(const FormulaPtr& f, const InterventionItem& item) {
  switch (f->kind) {
    case Formula::Kind::Cmp:
      return cmp(prefixInterventions(f->left, item), f->op, prefixInterventions(f->right, item));
    case Formula::Kind::Not: return fNot(prefixInterventions(f->lhs, item));
    case Formula::Kind::And: return fAnd(prefixInterventions(f->lhs, item), prefixInterventions(f->rhs, item));
    case Formula::Kind::Or: return fOr(prefixInterventions(f->lhs, item), prefixInterventions(f->rhs, item));
  }
  throw Error("internal: unknown formula kind");
}

}  // namespace

namespace {

// Constants per comparison are cleared by scaling with a multiple of the
// denominator bound `clearing`; a product splits the factor between its sides.
class ConstantEliminator {
 public:
  ConstantEliminator(const std::string& anchor, std::uint64_t budget)
      : top_(prob(obs(propOr(atom(anchor, 0), propNot(atom(anchor, 0)))))),
        bottom_(prob(obs(propAnd(atom(anchor, 0), propNot(atom(anchor, 0)))))),
        budget_(budget) {}

  FormulaPtr formula(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Cmp: {
        Integer k = lcm(clearing(f->left), clearing(f->right));
        return cmp(scale(f->left, k), f->op, scale(f->right, k));
      }
      case Formula::Kind::Not: return fNot(formula(f->lhs));
      case Formula::Kind::And: return fAnd(formula(f->lhs), formula(f->rhs));
      case Formula::Kind::Or: return fOr(formula(f->lhs), formula(f->rhs));
    }
    return f;
  }

 private:
  static Integer lcm(const Integer& a, const Integer& b) {
    Integer out;
    mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
  }

  static Integer clearing(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Const: return t->value.get_den();
      case Term::Kind::Prob:
      case Term::Kind::CondProb: return 1;
      case Term::Kind::Neg:
      case Term::Kind::Sum: return clearing(t->lhs);
      case Term::Kind::Add:
      case Term::Kind::Sub: return lcm(clearing(t->lhs), clearing(t->rhs));
      case Term::Kind::Mul: return clearing(t->lhs) * clearing(t->rhs);
    }
    return 1;
  }

  // k * t with every constant an integer, then spelled out; k is a positive
  // multiple of clearing(t).
  TermPtr scale(const TermPtr& t, const Integer& k) {
    switch (t->kind) {
      case Term::Kind::Const: {
        Rational v = t->value * Rational(k);
        if (sgn(v) == 0) {
          charge(1);
          return bottom_;
        }
        TermPtr n = copies(top_, abs(v.get_num()));
        return sgn(v) < 0 ? neg(n) : n;
      }
      case Term::Kind::Prob:
      case Term::Kind::CondProb: return copies(t, k);
      case Term::Kind::Neg: return neg(scale(t->lhs, k));
      case Term::Kind::Sum: return sum(t->dummy, scale(t->lhs, k));
      case Term::Kind::Add: return add(scale(t->lhs, k), scale(t->rhs, k));
      case Term::Kind::Sub: return sub(scale(t->lhs, k), scale(t->rhs, k));
      case Term::Kind::Mul: {
        Integer a = clearing(t->lhs);
        return mul(scale(t->lhs, a), scale(t->rhs, Integer(k / a)));
      }
    }
    return t;
  }

  void charge(const Integer& n) {
    Integer total = Integer(static_cast<unsigned long>(used_)) + n;
    if (total > static_cast<unsigned long>(budget_)) {
      throw BudgetExceeded(total.fits_ulong_p() ? total.get_ui() : UINT64_MAX, budget_);
    }
    used_ = total.get_ui();
  }

  TermPtr copies(const TermPtr& t, const Integer& k) {
    charge(k);
    return balanced(t, k.get_ui());
  }

  static TermPtr balanced(const TermPtr& t, unsigned long k) {
    if (k == 1) return t;
    return add(balanced(t, k / 2), balanced(t, k - k / 2));
  }

  TermPtr top_;
  TermPtr bottom_;
  std::uint64_t budget_;
  std::uint64_t used_ = 0;
};

}  // namespace

FormulaPtr eliminateConstants(const FormulaPtr& f, const std::string& anchor, std::uint64_t budget) {
  return ConstantEliminator(anchor, budget).formula(f);
}

std::string freshName(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int k = 1;; ++k) {
    std::string candidate = base + std::to_string(k);
    if (!taken.count(candidate)) return candidate;
  }
}

FormulaPtr expandSums(const FormulaPtr& f, int card, std::uint64_t budget) {
  requireCard(card);
  std::uint64_t size = expandedSize(f, card);
  if (size > budget) throw BudgetExceeded(size, budget);
  return expandFormula(f, card);
}

TermPtr expandSums(const TermPtr& t, int card, std::uint64_t budget) {
  requireCard(card);
  std::uint64_t size = expandedSize(t, card);
  if (size > budget) throw BudgetExceeded(size, budget);
  return expandTerm(t, card);
}

CompleteDagReduction reduceToCompleteDag(const FormulaPtr& f, const std::vector<std::string>& vars) {
  if (classify(f).layer != 1) throw ConfigError("the complete-DAG reduction applies to layer-1 formulas only");
  return {f, Dag::complete(vars)};
}

OrderingEncoding encodeCausalOrdering(const FormulaPtr& f, const Ordering& ordering,
                                      const std::vector<std::string>& vars, const Domain& domain) {
  if (classify(f).layer > 2) throw ConfigError("the causal-ordering encoding needs a formula of layer at most 2");
  std::vector<std::string> sortedOrder = ordering;
  std::vector<std::string> sortedVars = vars;
  std::sort(sortedOrder.begin(), sortedOrder.end());
  std::sort(sortedVars.begin(), sortedVars.end());
  if (sortedOrder != sortedVars || std::adjacent_find(sortedVars.begin(), sortedVars.end()) != sortedVars.end()) {
    throw ConfigError("ordering must be a permutation of the declared variables");
  }

  std::set<std::string> taken(vars.begin(), vars.end());
  for (const auto& v : mentionedVariables(f)) taken.insert(v);
  for (const auto& d : boundDummies(f)) taken.insert(d);
  std::string control = taken.count("C") ? freshName("_freshC", taken) : "C";

  std::vector<FormulaPtr> parts{prefixInterventions(f, InterventionItem{control, ValueRef::literal(0)})};
  for (std::size_t i = 0; i + 1 < ordering.size(); ++i) {
    for (int k = 0; k < domain.card; ++k) {
      Intervention alpha{{control, ValueRef::literal(1)}, {ordering[i], ValueRef::literal(k)}};
      parts.push_back(cmp(prob(leaf(alpha, atom(ordering[i + 1], k))), RelOp::Eq, constant(1)));
    }
  }
  std::vector<std::string> extended = vars;
  extended.push_back(control);
  return {fAndAll(parts), control, extended};
}

FormulaPtr encodeDagConstraintL3(const Dag& g, const Domain& domain) {
  const auto& vars = g.vars();
  if (vars.empty()) throw ConfigError("the DAG has no variables");
  std::set<std::string> taken(vars.begin(), vars.end());
  std::vector<std::string> dummies;
  for (const auto& v : vars) {
    std::string d = freshName("_fresh_" + v, taken);
    taken.insert(d);
    dummies.push_back(d);
  }
  std::vector<FormulaPtr> parts;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    Intervention parentsSet;
    for (int p : g.parents(static_cast<int>(i))) {
      parentsSet.push_back({vars[static_cast<std::size_t>(p)], ValueRef::ofDummy(dummies[static_cast<std::size_t>(p)])});
    }
    Intervention othersSet;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      if (j != i) othersSet.push_back({vars[j], ValueRef::ofDummy(dummies[j])});
    }
    TermPtr body = prob(desugarNeq(parentsSet, othersSet, vars[i], domain.card));
    for (std::size_t j = vars.size(); j-- > 0;) body = sum(dummies[j], body);
    parts.push_back(cmp(body, RelOp::Eq, constant(0)));
  }
  return fAndAll(parts);
}

FormulaPtr buildDoCalcObservationRule(const std::string& x, const std::string& y,
                                      const std::string& z, const std::string& w,
                                      const Domain& domain) {
  (void)domain;
  std::set<std::string> names{x, y, z, w};
  if (names.size() != 4) throw ConfigError("the observation rule needs four distinct variables");
  std::set<std::string> taken = names;
  auto dummyFor = [&](const std::string& var) {
    std::string lower = var;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    std::string d = (lower != var && !isKeyword(lower)) ? freshName(lower, taken) : freshName("_fresh_" + var, taken);
    taken.insert(d);
    return d;
  };
  std::string dx = dummyFor(x);
  std::string dy = dummyFor(y);
  std::string dz = dummyFor(z);
  std::string dw = dummyFor(w);
  Intervention doX{{x, ValueRef::ofDummy(dx)}};
  CfPtr outcome = leaf(doX, atom(y, ValueRef::ofDummy(dy)));
  CfPtr withZ = leaf(doX, propAnd(atom(z, ValueRef::ofDummy(dz)), atom(w, ValueRef::ofDummy(dw))));
  CfPtr withoutZ = leaf(doX, atom(w, ValueRef::ofDummy(dw)));
  TermPtr diff = sub(condProb(outcome, withZ), condProb(outcome, withoutZ));
  TermPtr body = mul(diff, diff);
  body = sum(dx, sum(dy, sum(dz, sum(dw, body))));
  return cmp(body, RelOp::Eq, constant(0));
}

}  // namespace causat
