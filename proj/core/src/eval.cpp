#include "causat/eval.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "causat/classify.hpp"
#include "causat/errors.hpp"

namespace causat {
namespace {

using Key = std::vector<std::pair<int, int>>;

class Evaluator {
 public:
  Evaluator(const Scm& scm, const EvalOptions& options) : scm_(scm), options_(options) {
    for (std::size_t i = 0; i < scm.xVars.size(); ++i) index_.emplace(scm.xVars[i], static_cast<int>(i));
  }

  Rational probability(const CfPtr& e) {
    Rational total = 0;
    for (std::size_t j = 0; j < scm_.exo.support.size(); ++j) {
      if (holds(e, j)) total += scm_.exo.support[j].prob;
    }
    return total;
  }

  EvalOutcome value(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Prob: return probability(t->event);
      case Term::Kind::CondProb: {
        Rational den = 0;
        Rational num = 0;
        for (std::size_t j = 0; j < scm_.exo.support.size(); ++j) {
          if (!holds(t->condition, j)) continue;
          den += scm_.exo.support[j].prob;
          if (holds(t->event, j)) num += scm_.exo.support[j].prob;
        }
        if (sgn(den) == 0) return Undefined{t};
        return Rational(num / den);
      }
      case Term::Kind::Const: return t->value;
      case Term::Kind::Neg: {
        EvalOutcome a = value(t->lhs);
        if (auto* r = std::get_if<Rational>(&a)) return Rational(-*r);
        return a;
      }
      case Term::Kind::Sum: {
        Rational total = 0;
        std::optional<Undefined> undefined;
        for (int v = 0; v < scm_.domain.card; ++v) {
          EvalOutcome part = value(substituteDummy(t->lhs, t->dummy, v));
          if (auto* r = std::get_if<Rational>(&part)) {
            total += *r;
          } else if (!undefined) {
            undefined = std::get<Undefined>(part);
          }
        }
        if (undefined) return *undefined;
        return total;
      }
      case Term::Kind::Add:
      case Term::Kind::Sub:
      case Term::Kind::Mul: {
        EvalOutcome a = value(t->lhs);
        EvalOutcome b = value(t->rhs);
        if (std::holds_alternative<Undefined>(a)) return a;
        if (std::holds_alternative<Undefined>(b)) return b;
        const Rational& x = std::get<Rational>(a);
        const Rational& y = std::get<Rational>(b);
        if (t->kind == Term::Kind::Add) return Rational(x + y);
        if (t->kind == Term::Kind::Sub) return Rational(x - y);
        return Rational(x * y);
      }
    }
    throw Error("internal: unknown term kind");
  }

  Verdict formula(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Cmp: {
        EvalOutcome a = value(f->left);
        if (auto* u = std::get_if<Undefined>(&a)) return {Truth::Undefined, *u};
        EvalOutcome b = value(f->right);
        if (auto* u = std::get_if<Undefined>(&b)) return {Truth::Undefined, *u};
        int c = cmp(std::get<Rational>(a), std::get<Rational>(b));
        bool result = false;
        switch (f->op) {
          case RelOp::Le: result = c <= 0; break;
          case RelOp::Lt: result = c < 0; break;
          case RelOp::Eq: result = c == 0; break;
          case RelOp::Ne: result = c != 0; break;
          case RelOp::Ge: result = c >= 0; break;
          case RelOp::Gt: result = c > 0; break;
        }
        return {result ? Truth::True : Truth::False, std::nullopt};
      }
      case Formula::Kind::Not: {
        Verdict v = formula(f->lhs);
        if (v.truth == Truth::True) return {Truth::False, std::nullopt};
        if (v.truth == Truth::False) return {Truth::True, std::nullopt};
        return v;
      }
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        // Strong Kleene: a decisive operand wins over an undefined one.
        Truth decisive = f->kind == Formula::Kind::And ? Truth::False : Truth::True;
        Verdict a = formula(f->lhs);
        if (a.truth == decisive) return a;
        Verdict b = formula(f->rhs);
        if (b.truth == decisive) return b;
        if (a.truth == Truth::Undefined) return a;
        return b;
      }
    }
    throw Error("internal: unknown formula kind");
  }

 private:
  int variable(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw EvalError("variable '" + name + "' is not in the model");
    return it->second;
  }

  int literal(const ValueRef& v) const {
    if (v.isDummy()) throw EvalError("free dummy '" + v.dummy + "'");
    if (!scm_.domain.contains(v.value)) throw EvalError("value " + std::to_string(v.value) + " outside Val");
    return v.value;
  }

  bool holds(const PropPtr& p, const Assignment& x) const {
    switch (p->kind) {
      case Prop::Kind::Atom: return x[static_cast<std::size_t>(variable(p->var))] == literal(p->value);
      case Prop::Kind::Not: return !holds(p->lhs, x);
      case Prop::Kind::And: return holds(p->lhs, x) && holds(p->rhs, x);
      case Prop::Kind::Or: return holds(p->lhs, x) || holds(p->rhs, x);
    }
    return false;
  }

  bool holds(const CfPtr& e, std::size_t j) {
    switch (e->kind) {
      case Cf::Kind::Leaf: return holds(e->prop, worlds(e->intervention)[j]);
      case Cf::Kind::Not: return !holds(e->lhs, j);
      case Cf::Kind::And: return holds(e->lhs, j) && holds(e->rhs, j);
      case Cf::Kind::Or: return holds(e->lhs, j) || holds(e->rhs, j);
    }
    return false;
  }

  // Endogenous assignment of every support point in the world F_alpha.
  const std::vector<Assignment>& worlds(const Intervention& alpha) {
    Key key;
    for (const auto& it : alpha) key.emplace_back(variable(it.var), literal(it.value));
    std::sort(key.begin(), key.end());
    auto found = cache_.find(key);
    if (found != cache_.end()) return found->second;
    Scm model = applyIntervention(scm_, key);
    std::vector<int> order = recursiveOrder(model);
    std::vector<Assignment> out;
    out.reserve(model.exo.support.size());
    for (const auto& s : model.exo.support) out.push_back(evaluateEndogenous(model, s.values, order));
    return cache_.emplace(std::move(key), std::move(out)).first->second;
  }

  const Scm& scm_;
  EvalOptions options_;
  std::unordered_map<std::string, int> index_;
  std::map<Key, std::vector<Assignment>> cache_;
};

void checkBudget(std::uint64_t size, const EvalOptions& options) {
  if (size > options.sumBudget) throw BudgetExceeded(size, options.sumBudget);
}

bool holdsIn(const Scm& scm, const PropPtr& p, const Assignment& x) {
  switch (p->kind) {
    case Prop::Kind::Atom: {
      int i = scm.indexOf(p->var);
      if (i < 0) throw EvalError("variable '" + p->var + "' is not in the model");
      if (p->value.isDummy()) throw EvalError("free dummy '" + p->value.dummy + "'");
      return x[static_cast<std::size_t>(i)] == p->value.value;
    }
    case Prop::Kind::Not: return !holdsIn(scm, p->lhs, x);
    case Prop::Kind::And: return holdsIn(scm, p->lhs, x) && holdsIn(scm, p->rhs, x);
    case Prop::Kind::Or: return holdsIn(scm, p->lhs, x) || holdsIn(scm, p->rhs, x);
  }
  return false;
}

}  // namespace

bool satisfiesCf(const Scm& scm, std::span<const int> u, const CfPtr& e) {
  switch (e->kind) {
    case Cf::Kind::Leaf: {
      std::vector<std::pair<std::string, int>> items;
      for (const auto& it : e->intervention) {
        if (it.value.isDummy()) throw EvalError("free dummy '" + it.value.dummy + "'");
        items.emplace_back(it.var, it.value.value);
      }
      Scm model = applyIntervention(scm, items);
      return holdsIn(scm, e->prop, evaluateEndogenous(model, u));
    }
    case Cf::Kind::Not: return !satisfiesCf(scm, u, e->lhs);
    case Cf::Kind::And: return satisfiesCf(scm, u, e->lhs) && satisfiesCf(scm, u, e->rhs);
    case Cf::Kind::Or: return satisfiesCf(scm, u, e->lhs) || satisfiesCf(scm, u, e->rhs);
  }
  return false;
}

Rational probabilityOf(const Scm& scm, const CfPtr& e) {
  Evaluator ev(scm, {});
  return ev.probability(e);
}

EvalOutcome termValue(const Scm& scm, const TermPtr& t, const EvalOptions& options) {
  checkBudget(expandedSize(t, scm.domain.card), options);
  Evaluator ev(scm, options);
  return ev.value(t);
}

Verdict evalFormula(const Scm& scm, const FormulaPtr& f, const EvalOptions& options) {
  checkBudget(expandedSize(f, scm.domain.card), options);
  Evaluator ev(scm, options);
  return ev.formula(f);
}

Verdict evalFormulaJoint(const JointTable& jt, const FormulaPtr& f, const EvalOptions& options) {
  if (classify(f).layer >= 2) throw EvalError("interventional formula on an observational model");
  return evalFormula(liftJointToScm(jt), f, options);
}

Verdict evalFormulaBn(const Bn& bn, const FormulaPtr& f, const EvalOptions& options) {
  if (classify(f).layer >= 2) throw EvalError("interventional formula on BN");
  return evalFormula(liftJointToScm(bnJointDistribution(bn)), f, options);
}

std::string truthName(Truth t) {
  switch (t) {
    case Truth::True: return "true";
    case Truth::False: return "false";
    case Truth::Undefined: return "undefined";
  }
  return "?";
}

}  // namespace causat
