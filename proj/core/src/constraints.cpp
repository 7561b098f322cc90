#include "causat/constraints.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "causat/errors.hpp"
#include "causat/printer.hpp"
#include "causat/transform.hpp"

namespace causat {
namespace {

class Compiler {
 public:
  Compiler(CompiledFormula& out) : out_(out) {
    for (std::size_t i = 0; i < out.vars.size(); ++i) index_[out.vars[i]] = static_cast<int>(i);
  }

  int formula(const FormulaPtr& f) {
    CompiledFormula::FormulaNode node;
    node.kind = f->kind;
    switch (f->kind) {
      case Formula::Kind::Cmp:
        node.op = f->op;
        node.a = term(f->left);
        node.b = term(f->right);
        break;
      case Formula::Kind::Not:
        node.a = formula(f->lhs);
        break;
      case Formula::Kind::And:
      case Formula::Kind::Or:
        node.a = formula(f->lhs);
        node.b = formula(f->rhs);
        break;
    }
    out_.formulas.push_back(node);
    return static_cast<int>(out_.formulas.size()) - 1;
  }

 private:
  int var(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ConfigError("formula mentions unknown variable '" + name + "'");
    return it->second;
  }

  int literal(const ValueRef& v) const {
    if (v.isDummy()) throw ConfigError("free dummy '" + v.dummy + "'");
    return v.value;
  }

  int term(const TermPtr& t) {
    CompiledFormula::TermNode node;
    node.kind = t->kind;
    switch (t->kind) {
      case Term::Kind::Prob:
        node.event = event(t->event);
        break;
      case Term::Kind::CondProb:
        node.event = event(t->event);
        node.condition = event(t->condition);
        break;
      case Term::Kind::Const:
        node.value = t->value;
        break;
      case Term::Kind::Neg:
        node.a = term(t->lhs);
        break;
      case Term::Kind::Add:
      case Term::Kind::Sub:
      case Term::Kind::Mul:
        node.a = term(t->lhs);
        node.b = term(t->rhs);
        break;
      case Term::Kind::Sum:
        throw ConfigError("unexpanded sum");
    }
    out_.terms.push_back(node);
    return static_cast<int>(out_.terms.size()) - 1;
  }

  int event(const CfPtr& e) {
    CompiledFormula::EventNode node;
    node.kind = e->kind;
    switch (e->kind) {
      case Cf::Kind::Leaf:
        node.leaf = leafIndex(e);
        break;
      case Cf::Kind::Not:
        node.a = event(e->lhs);
        break;
      case Cf::Kind::And:
      case Cf::Kind::Or:
        node.a = event(e->lhs);
        node.b = event(e->rhs);
        break;
    }
    out_.events.push_back(node);
    return static_cast<int>(out_.events.size()) - 1;
  }

  int leafIndex(const CfPtr& e) {
    World w;
    for (const auto& item : e->intervention) {
      int value = literal(item.value);
      if (value < 0 || value >= out_.card) throw ConfigError("intervention value out of range");
      w.emplace_back(var(item.var), value);
    }
    std::sort(w.begin(), w.end());
    auto [wit, wNew] = worlds_.try_emplace(w, static_cast<int>(out_.worlds.size()));
    if (wNew) out_.worlds.push_back(w);
    std::string key = printProp(e->prop);
    auto [lit, lNew] = leaves_.try_emplace({wit->second, key}, static_cast<int>(out_.leafWorld.size()));
    if (lNew) {
      out_.leafWorld.push_back(wit->second);
      out_.leafProp.push_back(prop(e->prop));
    }
    return lit->second;
  }

  int prop(const PropPtr& p) {
    CompiledFormula::PropNode node;
    node.kind = p->kind;
    switch (p->kind) {
      case Prop::Kind::Atom:
        node.var = var(p->var);
        node.value = literal(p->value);
        break;
      case Prop::Kind::Not:
        node.a = prop(p->lhs);
        break;
      case Prop::Kind::And:
      case Prop::Kind::Or:
        node.a = prop(p->lhs);
        node.b = prop(p->rhs);
        break;
    }
    out_.props.push_back(node);
    return static_cast<int>(out_.props.size()) - 1;
  }

  CompiledFormula& out_;
  std::map<std::string, int> index_;
  std::map<World, int> worlds_;
  std::map<std::pair<int, std::string>, int> leaves_;
};

// ---------------------------------------------------------------------------
// Constraint trees.

ConstraintPtr makeConst(bool value) {
  auto node = std::make_shared<ConstraintNode>();
  node->kind = value ? ConstraintNode::Kind::True : ConstraintNode::Kind::False;
  return node;
}

ConstraintPtr makeJunction(ConstraintNode::Kind kind, const std::vector<ConstraintPtr>& parts) {
  const bool isAnd = kind == ConstraintNode::Kind::And;
  auto node = std::make_shared<ConstraintNode>();
  node->kind = kind;
  for (const auto& p : parts) {
    if (p->kind == (isAnd ? ConstraintNode::Kind::False : ConstraintNode::Kind::True)) return makeConst(!isAnd);
    if (p->kind == (isAnd ? ConstraintNode::Kind::True : ConstraintNode::Kind::False)) continue;
    if (p->kind == kind) {
      node->children.insert(node->children.end(), p->children.begin(), p->children.end());
    } else {
      node->children.push_back(p);
    }
  }
  if (node->children.empty()) return makeConst(isAnd);
  if (node->children.size() == 1) return node->children.front();
  return node;
}

ConstraintPtr makeAtom(const Polynomial& poly, RelOp rel) {
  if (poly.isConstant()) return makeConst(holds(poly.constantTerm(), rel));
  if (rel == RelOp::Ne) {
    return makeJunction(ConstraintNode::Kind::Or, {makeAtom(poly, RelOp::Lt), makeAtom(poly, RelOp::Gt)});
  }
  auto node = std::make_shared<ConstraintNode>();
  node->kind = ConstraintNode::Kind::Atom;
  node->atom = PolyConstraint{poly, rel};
  return node;
}

RelOp negate(RelOp op) {
  switch (op) {
    case RelOp::Le: return RelOp::Gt;
    case RelOp::Lt: return RelOp::Ge;
    case RelOp::Eq: return RelOp::Ne;
    case RelOp::Ne: return RelOp::Eq;
    case RelOp::Ge: return RelOp::Lt;
    case RelOp::Gt: return RelOp::Le;
  }
  return op;
}

struct Fraction {
  Polynomial num;
  Polynomial den;
  bool undefined = false;
};

class Translator {
 public:
  Translator(const CompiledFormula& f, const std::vector<SupportPointModel>& points, int k)
      : f_(f), points_(points), k_(k), eventCache_(f.events.size()) {}

  // Constraint under which node `i` has truth value `want`.
  ConstraintPtr translate(int i, bool want) {
    const auto& node = f_.formulas[static_cast<std::size_t>(i)];
    switch (node.kind) {
      case Formula::Kind::Cmp: {
        Fraction l = term(node.a);
        Fraction r = term(node.b);
        if (l.undefined || r.undefined) return makeConst(false);
        Polynomial diff = l.num * r.den - r.num * l.den;
        return makeAtom(diff, want ? node.op : negate(node.op));
      }
      case Formula::Kind::Not:
        return translate(node.a, !want);
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        bool conj = (node.kind == Formula::Kind::And) == want;
        return makeJunction(conj ? ConstraintNode::Kind::And : ConstraintNode::Kind::Or,
                            {translate(node.a, want), translate(node.b, want)});
      }
    }
    return makeConst(false);
  }

 private:
  const std::vector<bool>& holds(int e) {
    auto& slot = eventCache_[static_cast<std::size_t>(e)];
    if (!slot.empty() || points_.empty()) return slot;
    std::vector<bool> out(points_.size());
    for (std::size_t j = 0; j < points_.size(); ++j) out[j] = f_.eventHolds(e, points_[j].signature);
    slot = std::move(out);
    return slot;
  }

  Polynomial probability(int e, int given = -1) {
    Polynomial total(k_);
    const auto& a = holds(e);
    const std::vector<bool>* b = given >= 0 ? &holds(given) : nullptr;
    for (std::size_t j = 0; j < points_.size(); ++j) {
      if (a[j] && (!b || (*b)[j])) total += points_[j].probability;
    }
    return total;
  }

  Fraction term(int i) {
    const auto& node = f_.terms[static_cast<std::size_t>(i)];
    Polynomial one = Polynomial::constant(k_, 1);
    switch (node.kind) {
      case Term::Kind::Prob:
        return {probability(node.event), one};
      case Term::Kind::CondProb: {
        Polynomial den = probability(node.condition);
        if (den.isZero()) return {Polynomial(k_), one, true};
        return {probability(node.event, node.condition), den};
      }
      case Term::Kind::Const:
        return {Polynomial::constant(k_, node.value), one};
      case Term::Kind::Neg: {
        Fraction a = term(node.a);
        a.num = -a.num;
        return a;
      }
      case Term::Kind::Add:
      case Term::Kind::Sub:
      case Term::Kind::Mul: {
        Fraction a = term(node.a);
        Fraction b = term(node.b);
        if (a.undefined || b.undefined) return {Polynomial(k_), one, true};
        if (node.kind == Term::Kind::Mul) return {a.num * b.num, a.den * b.den};
        Polynomial lhs = a.den == b.den ? a.num : a.num * b.den;
        Polynomial rhs = a.den == b.den ? b.num : b.num * a.den;
        Polynomial den = a.den == b.den ? a.den : a.den * b.den;
        return {node.kind == Term::Kind::Add ? lhs + rhs : lhs - rhs, den};
      }
      case Term::Kind::Sum:
        break;
    }
    throw ConfigError("unexpanded sum");
  }

  const CompiledFormula& f_;
  const std::vector<SupportPointModel>& points_;
  int k_;
  std::vector<std::vector<bool>> eventCache_;
};

void describe(const ConstraintPtr& c, const std::vector<std::string>& names, std::ostringstream& os) {
  switch (c->kind) {
    case ConstraintNode::Kind::True: os << "true"; return;
    case ConstraintNode::Kind::False: os << "false"; return;
    case ConstraintNode::Kind::Atom:
      os << c->atom.poly.toString(names) << ' ' << printRelOp(c->atom.rel) << " 0";
      return;
    case ConstraintNode::Kind::And:
    case ConstraintNode::Kind::Or: {
      const char* sep = c->kind == ConstraintNode::Kind::And ? " && " : " || ";
      os << '(';
      for (std::size_t i = 0; i < c->children.size(); ++i) {
        if (i) os << sep;
        describe(c->children[i], names, os);
      }
      os << ')';
      return;
    }
  }
}

bool isConst(const CompiledFormula& f, int term, int value) {
  const auto& t = f.terms[static_cast<std::size_t>(term)];
  return t.kind == Term::Kind::Const && t.value == value;
}

int probEvent(const CompiledFormula& f, int term) {
  const auto& t = f.terms[static_cast<std::size_t>(term)];
  return t.kind == Term::Kind::Prob ? t.event : -1;
}

}  // namespace

bool CompiledFormula::propHolds(int p, const Assignment& x) const {
  const auto& node = props[static_cast<std::size_t>(p)];
  switch (node.kind) {
    case Prop::Kind::Atom: return x[static_cast<std::size_t>(node.var)] == node.value;
    case Prop::Kind::Not: return !propHolds(node.a, x);
    case Prop::Kind::And: return propHolds(node.a, x) && propHolds(node.b, x);
    case Prop::Kind::Or: return propHolds(node.a, x) || propHolds(node.b, x);
  }
  return false;
}

bool CompiledFormula::eventHolds(int e, const LeafSignature& sig) const {
  const auto& node = events[static_cast<std::size_t>(e)];
  switch (node.kind) {
    case Cf::Kind::Leaf: return sig[static_cast<std::size_t>(node.leaf)];
    case Cf::Kind::Not: return !eventHolds(node.a, sig);
    case Cf::Kind::And: return eventHolds(node.a, sig) && eventHolds(node.b, sig);
    case Cf::Kind::Or: return eventHolds(node.a, sig) || eventHolds(node.b, sig);
  }
  return false;
}

LeafSignature CompiledFormula::signature(const std::vector<Assignment>& worldValues) const {
  LeafSignature sig(numLeaves());
  for (std::size_t l = 0; l < sig.size(); ++l) {
    sig[l] = propHolds(leafProp[l], worldValues[static_cast<std::size_t>(leafWorld[l])]);
  }
  return sig;
}

std::vector<std::pair<int, bool>> CompiledFormula::unitEvents() const {
  std::vector<std::pair<int, bool>> out;
  if (root < 0) return out;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    const auto& node = formulas[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (node.kind == Formula::Kind::And) {
      stack.push_back(node.a);
      stack.push_back(node.b);
      continue;
    }
    if (node.kind != Formula::Kind::Cmp) continue;
    int e = probEvent(*this, node.a);
    int other = node.b;
    RelOp op = node.op;
    if (e < 0) {
      e = probEvent(*this, node.b);
      other = node.a;
      // c op P(e)  <=>  P(e) op' c
      switch (op) {
        case RelOp::Le: op = RelOp::Ge; break;
        case RelOp::Lt: op = RelOp::Gt; break;
        case RelOp::Ge: op = RelOp::Le; break;
        case RelOp::Gt: op = RelOp::Lt; break;
        default: break;
      }
    }
    if (e < 0) continue;
    if (isConst(*this, other, 1) && (op == RelOp::Eq || op == RelOp::Ge)) out.emplace_back(e, true);
    if (isConst(*this, other, 0) && (op == RelOp::Eq || op == RelOp::Le)) out.emplace_back(e, false);
  }
  return out;
}

CompiledFormula compileFormula(const FormulaPtr& f, const std::vector<std::string>& vars, int card,
                               std::uint64_t sumBudget) {
  if (!f) throw ConfigError("null formula");
  auto dummies = freeDummies(f);
  if (!dummies.empty()) throw ConfigError("free dummy '" + *dummies.begin() + "'");
  CompiledFormula out;
  out.vars = vars;
  out.card = card;
  out.expanded = expandSums(f, card, sumBudget);
  Compiler compiler(out);
  out.root = compiler.formula(out.expanded);
  return out;
}

ConstraintPtr structureToConstraints(const CompiledFormula& f, const std::vector<SupportPointModel>& points,
                                     int numUnknowns) {
  Translator t(f, points, numUnknowns);
  return t.translate(f.root, true);
}

std::string describeConstraints(const ConstraintPtr& c, const std::vector<std::string>& names) {
  std::ostringstream os;
  describe(c, names, os);
  return os.str();
}

}  // namespace causat
