#include "causat/ast.hpp"

#include <algorithm>

#include "causat/errors.hpp"

namespace causat {
namespace {

template <class T>
std::shared_ptr<const T> make(T node) {
  return std::make_shared<const T>(std::move(node));
}

void requireNode(const void* p, const char* what) {
  if (p == nullptr) throw Error(std::string("null ") + what + " operand");
}

}  // namespace

PropPtr atom(std::string var, ValueRef value) {
  return make(Prop{Prop::Kind::Atom, std::move(var), std::move(value), nullptr, nullptr});
}
PropPtr atom(std::string var, int value) { return atom(std::move(var), ValueRef::literal(value)); }
PropPtr propNot(PropPtr p) {
  requireNode(p.get(), "event");
  return make(Prop{Prop::Kind::Not, {}, {}, std::move(p), nullptr});
}
PropPtr propAnd(PropPtr a, PropPtr b) {
  requireNode(a.get(), "event");
  requireNode(b.get(), "event");
  return make(Prop{Prop::Kind::And, {}, {}, std::move(a), std::move(b)});
}
PropPtr propOr(PropPtr a, PropPtr b) {
  requireNode(a.get(), "event");
  requireNode(b.get(), "event");
  return make(Prop{Prop::Kind::Or, {}, {}, std::move(a), std::move(b)});
}

CfPtr leaf(Intervention alpha, PropPtr p) {
  requireNode(p.get(), "event");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (alpha[i].var == alpha[j].var) throw Error("variable " + alpha[i].var + " intervened twice");
    }
  }
  return make(Cf{Cf::Kind::Leaf, std::move(alpha), std::move(p), nullptr, nullptr});
}
CfPtr obs(PropPtr p) { return leaf({}, std::move(p)); }
CfPtr cfNot(CfPtr e) {
  requireNode(e.get(), "event");
  return make(Cf{Cf::Kind::Not, {}, nullptr, std::move(e), nullptr});
}
CfPtr cfAnd(CfPtr a, CfPtr b) {
  requireNode(a.get(), "event");
  requireNode(b.get(), "event");
  return make(Cf{Cf::Kind::And, {}, nullptr, std::move(a), std::move(b)});
}
CfPtr cfOr(CfPtr a, CfPtr b) {
  requireNode(a.get(), "event");
  requireNode(b.get(), "event");
  return make(Cf{Cf::Kind::Or, {}, nullptr, std::move(a), std::move(b)});
}

TermPtr prob(CfPtr e) {
  requireNode(e.get(), "event");
  return make(Term{Term::Kind::Prob, std::move(e), nullptr, {}, nullptr, nullptr, {}});
}
TermPtr condProb(CfPtr e, CfPtr given) {
  requireNode(e.get(), "event");
  requireNode(given.get(), "event");
  return make(Term{Term::Kind::CondProb, std::move(e), std::move(given), {}, nullptr, nullptr, {}});
}
TermPtr constant(Rational value) {
  value.canonicalize();
  return make(Term{Term::Kind::Const, nullptr, nullptr, std::move(value), nullptr, nullptr, {}});
}
namespace {
TermPtr binary(Term::Kind kind, TermPtr a, TermPtr b) {
  requireNode(a.get(), "term");
  requireNode(b.get(), "term");
  return make(Term{kind, nullptr, nullptr, {}, std::move(a), std::move(b), {}});
}
}  // namespace
TermPtr add(TermPtr a, TermPtr b) { return binary(Term::Kind::Add, std::move(a), std::move(b)); }
TermPtr sub(TermPtr a, TermPtr b) { return binary(Term::Kind::Sub, std::move(a), std::move(b)); }
TermPtr mul(TermPtr a, TermPtr b) { return binary(Term::Kind::Mul, std::move(a), std::move(b)); }
TermPtr neg(TermPtr a) {
  requireNode(a.get(), "term");
  return make(Term{Term::Kind::Neg, nullptr, nullptr, {}, std::move(a), nullptr, {}});
}
TermPtr sum(std::string dummy, TermPtr body) {
  requireNode(body.get(), "term");
  if (dummy.empty()) throw Error("empty Σ dummy name");
  return make(Term{Term::Kind::Sum, nullptr, nullptr, {}, std::move(body), nullptr, std::move(dummy)});
}

FormulaPtr cmp(TermPtr a, RelOp op, TermPtr b) {
  requireNode(a.get(), "term");
  requireNode(b.get(), "term");
  return make(Formula{Formula::Kind::Cmp, std::move(a), op, std::move(b), nullptr, nullptr});
}
FormulaPtr fNot(FormulaPtr f) {
  requireNode(f.get(), "formula");
  return make(Formula{Formula::Kind::Not, nullptr, RelOp::Le, nullptr, std::move(f), nullptr});
}
FormulaPtr fAnd(FormulaPtr a, FormulaPtr b) {
  requireNode(a.get(), "formula");
  requireNode(b.get(), "formula");
  return make(Formula{Formula::Kind::And, nullptr, RelOp::Le, nullptr, std::move(a), std::move(b)});
}
FormulaPtr fOr(FormulaPtr a, FormulaPtr b) {
  requireNode(a.get(), "formula");
  requireNode(b.get(), "formula");
  return make(Formula{Formula::Kind::Or, nullptr, RelOp::Le, nullptr, std::move(a), std::move(b)});
}
FormulaPtr fAndAll(const std::vector<FormulaPtr>& parts) {
  if (parts.empty()) throw Error("empty conjunction");
  FormulaPtr out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = fAnd(out, parts[i]);
  return out;
}

// ---------------------------------------------------------------------------

bool equal(const PropPtr& a, const PropPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  if (a->kind == Prop::Kind::Atom) return a->var == b->var && a->value == b->value;
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

bool equal(const CfPtr& a, const CfPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  if (a->kind == Cf::Kind::Leaf) return a->intervention == b->intervention && equal(a->prop, b->prop);
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Prob: return equal(a->event, b->event);
    case Term::Kind::CondProb: return equal(a->event, b->event) && equal(a->condition, b->condition);
    case Term::Kind::Const: return a->value == b->value;
    case Term::Kind::Sum: return a->dummy == b->dummy && equal(a->lhs, b->lhs);
    default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  if (a->kind == Formula::Kind::Cmp) return a->op == b->op && equal(a->left, b->left) && equal(a->right, b->right);
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

// ---------------------------------------------------------------------------

namespace {

ValueRef subst(const ValueRef& r, const std::string& dummy, int v) {
  return r.dummy == dummy ? ValueRef::literal(v) : r;
}

bool mentions(const PropPtr& p, const std::string& dummy) {
  if (!p) return false;
  if (p->kind == Prop::Kind::Atom) return p->value.dummy == dummy;
  return mentions(p->lhs, dummy) || mentions(p->rhs, dummy);
}

bool mentions(const CfPtr& e, const std::string& dummy) {
  if (!e) return false;
  if (e->kind == Cf::Kind::Leaf) {
    for (const auto& it : e->intervention) {
      if (it.value.dummy == dummy) return true;
    }
    return mentions(e->prop, dummy);
  }
  return mentions(e->lhs, dummy) || mentions(e->rhs, dummy);
}

}  // namespace

PropPtr substituteDummy(const PropPtr& p, const std::string& dummy, int v) {
  if (!mentions(p, dummy)) return p;
  switch (p->kind) {
    case Prop::Kind::Atom: return atom(p->var, subst(p->value, dummy, v));
    case Prop::Kind::Not: return propNot(substituteDummy(p->lhs, dummy, v));
    case Prop::Kind::And: return propAnd(substituteDummy(p->lhs, dummy, v), substituteDummy(p->rhs, dummy, v));
    case Prop::Kind::Or: return propOr(substituteDummy(p->lhs, dummy, v), substituteDummy(p->rhs, dummy, v));
  }
  return p;
}

CfPtr substituteDummy(const CfPtr& e, const std::string& dummy, int v) {
  if (!mentions(e, dummy)) return e;
  switch (e->kind) {
    case Cf::Kind::Leaf: {
      Intervention alpha = e->intervention;
      for (auto& it : alpha) it.value = subst(it.value, dummy, v);
      return leaf(std::move(alpha), substituteDummy(e->prop, dummy, v));
    }
    case Cf::Kind::Not: return cfNot(substituteDummy(e->lhs, dummy, v));
    case Cf::Kind::And: return cfAnd(substituteDummy(e->lhs, dummy, v), substituteDummy(e->rhs, dummy, v));
    case Cf::Kind::Or: return cfOr(substituteDummy(e->lhs, dummy, v), substituteDummy(e->rhs, dummy, v));
  }
  return e;
}

TermPtr substituteDummy(const TermPtr& t, const std::string& dummy, int v) {
  switch (t->kind) {
    case Term::Kind::Prob: {
      auto e = substituteDummy(t->event, dummy, v);
      return e == t->event ? t : prob(e);
    }
    case Term::Kind::CondProb: {
      auto e = substituteDummy(t->event, dummy, v);
      auto d = substituteDummy(t->condition, dummy, v);
      return e == t->event && d == t->condition ? t : condProb(e, d);
    }
    case Term::Kind::Const: return t;
    case Term::Kind::Neg: {
      auto a = substituteDummy(t->lhs, dummy, v);
      return a == t->lhs ? t : neg(a);
    }
    case Term::Kind::Sum: {
      if (t->dummy == dummy) return t;
      auto body = substituteDummy(t->lhs, dummy, v);
      return body == t->lhs ? t : sum(t->dummy, body);
    }
    case Term::Kind::Add:
    case Term::Kind::Sub:
    case Term::Kind::Mul: {
      auto a = substituteDummy(t->lhs, dummy, v);
      auto b = substituteDummy(t->rhs, dummy, v);
      if (a == t->lhs && b == t->rhs) return t;
      if (t->kind == Term::Kind::Add) return add(a, b);
      if (t->kind == Term::Kind::Sub) return sub(a, b);
      return mul(a, b);
    }
  }
  return t;
}

FormulaPtr substituteDummy(const FormulaPtr& f, const std::string& dummy, int v) {
  switch (f->kind) {
    case Formula::Kind::Cmp: return cmp(substituteDummy(f->left, dummy, v), f->op, substituteDummy(f->right, dummy, v));
    case Formula::Kind::Not: return fNot(substituteDummy(f->lhs, dummy, v));
    case Formula::Kind::And: return fAnd(substituteDummy(f->lhs, dummy, v), substituteDummy(f->rhs, dummy, v));
    case Formula::Kind::Or: return fOr(substituteDummy(f->lhs, dummy, v), substituteDummy(f->rhs, dummy, v));
  }
  return f;
}

// ---------------------------------------------------------------------------

namespace {

struct Collector {
  std::set<std::string> freeDummies;
  std::set<std::string> variables;
  std::set<std::string> bound;
  std::vector<std::string> scope;

  void ref(const ValueRef& r) {
    if (r.isDummy() && std::find(scope.begin(), scope.end(), r.dummy) == scope.end()) freeDummies.insert(r.dummy);
  }
  void visit(const PropPtr& p) {
    if (p->kind == Prop::Kind::Atom) {
      variables.insert(p->var);
      ref(p->value);
      return;
    }
    visit(p->lhs);
    if (p->rhs) visit(p->rhs);
  }
  void visit(const CfPtr& e) {
    if (e->kind == Cf::Kind::Leaf) {
      for (const auto& it : e->intervention) {
        variables.insert(it.var);
        ref(it.value);
      }
      visit(e->prop);
      return;
    }
    visit(e->lhs);
    if (e->rhs) visit(e->rhs);
  }
  void visit(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Prob: visit(t->event); return;
      case Term::Kind::CondProb:
        visit(t->event);
        visit(t->condition);
        return;
      case Term::Kind::Const: return;
      case Term::Kind::Sum:
        bound.insert(t->dummy);
        scope.push_back(t->dummy);
        visit(t->lhs);
        scope.pop_back();
        return;
      default:
        visit(t->lhs);
        if (t->rhs) visit(t->rhs);
    }
  }
  void visit(const FormulaPtr& f) {
    if (f->kind == Formula::Kind::Cmp) {
      visit(f->left);
      visit(f->right);
      return;
    }
    visit(f->lhs);
    if (f->rhs) visit(f->rhs);
  }
};

}  // namespace

std::set<std::string> freeDummies(const TermPtr& t) {
  Collector c;
  c.visit(t);
  return c.freeDummies;
}
std::set<std::string> freeDummies(const FormulaPtr& f) {
  Collector c;
  c.visit(f);
  return c.freeDummies;
}
std::set<std::string> mentionedVariables(const FormulaPtr& f) {
  Collector c;
  c.visit(f);
  return c.variables;
}
std::set<std::string> mentionedVariables(const TermPtr& t) {
  Collector c;
  c.visit(t);
  return c.variables;
}
std::set<std::string> boundDummies(const FormulaPtr& f) {
  Collector c;
  c.visit(f);
  return c.bound;
}

namespace {

std::uint64_t saturatingAdd(std::uint64_t a, std::uint64_t b) {
  return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

std::uint64_t saturatingMul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

}  // namespace

std::uint64_t expandedSize(const TermPtr& t, int card) {
  switch (t->kind) {
    case Term::Kind::Prob:
    case Term::Kind::CondProb:
    case Term::Kind::Const: return 1;
    case Term::Kind::Neg: return expandedSize(t->lhs, card);
    case Term::Kind::Sum: return saturatingMul(static_cast<std::uint64_t>(card), expandedSize(t->lhs, card));
    default: return saturatingAdd(expandedSize(t->lhs, card), expandedSize(t->rhs, card));
  }
}

std::uint64_t expandedSize(const FormulaPtr& f, int card) {
  if (f->kind == Formula::Kind::Cmp) return saturatingAdd(expandedSize(f->left, card), expandedSize(f->right, card));
  std::uint64_t n = expandedSize(f->lhs, card);
  return f->rhs ? saturatingAdd(n, expandedSize(f->rhs, card)) : n;
}

CfPtr desugarNeq(const Intervention& iota1, const Intervention& iota2,
                 const std::string& var, int card) {
  CfPtr out;
  for (int d = 0; d < card; ++d) {
    CfPtr differs = cfAnd(leaf(iota1, atom(var, d)), leaf(iota2, propNot(atom(var, d))));
    out = out ? cfOr(out, differs) : differs;
  }
  return out;
}

}  // namespace causat
