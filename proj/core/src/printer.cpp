#include "causat/printer.hpp"

#include <cctype>

namespace causat {
namespace {

// Binding strengths; the right operand of a left-associative binary node
// needs a strictly stronger binding than the node itself.
constexpr int kOr = 1;
constexpr int kAnd = 2;
constexpr int kNot = 3;
constexpr int kAtom = 4;

constexpr int kAdd = 1;
constexpr int kNeg = 2;
constexpr int kMul = 3;
constexpr int kPrimary = 4;

std::string paren(const std::string& s) { return "(" + s + ")"; }

std::string valueText(const ValueRef& v) { return v.isDummy() ? v.dummy : std::to_string(v.value); }

int propStrength(const PropPtr& p) {
  switch (p->kind) {
    case Prop::Kind::Or: return kOr;
    case Prop::Kind::And: return kAnd;
    case Prop::Kind::Not: return kNot;
    case Prop::Kind::Atom: return kAtom;
  }
  return kAtom;
}

std::string prop(const PropPtr& p, int need) {
  std::string s;
  switch (p->kind) {
    case Prop::Kind::Atom: return p->var + "=" + valueText(p->value);
    case Prop::Kind::Not:
      s = "!" + (p->lhs->kind == Prop::Kind::Not ? prop(p->lhs, kNot) : paren(prop(p->lhs, 0)));
      break;
    case Prop::Kind::And: s = prop(p->lhs, kAnd) + " && " + prop(p->rhs, kAnd + 1); break;
    case Prop::Kind::Or: s = prop(p->lhs, kOr) + " || " + prop(p->rhs, kOr + 1); break;
  }
  return propStrength(p) < need ? paren(s) : s;
}

int cfStrength(const CfPtr& e) {
  switch (e->kind) {
    case Cf::Kind::Or: return kOr;
    case Cf::Kind::And: return kAnd;
    case Cf::Kind::Not: return kNot;
    case Cf::Kind::Leaf: return kAtom;
  }
  return kAtom;
}

std::string cf(const CfPtr& e, int need) {
  std::string s;
  switch (e->kind) {
    case Cf::Kind::Leaf: return printIntervention(e->intervention) + paren(prop(e->prop, 0));
    case Cf::Kind::Not:
      s = "!" + (e->lhs->kind == Cf::Kind::Not ? cf(e->lhs, kNot) : paren(cf(e->lhs, 0)));
      break;
    case Cf::Kind::And: s = cf(e->lhs, kAnd) + " && " + cf(e->rhs, kAnd + 1); break;
    case Cf::Kind::Or: s = cf(e->lhs, kOr) + " || " + cf(e->rhs, kOr + 1); break;
  }
  return cfStrength(e) < need ? paren(s) : s;
}

int termStrength(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Add:
    case Term::Kind::Sub: return kAdd;
    case Term::Kind::Neg: return kNeg;
    case Term::Kind::Mul: return kMul;
    default: return kPrimary;
  }
}

// `tail` is true when nothing of the enclosing term follows this subterm, so a
// Σ (which extends as far right as possible) may appear without parentheses.
std::string term(const TermPtr& t, int need, bool tail) {
  std::string s;
  switch (t->kind) {
    case Term::Kind::Prob: return "P(" + printEvent(t->event) + ")";
    case Term::Kind::CondProb: return "P(" + printEvent(t->event) + " | " + printEvent(t->condition) + ")";
    case Term::Kind::Const: return formatRational(t->value);
    case Term::Kind::Sum:
      s = "sum " + t->dummy + " . " + term(t->lhs, 0, true);
      return tail ? s : paren(s);
    case Term::Kind::Add:
    case Term::Kind::Sub: {
      bool inner = termStrength(t) >= need;
      s = term(t->lhs, kAdd, false) + (t->kind == Term::Kind::Add ? " + " : " - ") +
          term(t->rhs, kAdd + 1, inner ? tail : true);
      return inner ? s : paren(s);
    }
    case Term::Kind::Mul: {
      bool inner = kMul >= need;
      s = term(t->lhs, kMul, false) + " * " + term(t->rhs, kMul + 1, inner ? tail : true);
      return inner ? s : paren(s);
    }
    case Term::Kind::Neg: {
      bool inner = kNeg >= need;
      std::string operand = term(t->lhs, kNeg, inner ? tail : true);
      // A leading digit would fuse with the minus sign into a literal.
      if (!operand.empty() && std::isdigit(static_cast<unsigned char>(operand[0]))) {
        operand = paren(term(t->lhs, 0, true));
      }
      s = "-" + operand;
      return inner ? s : paren(s);
    }
  }
  return s;
}

int formulaStrength(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Or: return kOr;
    case Formula::Kind::And: return kAnd;
    case Formula::Kind::Not: return kNot;
    case Formula::Kind::Cmp: return kAtom;
  }
  return kAtom;
}

std::string formula(const FormulaPtr& f, int need) {
  std::string s;
  switch (f->kind) {
    case Formula::Kind::Cmp:
      return printTerm(f->left) + " " + printRelOp(f->op) + " " + printTerm(f->right);
    case Formula::Kind::Not: s = "NOT " + formula(f->lhs, kNot); break;
    case Formula::Kind::And: s = formula(f->lhs, kAnd) + " AND " + formula(f->rhs, kAnd + 1); break;
    case Formula::Kind::Or: s = formula(f->lhs, kOr) + " OR " + formula(f->rhs, kOr + 1); break;
  }
  return formulaStrength(f) < need ? paren(s) : s;
}

}  // namespace

std::string printIntervention(const Intervention& alpha) {
  std::string s = "[";
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (i > 0) s += ", ";
    s += alpha[i].var + "=" + valueText(alpha[i].value);
  }
  return s + "]";
}

std::string printProp(const PropPtr& p) { return prop(p, 0); }

std::string printEvent(const CfPtr& e) {
  if (e->kind == Cf::Kind::Leaf && e->intervention.empty()) return prop(e->prop, 0);
  return cf(e, 0);
}

std::string printTerm(const TermPtr& t) { return term(t, 0, true); }

std::string printRelOp(RelOp op) {
  switch (op) {
    case RelOp::Le: return "<=";
    case RelOp::Lt: return "<";
    case RelOp::Eq: return "=";
    case RelOp::Ne: return "!=";
    case RelOp::Ge: return ">=";
    case RelOp::Gt: return ">";
  }
  return "?";
}

std::string printFormula(const FormulaPtr& f) { return formula(f, 0); }

}  // namespace causat
