#include "causat/classify.hpp"

#include <algorithm>
#include <set>

namespace causat {
namespace {

using World = std::vector<std::pair<std::string, ValueRef>>;

World worldOf(const Intervention& alpha) {
  World w;
  for (const auto& it : alpha) w.emplace_back(it.var, it.value);
  std::sort(w.begin(), w.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    if (a.second.dummy != b.second.dummy) return a.second.dummy < b.second.dummy;
    return a.second.value < b.second.value;
  });
  return w;
}

void collectWorlds(const CfPtr& e, std::vector<World>& out) {
  if (e->kind == Cf::Kind::Leaf) {
    World w = worldOf(e->intervention);
    if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(std::move(w));
    return;
  }
  collectWorlds(e->lhs, out);
  if (e->rhs) collectWorlds(e->rhs, out);
}

bool probabilityFree(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Prob:
    case Term::Kind::CondProb: return false;
    case Term::Kind::Const: return true;
    case Term::Kind::Neg:
    case Term::Kind::Sum: return probabilityFree(t->lhs);
    default: return probabilityFree(t->lhs) && probabilityFree(t->rhs);
  }
}

void visit(const TermPtr& t, Classification& c) {
  auto raise = [&](Arithmetic a) { c.arithmetic = std::max(c.arithmetic, a); };
  switch (t->kind) {
    case Term::Kind::Prob:
      c.layer = std::max(c.layer, eventLayer(t->event));
      return;
    case Term::Kind::CondProb:
      c.usesCond = true;
      c.layer = std::max(c.layer, eventLayer(t->event, t->condition));
      return;
    case Term::Kind::Const: return;
    case Term::Kind::Sum:
      c.usesSum = true;
      visit(t->lhs, c);
      return;
    case Term::Kind::Neg:
      raise(Arithmetic::Lin);
      visit(t->lhs, c);
      return;
    case Term::Kind::Add:
    case Term::Kind::Sub:
      raise(Arithmetic::Lin);
      break;
    case Term::Kind::Mul:
      raise(probabilityFree(t->lhs) || probabilityFree(t->rhs) ? Arithmetic::Lin : Arithmetic::Poly);
      break;
  }
  visit(t->lhs, c);
  visit(t->rhs, c);
}

void visit(const FormulaPtr& f, Classification& c) {
  if (f->kind == Formula::Kind::Cmp) {
    visit(f->left, c);
    visit(f->right, c);
    return;
  }
  visit(f->lhs, c);
  if (f->rhs) visit(f->rhs, c);
}

}  // namespace

int eventLayer(const CfPtr& e, const CfPtr& d) {
  std::vector<World> worlds;
  collectWorlds(e, worlds);
  if (d) collectWorlds(d, worlds);
  if (worlds.size() == 1 && worlds.front().empty()) return 1;
  // Layer 2 admits a single post-interventional leaf, conditioned on at most
  // one more leaf in the same world.
  const bool singleLeaves = e->kind == Cf::Kind::Leaf && (!d || d->kind == Cf::Kind::Leaf);
  return singleLeaves && worlds.size() == 1 ? 2 : 3;
}

Classification classify(const FormulaPtr& f) {
  Classification c;
  visit(f, c);
  return c;
}

Classification classifyTerm(const TermPtr& t) {
  Classification c;
  visit(t, c);
  return c;
}

std::string arithmeticName(Arithmetic a) {
  switch (a) {
    case Arithmetic::Base: return "base";
    case Arithmetic::Lin: return "lin";
    case Arithmetic::Poly: return "poly";
  }
  return "?";
}

std::string describe(const Classification& c) {
  std::string s = "L" + std::to_string(c.layer) + " " + arithmeticName(c.arithmetic);
  if (c.usesSum) s += "<sum>";
  if (c.usesCond) s += " cond";
  return s;
}

}  // namespace causat
