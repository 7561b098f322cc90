#include "gen.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace causat::testing {
namespace {

bool isObsLeaf(const CfPtr& e) { return e->kind == Cf::Kind::Leaf && e->intervention.empty(); }

// Connectives over purely observational leaves collapse into one leaf, the
// form the parser produces.
CfPtr join(Cf::Kind kind, const CfPtr& a, const CfPtr& b) {
  if (kind == Cf::Kind::Not) return isObsLeaf(a) ? obs(propNot(a->prop)) : cfNot(a);
  if (isObsLeaf(a) && isObsLeaf(b)) {
    return obs(kind == Cf::Kind::And ? propAnd(a->prop, b->prop) : propOr(a->prop, b->prop));
  }
  return kind == Cf::Kind::And ? cfAnd(a, b) : cfOr(a, b);
}

}  // namespace

ValueRef Generator::value(const std::vector<std::string>& dummies) {
  if (!dummies.empty() && below(2) == 0) return ValueRef::ofDummy(dummies[static_cast<std::size_t>(below(static_cast<int>(dummies.size())))]);
  return ValueRef::literal(below(cfg_.card));
}

PropPtr Generator::prop(int depth, const std::vector<std::string>& dummies) {
  const int pick = depth <= 0 ? 0 : below(5);
  if (pick <= 1) return atom(cfg_.vars[static_cast<std::size_t>(below(static_cast<int>(cfg_.vars.size())))], value(dummies));
  if (pick == 2) return propNot(prop(depth - 1, dummies));
  if (pick == 3) return propAnd(prop(depth - 1, dummies), prop(depth - 1, dummies));
  return propOr(prop(depth - 1, dummies), prop(depth - 1, dummies));
}

Intervention Generator::intervention(const std::vector<std::string>& dummies) {
  std::vector<std::string> pool = cfg_.vars;
  Intervention out;
  const int count = 1 + below(std::min<int>(2, static_cast<int>(pool.size())));
  for (int k = 0; k < count; ++k) {
    std::size_t i = static_cast<std::size_t>(below(static_cast<int>(pool.size())));
    out.push_back({pool[i], value(dummies)});
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return out;
}

CfPtr Generator::event(int depth, int layer, const std::vector<std::string>& dummies) {
  const int pick = depth <= 0 ? 0 : below(5);
  if (pick <= 1) {
    Intervention alpha;
    if (layer == 3 && below(3) != 0) alpha = intervention(dummies);
    return leaf(alpha, prop(1, dummies));
  }
  if (pick == 2) return join(Cf::Kind::Not, event(depth - 1, layer, dummies), nullptr);
  return join(pick == 3 ? Cf::Kind::And : Cf::Kind::Or, event(depth - 1, layer, dummies),
              event(depth - 1, layer, dummies));
}

TermPtr Generator::probability(const std::vector<std::string>& dummies) {
  const int layer = 1 + below(cfg_.maxLayer);
  const bool conditional = cfg_.conditionals && (forceCond_ || (!linearOnly() && below(3) == 0));
  if (layer == 2) {
    // One post-interventional leaf per argument, one shared intervention.
    Intervention alpha = intervention(dummies);
    CfPtr e = leaf(alpha, prop(cfg_.eventDepth, dummies));
    return conditional ? condProb(e, leaf(alpha, prop(cfg_.eventDepth - 1, dummies))) : prob(e);
  }
  CfPtr e = event(cfg_.eventDepth, layer, dummies);
  return conditional ? condProb(e, event(cfg_.eventDepth - 1, layer, dummies)) : prob(e);
}

TermPtr Generator::probability() { return probability({}); }

TermPtr Generator::constantTerm() {
  const int den = 1 + below(4);
  return constant(ratio(below(den + 1), den));
}

TermPtr Generator::term(int depth, int sums, std::vector<std::string>& dummies) {
  const bool lin = cfg_.arithmetic != Arithmetic::Base;
  const bool poly = cfg_.arithmetic == Arithmetic::Poly;
  const int pick = depth <= 0 ? below(2) : below(8);
  switch (pick) {
    case 0: return probability(dummies);
    case 1: return below(3) == 0 ? constantTerm() : probability(dummies);
    case 2:
    case 3:
      if (sums > 0) {
        std::string d = std::string(1, static_cast<char>('a' + dummies.size()));
        dummies.push_back(d);
        TermPtr body = term(depth - 1, sums - 1, dummies);
        dummies.pop_back();
        return sum(d, body);
      }
      return probability(dummies);
    case 4:
      if (lin) return add(term(depth - 1, sums, dummies), term(depth - 1, sums, dummies));
      return probability(dummies);
    case 5:
      if (lin) return below(2) ? sub(term(depth - 1, sums, dummies), term(depth - 1, sums, dummies))
                               : neg(term(depth - 1, sums, dummies));
      return probability(dummies);
    case 6:
      if (poly) return mul(term(depth - 1, sums, dummies), term(depth - 1, sums, dummies));
      if (lin) return mul(constantTerm(), term(depth - 1, sums, dummies));
      return probability(dummies);
    default:
      return probability(dummies);
  }
}

TermPtr Generator::term() {
  std::vector<std::string> dummies;
  return term(cfg_.termDepth, cfg_.maxSums, dummies);
}

FormulaPtr Generator::formula(int depth) {
  const int pick = depth <= 0 ? 0 : below(6);
  if (pick <= 2) {
    static constexpr RelOp ops[] = {RelOp::Le, RelOp::Lt, RelOp::Eq, RelOp::Ne, RelOp::Ge, RelOp::Gt};
    if (linearOnly() && cfg_.conditionals && below(4) == 0) {
      // Clearing the denominator keeps P(e | d) against a constant linear.
      forceCond_ = true;
      TermPtr left = probability();
      forceCond_ = false;
      return cmp(left, ops[below(6)], constantTerm());
    }
    TermPtr right = below(2) ? constantTerm() : term();
    return cmp(term(), ops[below(6)], right);
  }
  if (pick == 3) return fNot(formula(depth - 1));
  if (pick == 4) return fAnd(formula(depth - 1), formula(depth - 1));
  return fOr(formula(depth - 1), formula(depth - 1));
}

FormulaPtr Generator::formula() { return formula(cfg_.formulaDepth); }

std::vector<FormulaPtr> microCorpusL1() {
  const std::vector<PropPtr> events = {
      atom("X", 0), atom("X", 1), atom("Y", 0), atom("Y", 1),
      propAnd(atom("X", 0), atom("Y", 0)), propAnd(atom("X", 1), atom("Y", 1)),
      propOr(atom("X", 0), atom("Y", 1)), propAnd(atom("X", 0), atom("Y", 1)),
      propNot(propAnd(atom("X", 1), atom("Y", 0))),
  };
  const std::vector<Rational> consts = {0, ratio(1, 4), ratio(1, 3), ratio(1, 2), 1};
  const RelOp ops[] = {RelOp::Le, RelOp::Lt, RelOp::Eq, RelOp::Ne, RelOp::Ge, RelOp::Gt};
  std::vector<FormulaPtr> out;
  std::mt19937_64 rng(20240601);
  auto pick = [&rng](std::size_t k) { return static_cast<std::size_t>(rng() % k); };
  auto basic = [&]() -> TermPtr { return prob(obs(events[pick(events.size())])); };
  auto comparison = [&]() {
    if (pick(5) == 0) {
      TermPtr c = condProb(obs(events[pick(events.size())]), obs(events[pick(events.size())]));
      return cmp(c, ops[pick(6)], constant(consts[pick(consts.size())]));
    }
    if (pick(3) == 0) return cmp(basic(), ops[pick(6)], basic());
    return cmp(basic(), ops[pick(6)], constant(consts[pick(consts.size())]));
  };
  // Single comparisons against every constant with every operator.
  for (const auto& e : {events[0], events[4], events[6]}) {
    for (RelOp op : ops) {
      for (const auto& c : {consts[0], consts[3], consts[4]}) out.push_back(cmp(prob(obs(e)), op, constant(c)));
    }
  }
  while (out.size() < 130) {
    switch (pick(4)) {
      case 0: out.push_back(fAnd(comparison(), comparison())); break;
      case 1: out.push_back(fOr(comparison(), fNot(comparison()))); break;
      case 2: out.push_back(fAnd(fAnd(comparison(), comparison()), comparison())); break;
      default: out.push_back(fNot(fAnd(comparison(), fOr(comparison(), comparison())))); break;
    }
  }
  return out;
}

std::vector<JointTable> gridJoints(const std::vector<std::string>& vars, int card, int maxDen) {
  std::size_t cells = 1;
  for (std::size_t v = 0; v < vars.size(); ++v) cells *= static_cast<std::size_t>(card);
  std::vector<Assignment> xs;
  for (std::size_t idx = 0; idx < cells; ++idx) {
    Assignment x(vars.size());
    std::size_t rest = idx;
    for (std::size_t v = vars.size(); v-- > 0;) {
      x[v] = static_cast<int>(rest % static_cast<std::size_t>(card));
      rest /= static_cast<std::size_t>(card);
    }
    xs.push_back(x);
  }
  std::set<std::map<Assignment, Rational>> seen;
  std::vector<JointTable> out;
  for (int den = 1; den <= maxDen; ++den) {
    // Compositions of den into `cells` nonnegative parts.
    std::vector<int> parts(cells, 0);
    std::function<void(std::size_t, int)> fill = [&](std::size_t i, int left) {
      if (i + 1 == cells) {
        parts[i] = left;
        std::map<Assignment, Rational> entries;
        for (std::size_t q = 0; q < cells; ++q) {
          if (parts[q] > 0) entries[xs[q]] = ratio(parts[q], den);
        }
        if (seen.insert(entries).second) {
          JointTable jt;
          jt.domain = Domain{card};
          jt.xVars = vars;
          jt.entries = std::move(entries);
          out.push_back(std::move(jt));
        }
        return;
      }
      for (int v = 0; v <= left; ++v) {
        parts[i] = v;
        fill(i + 1, left - v);
      }
    };
    fill(0, den);
  }
  return out;
}

bool violatesDag(const Scm& scm, const Dag& g) {
  const std::size_t n = scm.xVars.size();
  const int c = scm.domain.card;
  for (std::size_t i = 0; i < n; ++i) {
    const Mechanism& m = scm.mechanisms[i];
    const int gi = g.indexOf(scm.xVars[i]);
    for (std::size_t k = 0; k < m.parents.size(); ++k) {
      const int gp = g.indexOf(scm.xVars[static_cast<std::size_t>(m.parents[k])]);
      if (g.hasEdge(gp, gi)) continue;
      // Does the table change with parent k for some context and some
      // exogenous support point?
      for (const auto& s : scm.exo.support) {
        std::size_t exoIndex = 0;
        std::size_t exoSize = 1;
        for (int e : m.exoArgs) {
          const auto card = static_cast<std::size_t>(scm.exo.vars[static_cast<std::size_t>(e)].card);
          exoIndex = exoIndex * card + static_cast<std::size_t>(s.values[static_cast<std::size_t>(e)]);
          exoSize *= card;
        }
        std::size_t rows = 1;
        for (std::size_t q = 0; q < m.parents.size(); ++q) rows *= static_cast<std::size_t>(c);
        std::size_t stride = 1;
        for (std::size_t q = k + 1; q < m.parents.size(); ++q) stride *= static_cast<std::size_t>(c);
        for (std::size_t r = 0; r < rows; ++r) {
          if ((r / stride) % static_cast<std::size_t>(c) != 0) continue;
          int base = m.table[r * exoSize + exoIndex];
          for (int d = 1; d < c; ++d) {
            if (m.table[(r + static_cast<std::size_t>(d) * stride) * exoSize + exoIndex] != base) return true;
          }
        }
      }
    }
  }
  return false;
}

std::vector<Dag> allDags(const std::vector<std::string>& vars) {
  const int n = static_cast<int>(vars.size());
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  }
  std::vector<Dag> out;
  // Each unordered pair: no edge, a->b or b->a.
  std::size_t total = 1;
  for (std::size_t k = 0; k < pairs.size(); ++k) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<std::pair<int, int>> edges;
    std::size_t rest = code;
    for (auto [a, b] : pairs) {
      int choice = static_cast<int>(rest % 3);
      rest /= 3;
      if (choice == 1) edges.emplace_back(a, b);
      if (choice == 2) edges.emplace_back(b, a);
    }
    try {
      out.emplace_back(vars, edges);
    } catch (const std::exception&) {
      // cyclic
    }
  }
  return out;
}

}  // namespace causat::testing
