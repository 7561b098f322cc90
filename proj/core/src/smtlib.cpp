#include "causat/smtlib.hpp"

#include <sstream>

#include "causat/classify.hpp"
#include "causat/constraints.hpp"
#include "causat/errors.hpp"

namespace causat {
namespace {

std::string smtInteger(const Integer& v) {
  if (v < 0) return "(- " + Integer(-v).get_str() + ".0)";
  return v.get_str() + ".0";
}

std::string smtProduct(const std::vector<std::string>& factors) {
  if (factors.empty()) return "1.0";
  if (factors.size() == 1) return factors.front();
  std::string out = "(*";
  for (const auto& f : factors) out += " " + f;
  return out + ")";
}

std::string smtPolynomial(const Polynomial& p, const std::vector<std::string>& names) {
  if (p.isZero()) return "0.0";
  std::vector<std::string> terms;
  for (const auto& [mono, coeff] : p.terms()) {
    std::vector<std::string> factors;
    bool unit = coeff == 1;
    if (!unit) factors.push_back(smtReal(coeff));
    for (std::size_t i = 0; i < mono.size(); ++i) {
      for (int e = 0; e < mono[i]; ++e) factors.push_back(names[i]);
    }
    terms.push_back(smtProduct(factors));
  }
  if (terms.size() == 1) return terms.front();
  std::string out = "(+";
  for (const auto& t : terms) out += " " + t;
  return out + ")";
}

const char* smtOp(RelOp op) {
  switch (op) {
    case RelOp::Le: return "<=";
    case RelOp::Lt: return "<";
    case RelOp::Eq: return "=";
    case RelOp::Ge: return ">=";
    case RelOp::Gt: return ">";
    case RelOp::Ne: return "distinct";
  }
  return "=";
}

RelOp negated(RelOp op) {
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

std::string junction(const char* op, const std::vector<std::string>& parts) {
  const bool isAnd = std::string(op) == "and";
  std::vector<std::string> kept;
  for (const auto& p : parts) {
    if (p == (isAnd ? "false" : "true")) return p;
    if (p != (isAnd ? "true" : "false")) kept.push_back(p);
  }
  if (kept.empty()) return isAnd ? "true" : "false";
  if (kept.size() == 1) return kept.front();
  std::string out = std::string("(") + op;
  for (const auto& k : kept) out += " " + k;
  return out + ")";
}

struct Guarded {
  Polynomial num;
  Polynomial den;
  std::vector<Polynomial> guards;  // each > 0
  bool undefined = false;
};

// Emits the formula over weighted points; tracks the maximal degree.
class Emitter {
 public:
  Emitter(const CompiledFormula& f, const std::vector<SupportPointModel>& points, int k,
          const std::vector<std::string>& names)
      : f_(f), points_(points), k_(k), names_(names) {}

  std::string formula(int i, bool want) {
    const auto& node = f_.formulas[static_cast<std::size_t>(i)];
    switch (node.kind) {
      case Formula::Kind::Cmp: {
        Guarded l = term(node.a);
        Guarded r = term(node.b);
        if (l.undefined || r.undefined) return "false";
        std::vector<std::string> parts;
        for (const auto* side : {&l, &r}) {
          for (const auto& g : side->guards) parts.push_back(atom(g, RelOp::Gt));
        }
        parts.push_back(atom(l.num * r.den - r.num * l.den, want ? node.op : negated(node.op)));
        return junction("and", parts);
      }
      case Formula::Kind::Not:
        return formula(node.a, !want);
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        bool conj = (node.kind == Formula::Kind::And) == want;
        return junction(conj ? "and" : "or", {formula(node.a, want), formula(node.b, want)});
      }
    }
    return "false";
  }

  int maxDegree() const { return maxDegree_; }

 private:
  std::string atom(const Polynomial& p, RelOp op) {
    if (p.isConstant()) return holds(p.constantTerm(), op) ? "true" : "false";
    maxDegree_ = std::max(maxDegree_, p.degree());
    return std::string("(") + smtOp(op) + " " + smtPolynomial(p, names_) + " 0.0)";
  }

  Polynomial probability(int e, int given) const {
    Polynomial total(k_);
    for (const auto& pt : points_) {
      if (f_.eventHolds(e, pt.signature) && (given < 0 || f_.eventHolds(given, pt.signature))) total += pt.probability;
    }
    return total;
  }

  Guarded term(int i) {
    const auto& node = f_.terms[static_cast<std::size_t>(i)];
    const Polynomial one = Polynomial::constant(k_, 1);
    switch (node.kind) {
      case Term::Kind::Prob:
        return {probability(node.event, -1), one, {}};
      case Term::Kind::CondProb: {
        Polynomial den = probability(node.condition, -1);
        if (den.isZero()) return {one, one, {}, true};
        Guarded g{probability(node.event, node.condition), den, {}};
        if (!den.isConstant()) g.guards.push_back(den);
        return g;
      }
      case Term::Kind::Const:
        return {Polynomial::constant(k_, node.value), one, {}};
      case Term::Kind::Neg: {
        Guarded a = term(node.a);
        a.num = -a.num;
        return a;
      }
      case Term::Kind::Add:
      case Term::Kind::Sub:
      case Term::Kind::Mul: {
        Guarded a = term(node.a);
        Guarded b = term(node.b);
        Guarded out;
        out.undefined = a.undefined || b.undefined;
        if (out.undefined) return {one, one, {}, true};
        out.guards = a.guards;
        out.guards.insert(out.guards.end(), b.guards.begin(), b.guards.end());
        out.den = a.den * b.den;
        if (node.kind == Term::Kind::Mul) {
          out.num = a.num * b.num;
        } else if (node.kind == Term::Kind::Add) {
          out.num = a.num * b.den + b.num * a.den;
        } else {
          out.num = a.num * b.den - b.num * a.den;
        }
        return out;
      }
      case Term::Kind::Sum:
        break;
    }
    throw ConfigError("unexpanded sum");
  }

  const CompiledFormula& f_;
  const std::vector<SupportPointModel>& points_;
  int k_;
  const std::vector<std::string>& names_;
  int maxDegree_ = 0;
};

std::string declarations(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += "(declare-fun " + n + " () Real)\n";
  return out;
}

std::string sumOf(const std::vector<std::string>& names) {
  if (names.size() == 1) return names.front();
  std::string out = "(+";
  for (const auto& n : names) out += " " + n;
  return out + ")";
}

std::string boundsAssert(const std::vector<std::string>& names, const char* op) {
  std::vector<std::string> parts;
  for (const auto& n : names) parts.push_back(std::string("(") + op + " " + n + " 0.0)");
  return "(assert " + junction("and", parts) + ")\n";
}

std::string logicFor(int degree) { return degree <= 1 ? "QF_LRA" : "QF_NRA"; }

std::string exportJoint(const FormulaPtr& f, const SolveConfig& cfg) {
  if (classify(f).layer != 1) throw ConfigError("joint-table export needs a layer-1 formula");
  const CompiledFormula cf = compileFormula(f, cfg.vars, cfg.domain.card, cfg.sumBudget);
  const std::size_t n = cfg.vars.size();
  std::vector<Assignment> xs;
  Assignment x(n, 0);
  while (true) {
    xs.push_back(x);
    std::size_t v = n;
    while (v > 0 && x[v - 1] + 1 == cfg.domain.card) x[--v] = 0;
    if (v == 0) break;
    ++x[v - 1];
  }
  const int k = static_cast<int>(xs.size());
  std::vector<std::string> names;
  std::vector<SupportPointModel> points;
  for (int j = 0; j < k; ++j) {
    const auto& a = xs[static_cast<std::size_t>(j)];
    names.push_back(jointVariableName(a));
    std::vector<Assignment> worlds(cf.worlds.size(), a);
    points.push_back({cf.signature(worlds), Polynomial::variable(k, j)});
  }
  Emitter emitter(cf, points, k, names);
  std::string body = emitter.formula(cf.root, true);

  std::ostringstream os;
  os << "; joint-table encoding over " << k << " unknowns\n";
  os << "; p_<v1>_..._<vn> = P(";
  for (std::size_t v = 0; v < n; ++v) os << (v ? ", " : "") << cfg.vars[v] << "=v" << v + 1;
  os << ")\n";
  os << "(set-logic " << logicFor(emitter.maxDegree()) << ")\n";
  os << declarations(names);
  os << boundsAssert(names, ">=");
  os << "(assert (= " << sumOf(names) << " 1.0))\n";
  os << "(assert " << body << ")\n";
  os << "(check-sat)\n(get-model)\n";
  return os.str();
}

Assignment evaluateCandidate(const CandidateStructure& s, std::size_t j, const std::vector<int>& forced, int card) {
  const auto& row = s.rows[j];
  Assignment x(row.size(), 0);
  for (int v : s.order.order) {
    const auto idx = static_cast<std::size_t>(v);
    if (forced[idx] >= 0) {
      x[idx] = forced[idx];
      continue;
    }
    std::size_t r = 0;
    for (int p : s.order.parents[idx]) r = r * static_cast<std::size_t>(card) + static_cast<std::size_t>(x[static_cast<std::size_t>(p)]);
    x[idx] = row[idx][r];
  }
  return x;
}

std::string exportPerStructure(const FormulaPtr& f, const SolveConfig& cfg) {
  const CompiledFormula cf = compileFormula(f, cfg.vars, cfg.domain.card, cfg.sumBudget);
  std::vector<std::vector<int>> forced;
  for (const auto& w : cf.worlds) {
    std::vector<int> arr(cfg.vars.size(), -1);
    for (auto [v, value] : w) arr[static_cast<std::size_t>(v)] = value;
    forced.push_back(std::move(arr));
  }
  std::ostringstream problems;
  int maxDegree = 0;
  std::size_t index = 0;
  EnumerationSummary summary = enumerateStructures(cfg, [&](const CandidateStructure& s) {
    const int k = static_cast<int>(s.rows.size());
    std::vector<std::string> names;
    std::vector<SupportPointModel> points;
    for (int j = 0; j < k; ++j) {
      names.push_back("q_" + std::to_string(j + 1));
      std::vector<Assignment> worlds;
      for (const auto& arr : forced) worlds.push_back(evaluateCandidate(s, static_cast<std::size_t>(j), arr, cfg.domain.card));
      points.push_back({cf.signature(worlds), Polynomial::variable(k, j)});
    }
    Emitter emitter(cf, points, k, names);
    std::string body = emitter.formula(cf.root, true);
    maxDegree = std::max(maxDegree, emitter.maxDegree());
    problems << "; structure " << ++index << ", order";
    for (int v : s.order.order) problems << ' ' << cfg.vars[static_cast<std::size_t>(v)];
    problems << '\n';
    for (int j = 0; j < k; ++j) {
      problems << ";   q_" << j + 1 << ":";
      for (std::size_t v = 0; v < cfg.vars.size(); ++v) {
        problems << ' ' << cfg.vars[v] << "=[";
        const auto& table = s.rows[static_cast<std::size_t>(j)][v];
        for (std::size_t r = 0; r < table.size(); ++r) problems << (r ? "," : "") << table[r];
        problems << ']';
      }
      problems << '\n';
    }
    problems << "(push 1)\n" << declarations(names) << boundsAssert(names, ">");
    problems << "(assert (= " << sumOf(names) << " 1.0))\n";
    problems << "(assert " << body << ")\n(check-sat)\n(pop 1)\n";
    return true;
  });
  std::ostringstream os;
  os << "; per-structure encoding: " << summary.count << " problems"
     << (summary.truncated ? " (truncated by the structure limit)" : "") << "\n";
  os << "(set-logic " << logicFor(maxDegree) << ")\n";
  os << problems.str();
  return os.str();
}

}  // namespace

std::string smtReal(const Rational& value) {
  if (value.get_den() == 1) return smtInteger(value.get_num());
  std::string out = "(/ " + Integer(abs(value.get_num())).get_str() + ".0 " + value.get_den().get_str() + ".0)";
  return value < 0 ? "(- " + out + ")" : out;
}

std::string jointVariableName(const Assignment& x) {
  std::string out = "p";
  for (int v : x) out += "_" + std::to_string(v);
  return out;
}

std::string exportModeName(ExportMode m) { return m == ExportMode::JointTable ? "joint-table" : "per-structure"; }

ExportMode parseExportMode(const std::string& name) {
  if (name == "joint-table") return ExportMode::JointTable;
  if (name == "per-structure") return ExportMode::PerStructure;
  throw ConfigError("unknown export mode '" + name + "'");
}

std::string exportSmtLib(const FormulaPtr& f, const SolveConfig& cfg, ExportMode mode) {
  validateConfig(cfg);
  return mode == ExportMode::JointTable ? exportJoint(f, cfg) : exportPerStructure(f, cfg);
}

}  // namespace causat
