#include "causat/model.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "causat/errors.hpp"

namespace causat {
namespace {

std::vector<int> kahnOrder(std::size_t n,
                           const std::vector<std::vector<int>>& parentsOf) {
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> children(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (int p : parentsOf[v]) {
      children[static_cast<std::size_t>(p)].push_back(static_cast<int>(v));
      ++indegree[v];
    }
  }
  std::set<int> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.insert(static_cast<int>(v));
  }
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    int v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (int ch : children[static_cast<std::size_t>(v)]) {
      if (--indegree[static_cast<std::size_t>(ch)] == 0) ready.insert(ch);
    }
  }
  return order;  // shorter than n iff cyclic
}

std::size_t tableSize(const Scm& scm, const Mechanism& m) {
  std::size_t size = 1;
  for (std::size_t i = 0; i < m.parents.size(); ++i) {
    size *= static_cast<std::size_t>(scm.domain.card);
  }
  for (int e : m.exoArgs) {
    size *= static_cast<std::size_t>(scm.exo.vars[static_cast<std::size_t>(e)].card);
  }
  return size;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dag

Dag::Dag(std::vector<std::string> vars, std::vector<std::pair<int, int>> edges)
    : vars_(std::move(vars)), edges_(std::move(edges)) {
  std::set<std::string> names(vars_.begin(), vars_.end());
  if (names.size() != vars_.size()) throw ModelError("duplicate DAG variable");
  const int n = static_cast<int>(vars_.size());
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw ModelError("duplicate DAG edge");
  }
  std::vector<std::vector<int>> parentsOf(vars_.size());
  for (auto [from, to] : edges_) {
    if (from < 0 || from >= n || to < 0 || to >= n) {
      throw ModelError("DAG edge endpoint out of range");
    }
    if (from == to) throw ModelError("self-loop on " + vars_[static_cast<std::size_t>(from)]);
    parentsOf[static_cast<std::size_t>(to)].push_back(from);
  }
  order_ = kahnOrder(vars_.size(), parentsOf);
  if (order_.size() != vars_.size()) throw ModelError("graph has a cycle");
}

Dag Dag::fromNames(std::vector<std::string> vars,
                   const std::vector<std::pair<std::string, std::string>>& edges) {
  std::vector<std::pair<int, int>> indexed;
  indexed.reserve(edges.size());
  auto find = [&](const std::string& name) {
    auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end()) throw ModelError("unknown DAG variable '" + name + "'");
    return static_cast<int>(it - vars.begin());
  };
  for (const auto& [from, to] : edges) indexed.emplace_back(find(from), find(to));
  return Dag(std::move(vars), std::move(indexed));
}

Dag Dag::complete(std::vector<std::string> vars) {
  std::vector<std::pair<int, int>> edges;
  const int n = static_cast<int>(vars.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return Dag(std::move(vars), std::move(edges));
}

std::vector<int> Dag::parents(int child) const {
  std::vector<int> result;
  for (auto [from, to] : edges_) {
    if (to == child) result.push_back(from);
  }
  std::sort(result.begin(), result.end());
  return result;
}

bool Dag::hasEdge(int parent, int child) const {
  return std::binary_search(edges_.begin(), edges_.end(), std::pair{parent, child});
}

int Dag::indexOf(std::string_view name) const {
  auto it = std::find(vars_.begin(), vars_.end(), name);
  return it == vars_.end() ? -1 : static_cast<int>(it - vars_.begin());
}

bool Dag::reaches(int from, int v) const {
  std::vector<int> stack{from};
  std::vector<bool> seen(vars_.size(), false);
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    for (auto [a, b] : edges_) {
      if (a != cur || seen[static_cast<std::size_t>(b)]) continue;
      if (b == v) return true;
      seen[static_cast<std::size_t>(b)] = true;
      stack.push_back(b);
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Scm / JointTable helpers

int Scm::indexOf(std::string_view name) const {
  auto it = std::find(xVars.begin(), xVars.end(), name);
  return it == xVars.end() ? -1 : static_cast<int>(it - xVars.begin());
}

Rational JointTable::probability(const Assignment& x) const {
  auto it = entries.find(x);
  return it == entries.end() ? Rational(0) : it->second;
}

std::vector<int> recursiveOrder(const Scm& scm) {
  const std::size_t n = scm.xVars.size();
  if (scm.mechanisms.size() != n) throw ModelError("one mechanism per variable required");
  std::vector<std::vector<int>> parentsOf(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int p : scm.mechanisms[i].parents) {
      if (p < 0 || static_cast<std::size_t>(p) >= n) throw ModelError("parent index out of range");
    }
    parentsOf[i] = scm.mechanisms[i].parents;
  }
  auto order = kahnOrder(n, parentsOf);
  if (order.size() != n) throw ModelError("not recursive");
  return order;
}

Assignment evaluateEndogenous(const Scm& scm, std::span<const int> u,
                              std::span<const int> order) {
  Assignment x(scm.xVars.size(), 0);
  for (int i : order) {
    const Mechanism& m = scm.mechanisms[static_cast<std::size_t>(i)];
    std::size_t index = 0;
    for (int p : m.parents) {
      index = index * static_cast<std::size_t>(scm.domain.card) +
              static_cast<std::size_t>(x[static_cast<std::size_t>(p)]);
    }
    for (int e : m.exoArgs) {
      index = index * static_cast<std::size_t>(scm.exo.vars[static_cast<std::size_t>(e)].card) +
              static_cast<std::size_t>(u[static_cast<std::size_t>(e)]);
    }
    x[static_cast<std::size_t>(i)] = m.table[index];
  }
  return x;
}

Assignment evaluateEndogenous(const Scm& scm, std::span<const int> u) {
  auto order = recursiveOrder(scm);
  return evaluateEndogenous(scm, u, order);
}

Scm applyIntervention(const Scm& scm,
                      std::span<const std::pair<int, int>> interventions) {
  Scm result = scm;
  std::set<int> seen;
  for (auto [var, value] : interventions) {
    if (var < 0 || static_cast<std::size_t>(var) >= scm.xVars.size()) {
      throw ModelError("intervention on unknown variable index " + std::to_string(var));
    }
    if (!seen.insert(var).second) {
      throw ModelError("duplicate intervention on " + scm.xVars[static_cast<std::size_t>(var)]);
    }
    if (!scm.domain.contains(value)) {
      throw ModelError("intervention value " + std::to_string(value) + " outside Val for " +
                       scm.xVars[static_cast<std::size_t>(var)]);
    }
    result.mechanisms[static_cast<std::size_t>(var)] = Mechanism{var, {}, {}, {value}};
  }
  return result;
}

Scm applyIntervention(const Scm& scm,
                      const std::vector<std::pair<std::string, int>>& interventions) {
  std::vector<std::pair<int, int>> indexed;
  for (const auto& [name, value] : interventions) {
    int idx = scm.indexOf(name);
    if (idx < 0) throw ModelError("intervention on unknown variable '" + name + "'");
    indexed.emplace_back(idx, value);
  }
  return applyIntervention(scm, indexed);
}

JointTable jointDistribution(const Scm& scm) {
  JointTable jt{scm.domain, scm.xVars, {}};
  auto order = recursiveOrder(scm);
  for (const auto& point : scm.exo.support) {
    jt.entries[evaluateEndogenous(scm, point.values, order)] += point.prob;
  }
  std::erase_if(jt.entries, [](const auto& kv) { return sgn(kv.second) == 0; });
  return jt;
}

JointTable bnJointDistribution(const Bn& bn) {
  const std::size_t n = bn.dag.size();
  const int c = bn.domain.card;
  JointTable jt{bn.domain, bn.dag.vars(), {}};
  std::vector<std::vector<int>> parents(n);
  for (std::size_t i = 0; i < n; ++i) parents[i] = bn.dag.parents(static_cast<int>(i));
  Assignment x(n, 0);
  while (true) {
    Rational prob = 1;
    for (std::size_t i = 0; i < n && sgn(prob) != 0; ++i) {
      std::size_t row = 0;
      for (int p : parents[i]) row = row * static_cast<std::size_t>(c) + static_cast<std::size_t>(x[static_cast<std::size_t>(p)]);
      prob *= bn.cpts[i][row][static_cast<std::size_t>(x[i])];
    }
    if (sgn(prob) != 0) jt.entries.emplace(x, prob);
    std::size_t k = n;
    while (k > 0 && ++x[k - 1] == c) x[--k] = 0;
    if (k == 0) break;
  }
  return jt;
}

JointTable marginalize(const JointTable& table, const std::vector<std::string>& keep) {
  std::vector<std::size_t> idx;
  for (const auto& name : keep) {
    auto it = std::find(table.xVars.begin(), table.xVars.end(), name);
    if (it == table.xVars.end()) throw ModelError("unknown variable '" + name + "'");
    idx.push_back(static_cast<std::size_t>(it - table.xVars.begin()));
  }
  JointTable out{table.domain, keep, {}};
  for (const auto& [x, p] : table.entries) {
    Assignment key;
    key.reserve(idx.size());
    for (std::size_t i : idx) key.push_back(x[i]);
    out.entries[key] += p;
  }
  return out;
}

Bn bnFromJoint(const JointTable& table, const Dag& dag) {
  if (dag.vars() != table.xVars) throw ModelError("DAG and table variables differ");
  const int c = table.domain.card;
  Bn bn{dag, table.domain, {}};
  for (std::size_t i = 0; i < dag.size(); ++i) {
    auto parents = dag.parents(static_cast<int>(i));
    std::size_t rows = 1;
    for (std::size_t k = 0; k < parents.size(); ++k) rows *= static_cast<std::size_t>(c);
    std::vector<std::vector<Rational>> mass(rows, std::vector<Rational>(static_cast<std::size_t>(c)));
    for (const auto& [x, p] : table.entries) {
      std::size_t row = 0;
      for (int q : parents) row = row * static_cast<std::size_t>(c) + static_cast<std::size_t>(x[static_cast<std::size_t>(q)]);
      mass[row][static_cast<std::size_t>(x[i])] += p;
    }
    for (auto& row : mass) {
      Rational total = std::accumulate(row.begin(), row.end(), Rational(0));
      for (auto& v : row) v = sgn(total) == 0 ? ratio(1, c) : Rational(v / total);
    }
    bn.cpts.push_back(std::move(mass));
  }
  return bn;
}

std::size_t countSupportU(const Scm& scm) {
  return static_cast<std::size_t>(std::count_if(
      scm.exo.support.begin(), scm.exo.support.end(),
      [](const SupportPoint& s) { return sgn(s.prob) > 0; }));
}

std::size_t countSupportX(const Scm& scm) { return jointDistribution(scm).entries.size(); }

Scm liftJointToScm(const JointTable& jt) {
  Scm scm;
  scm.domain = jt.domain;
  scm.xVars = jt.xVars;
  scm.exo.mode = ExogenousMode::SemiMarkovian;
  std::vector<int> identity(static_cast<std::size_t>(jt.domain.card));
  std::iota(identity.begin(), identity.end(), 0);
  for (std::size_t i = 0; i < jt.xVars.size(); ++i) {
    scm.exo.vars.push_back({"U_" + jt.xVars[i], jt.domain.card});
    scm.mechanisms.push_back(Mechanism{static_cast<int>(i), {}, {static_cast<int>(i)}, identity});
  }
  for (const auto& [x, p] : jt.entries) {
    if (sgn(p) > 0) scm.exo.support.push_back({x, p});
  }
  return scm;
}

std::vector<Violation> validateScm(const Scm& scm) {
  using K = Violation::Kind;
  std::vector<Violation> out;
  auto add = [&](K kind, std::string msg) { out.push_back({kind, std::move(msg)}); };

  if (scm.domain.card < 1) add(K::DomainTooSmall, "domain cardinality must be positive");
  if (std::set<std::string>(scm.xVars.begin(), scm.xVars.end()).size() != scm.xVars.size()) {
    add(K::DuplicateVariable, "duplicate endogenous variable name");
  }
  std::set<std::string> exoNames;
  for (const auto& v : scm.exo.vars) {
    if (!exoNames.insert(v.name).second) add(K::DuplicateVariable, "duplicate exogenous variable " + v.name);
    if (v.card < 1) add(K::ExoCardinality, "exogenous variable " + v.name + " has no values");
  }
  const std::size_t n = scm.xVars.size();
  const std::size_t m = scm.exo.vars.size();
  bool structural = true;
  if (scm.mechanisms.size() != n) {
    add(K::MechanismCount, "expected one mechanism per endogenous variable");
    structural = false;
  }
  for (std::size_t i = 0; structural && i < n; ++i) {
    const auto& mech = scm.mechanisms[i];
    const std::string where = "mechanism " + scm.xVars[i];
    if (mech.target != static_cast<int>(i)) add(K::MechanismTarget, where + ": target mismatch");
    std::set<int> seen;
    for (int p : mech.parents) {
      if (p < 0 || static_cast<std::size_t>(p) >= n || p == static_cast<int>(i) || !seen.insert(p).second) {
        add(K::BadParent, where + ": invalid parent index " + std::to_string(p));
        structural = false;
      }
    }
    seen.clear();
    for (int e : mech.exoArgs) {
      if (e < 0 || static_cast<std::size_t>(e) >= m || !seen.insert(e).second) {
        add(K::BadExoArg, where + ": invalid exogenous argument " + std::to_string(e));
        structural = false;
      }
    }
    if (!structural || scm.domain.card < 1) continue;
    bool cardsOk = std::all_of(mech.exoArgs.begin(), mech.exoArgs.end(),
                               [&](int e) { return scm.exo.vars[static_cast<std::size_t>(e)].card >= 1; });
    if (cardsOk && mech.table.size() != tableSize(scm, mech)) {
      add(K::TableSize, where + ": table has " + std::to_string(mech.table.size()) + " entries, expected " +
                            std::to_string(tableSize(scm, mech)));
    }
    for (int v : mech.table) {
      if (!scm.domain.contains(v)) {
        add(K::TableValue, where + ": table value " + std::to_string(v) + " outside Val");
        break;
      }
    }
  }
  if (structural) {
    try {
      recursiveOrder(scm);
    } catch (const ModelError&) {
      add(K::NotRecursive, "not recursive");
    }
  }

  std::set<Assignment> tuples;
  Rational total = 0;
  bool supportOk = true;
  for (std::size_t s = 0; s < scm.exo.support.size(); ++s) {
    const auto& point = scm.exo.support[s];
    const std::string where = "support point " + std::to_string(s);
    if (point.values.size() != m) {
      add(K::SupportArity, where + ": wrong arity");
      supportOk = false;
      continue;
    }
    for (std::size_t k = 0; k < m; ++k) {
      if (point.values[k] < 0 || point.values[k] >= scm.exo.vars[k].card) {
        add(K::SupportValue, where + ": value outside the domain of " + scm.exo.vars[k].name);
        supportOk = false;
      }
    }
    if (!tuples.insert(point.values).second) {
      add(K::DuplicateSupport, where + ": duplicate tuple");
      supportOk = false;
    }
    if (sgn(point.prob) <= 0) {
      add(K::NonPositiveProbability, where + ": probability must be positive");
      supportOk = false;
    }
    total += point.prob;
  }
  if (total != 1) add(K::SupportSum, "support sum ≠ 1");

  if (scm.exo.mode == ExogenousMode::Markovian && structural && supportOk) {
    // Blocks: exogenous arguments of each mechanism; unread variables alone.
    std::vector<int> owner(m, -1);
    bool disjoint = true;
    for (std::size_t i = 0; i < n; ++i) {
      for (int e : scm.mechanisms[i].exoArgs) {
        auto& o = owner[static_cast<std::size_t>(e)];
        if (o != -1 && o != static_cast<int>(i)) {
          add(K::MarkovianSharedExo, "exogenous " + scm.exo.vars[static_cast<std::size_t>(e)].name +
                                         " is shared between mechanisms");
          disjoint = false;
        }
        o = static_cast<int>(i);
      }
    }
    if (disjoint) {
      std::map<int, std::vector<std::size_t>> blocks;
      for (std::size_t k = 0; k < m; ++k) {
        blocks[owner[k] == -1 ? -1 - static_cast<int>(k) : owner[k]].push_back(k);
      }
      std::vector<std::map<Assignment, Rational>> marginals;
      std::vector<std::vector<std::size_t>> blockVars;
      for (auto& [key, vars] : blocks) {
        std::map<Assignment, Rational> marg;
        for (const auto& point : scm.exo.support) {
          Assignment sub;
          for (std::size_t k : vars) sub.push_back(point.values[k]);
          marg[sub] += point.prob;
        }
        marginals.push_back(std::move(marg));
        blockVars.push_back(vars);
      }
      std::size_t productSize = 1;
      for (const auto& marg : marginals) productSize *= marg.size();
      bool product = productSize == scm.exo.support.size();
      for (const auto& point : scm.exo.support) {
        if (!product) break;
        Rational expected = 1;
        for (std::size_t b = 0; b < marginals.size(); ++b) {
          Assignment sub;
          for (std::size_t k : blockVars[b]) sub.push_back(point.values[k]);
          expected *= marginals[b].at(sub);
        }
        product = expected == point.prob;
      }
      if (!product) add(K::MarkovianNotProduct, "Markovian support is not a product of block marginals");
    }
  }
  return out;
}

void requireValid(const Scm& scm) {
  auto violations = validateScm(scm);
  if (violations.empty()) return;
  std::string msg = "invalid SCM:";
  for (const auto& v : violations) msg += "\n  " + v.message;
  throw ModelError(msg);
}

Scm randomScm(std::uint64_t seed, int n, int c, int p, const std::optional<Dag>& dag) {
  if (n < 1 || c < 1 || p < 1) throw ModelError("randomScm needs n, c, p >= 1");
  if (dag && static_cast<int>(dag->size()) != n) throw ModelError("DAG size differs from n");
  std::mt19937_64 rng(seed);
  // Raw engine output only: distributions are not reproducible across
  // standard library implementations.
  auto below = [&rng](std::uint64_t k) { return static_cast<int>(rng() % k); };

  Scm scm;
  scm.domain = Domain{c};
  for (int i = 0; i < n; ++i) {
    scm.xVars.push_back(dag ? dag->vars()[static_cast<std::size_t>(i)] : "X" + std::to_string(i + 1));
  }
  const int k = 1 + below(static_cast<std::uint64_t>(p));
  scm.exo.mode = ExogenousMode::SemiMarkovian;
  scm.exo.vars.push_back({"U", k});
  std::vector<int> weights;
  int weightSum = 0;
  for (int j = 0; j < k; ++j) {
    weights.push_back(1 + below(9));
    weightSum += weights.back();
  }
  for (int j = 0; j < k; ++j) {
    scm.exo.support.push_back({{j}, ratio(weights[static_cast<std::size_t>(j)], weightSum)});
  }
  for (int i = 0; i < n; ++i) {
    Mechanism mech;
    mech.target = i;
    if (dag) {
      mech.parents = dag->parents(i);
    } else {
      for (int j = 0; j < i; ++j) {
        if (below(2) == 1) mech.parents.push_back(j);
      }
    }
    mech.exoArgs = {0};
    std::size_t size = static_cast<std::size_t>(k);
    for (std::size_t q = 0; q < mech.parents.size(); ++q) size *= static_cast<std::size_t>(c);
    mech.table.resize(size);
    for (auto& v : mech.table) v = below(static_cast<std::uint64_t>(c));
    scm.mechanisms.push_back(std::move(mech));
  }
  return scm;
}

}  // namespace causat
