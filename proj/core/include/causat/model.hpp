#pragma once

// Data model for structural causal models, Bayesian networks, DAGs and exact
// joint tables, plus the brute-force joint-distribution oracle.
//
// Mechanism tables are indexed in mixed radix over (parents..., exoArgs...),
// the first argument being the most significant digit. Parents range over the
// shared endogenous domain; each exogenous argument over its own cardinality.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causat/rational.hpp"

namespace causat {

using Assignment = std::vector<int>;

/// Shared endogenous value set Val = {0, ..., card - 1}.
struct Domain {
  int card = 2;

  bool contains(int value) const noexcept { return value >= 0 && value < card; }
  friend bool operator==(const Domain&, const Domain&) = default;
};

/// Directed acyclic graph over named endogenous variables.
///
/// Construction validates the edge relation (known endpoints, no self-loops,
/// no duplicates, acyclic) and caches a topological order, so every Dag value
/// satisfies its invariants.
class Dag {
 public:
  Dag() = default;
  Dag(std::vector<std::string> vars, std::vector<std::pair<int, int>> edges);
  static Dag fromNames(
      std::vector<std::string> vars,
      const std::vector<std::pair<std::string, std::string>>& edges);

  /// X_i -> X_j for every i < j in the given order.
  static Dag complete(std::vector<std::string> vars);

  const std::vector<std::string>& vars() const noexcept { return vars_; }
  /// Sorted (parent, child) index pairs.
  const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
  const std::vector<int>& topologicalOrder() const noexcept { return order_; }
  std::size_t size() const noexcept { return vars_.size(); }

  /// Parents of `child`, ascending by index.
  std::vector<int> parents(int child) const;
  bool hasEdge(int parent, int child) const;
  /// Index of a variable name, or -1.
  int indexOf(std::string_view name) const;
  /// True when `v` can be reached from `from` by a non-empty directed path.
  bool reaches(int from, int v) const;

  friend bool operator==(const Dag& a, const Dag& b) {
    return a.vars_ == b.vars_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::string> vars_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> order_;
};

enum class ExogenousMode { SemiMarkovian, Markovian };

struct ExogenousVar {
  std::string name;
  int card = 2;
  friend bool operator==(const ExogenousVar&, const ExogenousVar&) = default;
};

struct SupportPoint {
  Assignment values;  // one value per exogenous variable
  Rational prob;
  friend bool operator==(const SupportPoint&, const SupportPoint&) = default;
};

/// Exogenous variables with an explicit positive-support joint distribution.
struct ExogenousSpec {
  std::vector<ExogenousVar> vars;
  std::vector<SupportPoint> support;
  ExogenousMode mode = ExogenousMode::SemiMarkovian;
  friend bool operator==(const ExogenousSpec&, const ExogenousSpec&) = default;
};

/// F_i(pa_i, u_i) as an explicit total table.
struct Mechanism {
  int target = 0;
  std::vector<int> parents;  // endogenous indices
  std::vector<int> exoArgs;  // exogenous indices
  std::vector<int> table;
  friend bool operator==(const Mechanism&, const Mechanism&) = default;
};

/// Structural causal model (F, P, U, X). mechanisms[i].target == i.
struct Scm {
  Domain domain;
  std::vector<std::string> xVars;
  std::vector<Mechanism> mechanisms;
  ExogenousSpec exo;

  int indexOf(std::string_view name) const;
  friend bool operator==(const Scm&, const Scm&) = default;
};

/// Bayesian network. cpts[i][parentRow][value], where parentRow is the mixed
/// radix index over dag.parents(i) (ascending variable index).
struct Bn {
  Dag dag;
  Domain domain;
  std::vector<std::vector<std::vector<Rational>>> cpts;
  friend bool operator==(const Bn&, const Bn&) = default;
};

/// Exact distribution over full endogenous assignments. Only strictly
/// positive entries are stored.
struct JointTable {
  Domain domain;
  std::vector<std::string> xVars;
  std::map<Assignment, Rational> entries;

  Rational probability(const Assignment& x) const;
  friend bool operator==(const JointTable&, const JointTable&) = default;
};

struct Violation {
  enum class Kind {
    DomainTooSmall,
    DuplicateVariable,
    MechanismCount,
    MechanismTarget,
    BadParent,
    BadExoArg,
    TableSize,
    TableValue,
    NotRecursive,
    ExoCardinality,
    SupportArity,
    SupportValue,
    DuplicateSupport,
    NonPositiveProbability,
    SupportSum,
    MarkovianSharedExo,
    MarkovianNotProduct,
  };
  Kind kind;
  std::string message;
};

// ---------------------------------------------------------------------------
// Operations

/// Topological order of the mechanisms' parent relation. Throws ModelError if
/// the model is not recursive.
std::vector<int> recursiveOrder(const Scm& scm);

/// Values of X computed from the exogenous assignment u (one value per
/// exogenous variable).
Assignment evaluateEndogenous(const Scm& scm, std::span<const int> u);
/// Same, with a precomputed recursiveOrder().
Assignment evaluateEndogenous(const Scm& scm, std::span<const int> u,
                              std::span<const int> order);

/// F_alpha: each intervened mechanism becomes a constant with no arguments.
/// Throws ModelError on duplicate variables or values outside Val.
Scm applyIntervention(const Scm& scm,
                      std::span<const std::pair<int, int>> interventions);
Scm applyIntervention(
    const Scm& scm,
    const std::vector<std::pair<std::string, int>>& interventions);

JointTable jointDistribution(const Scm& scm);
JointTable bnJointDistribution(const Bn& bn);

/// Sums out every variable not in `keep` (names, output order as given).
JointTable marginalize(const JointTable& table,
                       const std::vector<std::string>& keep);

/// Chain-rule factorization of a joint table over `dag`'s complete ordering;
/// rows for zero-probability contexts are uniform.
Bn bnFromJoint(const JointTable& table, const Dag& dag);

/// Number of exogenous assignments with positive probability.
std::size_t countSupportU(const Scm& scm);
/// Number of endogenous assignments with positive probability.
std::size_t countSupportX(const Scm& scm);

/// Semi-Markovian SCM with one exogenous copy U_i per X_i, identity
/// mechanisms and P(U = x) = jt(x).
Scm liftJointToScm(const JointTable& jt);

/// Empty iff every Scm / ExogenousSpec invariant holds.
std::vector<Violation> validateScm(const Scm& scm);
/// Throws ModelError listing the violations, if any.
void requireValid(const Scm& scm);

/// Deterministic random SCM over variables X1..Xn with a single exogenous
/// variable U of at most p support points. With `dag`, mechanism parents are
/// exactly the DAG parents (variable names are then taken from the DAG).
Scm randomScm(std::uint64_t seed, int n, int c, int p,
              const std::optional<Dag>& dag = std::nullopt);

}  // namespace causat
