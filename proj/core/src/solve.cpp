#include "causat/solve.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <set>
#include <thread>

#include "causat/classify.hpp"
#include "causat/constraints.hpp"
#include "causat/errors.hpp"
#include "causat/eval.hpp"
#include "causat/lp.hpp"
#include "causat/parser.hpp"

namespace causat {
namespace {

using Clock = std::chrono::steady_clock;

struct Counters {
  std::atomic<std::size_t> branches{0};
  std::atomic<std::size_t> lpCalls{0};
  std::atomic<std::size_t> polyCalls{0};
};

enum class Status { Sat, Unsat, Unknown };

struct Outcome {
  Status status = Status::Unsat;
  std::vector<Rational> point;
  std::string reason;
};

// Decides one structure: DFS over the Boolean structure of the constraint
// tree, one exact feasibility check per complete branch.
class BranchSolver {
 public:
  BranchSolver(const SolveConfig& cfg, Counters& counters, int k, std::vector<PolyConstraint> domain)
      : cfg_(cfg), counters_(counters), k_(k), domain_(std::move(domain)) {}

  Outcome run(const ConstraintPtr& root) {
    std::vector<PolyConstraint> lits;
    explore({root.get()}, lits);
    if (found_) return {Status::Sat, std::move(point_), {}};
    if (!unknownReason_.empty()) return {Status::Unknown, {}, unknownReason_};
    return {};
  }

 private:
  // True stops the search of this structure.
  bool explore(std::vector<const ConstraintNode*> pending, std::vector<PolyConstraint>& lits) {
    while (!pending.empty()) {
      const ConstraintNode* node = pending.back();
      pending.pop_back();
      switch (node->kind) {
        case ConstraintNode::Kind::True:
          continue;
        case ConstraintNode::Kind::False:
          return false;
        case ConstraintNode::Kind::Atom:
          lits.push_back(node->atom);
          continue;
        case ConstraintNode::Kind::And:
          for (auto it = node->children.rbegin(); it != node->children.rend(); ++it) pending.push_back(it->get());
          continue;
        case ConstraintNode::Kind::Or:
          for (const auto& child : node->children) {
            auto next = pending;
            next.push_back(child.get());
            const std::size_t mark = lits.size();
            if (explore(std::move(next), lits)) return true;
            lits.resize(mark);
          }
          return false;
      }
    }
    ++counters_.branches;
    if (++branches_ > cfg_.limits.maxBranches) {
      unknownReason_ = "branch limit reached";
      return true;
    }
    std::string reason;
    Status s = check(lits, reason);
    if (s == Status::Sat) {
      found_ = true;
      return true;
    }
    if (s == Status::Unknown && unknownReason_.empty()) unknownReason_ = reason;
    return false;
  }

  Status lp(const std::vector<PolyConstraint>& cs, std::vector<Rational>& point, std::string& reason) {
    ++counters_.lpCalls;
    LpResult r = linearFeasibilityExact(toLinearSystem(PolySystem{k_, cs}), LpOptions{cfg_.limits.maxLpPivots, false});
    switch (r.status) {
      case LpResult::Status::Feasible:
        point = std::move(r.point);
        return Status::Sat;
      case LpResult::Status::Infeasible:
        return Status::Unsat;
      case LpResult::Status::PivotLimit:
        reason = "LP pivot limit reached";
        return Status::Unknown;
    }
    return Status::Unknown;
  }

  Status check(const std::vector<PolyConstraint>& lits, std::string& reason) {
    std::vector<PolyConstraint> all = domain_;
    all.insert(all.end(), lits.begin(), lits.end());
    std::vector<PolyConstraint> linear;
    for (const auto& c : all) {
      if (c.poly.degree() <= 1) linear.push_back(c);
    }
    if (linear.size() == all.size()) return lp(all, point_, reason);

    // Nonlinear: the linear part alone may already be infeasible.
    std::vector<Rational> relaxed;
    Status s = lp(linear, relaxed, reason);
    if (s != Status::Sat) return s;
    if (std::all_of(all.begin(), all.end(), [&](const PolyConstraint& c) { return holds(c.poly.evaluate(relaxed), c.rel); })) {
      point_ = std::move(relaxed);
      return Status::Sat;
    }
    switch (cfg_.backend) {
      case Backend::Auto:
      case Backend::PolyNaive: {
        ++counters_.polyCalls;
        PolyOptions options = cfg_.poly;
        options.maxPivots = cfg_.limits.maxLpPivots;
        PolyResult r = polyFeasibilityNaive(PolySystem{k_, all}, options);
        if (r.status == PolyResult::Status::Feasible) {
          point_ = std::move(r.point);
          return Status::Sat;
        }
        if (r.status == PolyResult::Status::Infeasible) return Status::Unsat;
        reason = "polynomial search incomplete: " + r.reason;
        return Status::Unknown;
      }
      case Backend::LinearExact:
        reason = "nonlinear constraints under the linear-exact backend";
        return Status::Unknown;
      case Backend::PolyExport:
        reason = "nonlinear constraints left to an external solver";
        return Status::Unknown;
    }
    return Status::Unknown;
  }

  const SolveConfig& cfg_;
  Counters& counters_;
  int k_;
  std::vector<PolyConstraint> domain_;
  std::size_t branches_ = 0;
  bool found_ = false;
  std::vector<Rational> point_;
  std::string unknownReason_;
};

Outcome decide(const CompiledFormula& cf, const SolveConfig& cfg, Counters& counters,
               const std::vector<SupportPointModel>& points, int k, std::vector<PolyConstraint> domain) {
  ConstraintPtr c = structureToConstraints(cf, points, k);
  if (c->kind == ConstraintNode::Kind::False) return {};
  BranchSolver solver(cfg, counters, k, std::move(domain));
  return solver.run(c);
}

// Positive weights summing to one.
std::vector<PolyConstraint> simplex(int k, int offset, int count) {
  std::vector<PolyConstraint> out;
  Polynomial total = Polynomial::constant(k, -1);
  for (int j = offset; j < offset + count; ++j) {
    out.push_back({Polynomial::variable(k, j), RelOp::Gt});
    total += Polynomial::variable(k, j);
  }
  out.push_back({total, RelOp::Eq});
  return out;
}

std::vector<int> indexMap(const std::vector<std::string>& from, const std::vector<std::string>& to) {
  std::vector<int> map;
  for (const auto& name : from) {
    auto it = std::find(to.begin(), to.end(), name);
    map.push_back(static_cast<int>(it - to.begin()));
  }
  return map;
}

std::string exoName(const std::string& base, const std::vector<std::string>& vars) {
  return freshName(base, std::set<std::string>(vars.begin(), vars.end()));
}

// Causal orders of the search class.
std::vector<CausalOrder> searchOrders(const SolveConfig& cfg) {
  const int n = static_cast<int>(cfg.vars.size());
  if (cfg.dag) return {dagOrder(*cfg.dag, indexMap(cfg.dag->vars(), cfg.vars))};
  if (cfg.ordering) return {completeOrder(indexMap(*cfg.ordering, cfg.vars))};
  return allCausalOrders(n);
}

// Runs `evaluate(i)` for a batch, in parallel when jobs > 1.
template <typename F>
void runBatch(std::size_t size, int jobs, F&& evaluate) {
  if (jobs <= 1 || size <= 1) {
    for (std::size_t i = 0; i < size; ++i) evaluate(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
  {
    std::vector<std::jthread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t i = static_cast<std::size_t>(w); i < size; i += static_cast<std::size_t>(jobs)) evaluate(i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Shared bookkeeping of both searches: batches, limits, first SAT.
class Search {
 public:
  struct Job {
    std::function<Outcome()> run;
    std::function<Scm(const std::vector<Rational>&)> witness;
  };

  Search(const SolveConfig& cfg, Clock::time_point start) : cfg_(cfg), start_(start) {
    batchSize_ = cfg.jobs <= 1 ? 1 : static_cast<std::size_t>(cfg.jobs) * 16;
  }

  // False once the search is over (SAT found or a limit hit).
  bool submit(Job job) {
    if (done_) return false;
    if (cfg_.limits.maxStructures != 0 && examined_ + pending_.size() >= cfg_.limits.maxStructures) {
      flush();
      if (done_) return false;
      stop("structure limit reached");
      return false;
    }
    if (cfg_.limits.timeBudget.count() > 0 && Clock::now() - start_ > cfg_.limits.timeBudget) {
      flush();
      if (done_) return false;
      stop("time budget exhausted");
      return false;
    }
    pending_.push_back(std::move(job));
    if (pending_.size() >= batchSize_) flush();
    return !done_;
  }

  void flush() {
    if (pending_.empty() || done_) return;
    std::vector<Outcome> outcomes(pending_.size());
    runBatch(pending_.size(), cfg_.jobs, [&](std::size_t i) { outcomes[i] = pending_[i].run(); });
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      ++examined_;
      if (outcomes[i].status == Status::Sat) {
        witness_ = pending_[i].witness(outcomes[i].point);
        done_ = true;
        break;
      }
      if (outcomes[i].status == Status::Unknown && unknown_.empty()) unknown_ = outcomes[i].reason;
    }
    pending_.clear();
  }

  void stop(std::string reason) {
    unknown_ = std::move(reason);
    done_ = true;
  }

  bool done() const { return done_; }
  std::size_t examined() const { return examined_; }
  const std::optional<Scm>& witness() const { return witness_; }
  const std::string& unknown() const { return unknown_; }

 private:
  const SolveConfig& cfg_;
  Clock::time_point start_;
  std::size_t batchSize_;
  std::vector<Job> pending_;
  std::size_t examined_ = 0;
  bool done_ = false;
  std::optional<Scm> witness_;
  std::string unknown_;
};

// Forced-value arrays of every world of the formula.
std::vector<std::vector<int>> forcedArrays(const CompiledFormula& cf) {
  std::vector<std::vector<int>> out;
  for (const auto& w : cf.worlds) {
    std::vector<int> forced(cf.vars.size(), -1);
    for (auto [v, value] : w) forced[static_cast<std::size_t>(v)] = value;
    out.push_back(std::move(forced));
  }
  return out;
}

LeafSignature rowSignature(const CompiledFormula& cf, const RowSpace& space, const RowCodes& row,
                       const std::vector<std::vector<int>>& forced) {
  std::vector<Assignment> worlds;
  worlds.reserve(forced.size());
  for (const auto& f : forced) worlds.push_back(space.evaluate(row, f));
  return cf.signature(worlds);
}

bool passesUnits(const CompiledFormula& cf, const std::vector<std::pair<int, bool>>& units, const LeafSignature& sig) {
  return std::all_of(units.begin(), units.end(), [&](const auto& u) { return cf.eventHolds(u.first, sig) == u.second; });
}

CandidateStructure candidate(const RowSpace& space, const std::vector<RowCodes>& rows) {
  CandidateStructure s;
  s.order = space.order();
  for (const auto& row : rows) {
    std::vector<std::vector<int>> tables;
    for (std::size_t v = 0; v < space.numVars(); ++v) tables.push_back(space.table(row, static_cast<int>(v)));
    s.rows.push_back(std::move(tables));
  }
  return s;
}

// Semi-Markovian search over sets of distinct leaf signatures.
void searchSemiMarkovian(const CompiledFormula& cf, const SolveConfig& cfg, int layer, Search& search,
                         Counters& counters, SolveStats& stats) {
  std::vector<RowSpace> spaces;
  if (layer == 1 && cfg.observationalShortcut) {
    // Only the joint distribution matters: constant tables, one order.
    CausalOrder order = cfg.dag || cfg.ordering ? searchOrders(cfg).front() : CausalOrder{};
    if (order.order.empty()) {
      for (std::size_t v = 0; v < cfg.vars.size(); ++v) order.order.push_back(static_cast<int>(v));
      order.parents.resize(cfg.vars.size());
    }
    spaces.emplace_back(order, cfg.domain.card, true);
  } else {
    for (auto& order : searchOrders(cfg)) spaces.emplace_back(std::move(order), cfg.domain.card, false);
  }

  const auto forced = forcedArrays(cf);
  const auto units = cf.unitEvents();
  const std::size_t numOrders = spaces.size();
  std::map<LeafSignature, int> sigIndex;
  std::vector<LeafSignature> sigs;
  std::vector<std::vector<RowCodes>> reps;  // sig -> per order (empty if not realizable)
  std::vector<std::vector<int>> orderSigs(numOrders);

  for (std::size_t t = 0; t < numOrders; ++t) {
    const RowSpace& space = spaces[t];
    if (space.size() > cfg.limits.maxRows) {
      search.stop("response table space too large (" + std::to_string(space.size()) + " rows)");
      return;
    }
    RowCodes row = space.first();
    do {
      ++stats.rows;
      LeafSignature sig = rowSignature(cf, space, row, forced);
      if (!passesUnits(cf, units, sig)) continue;
      auto [it, inserted] = sigIndex.try_emplace(sig, static_cast<int>(sigs.size()));
      if (inserted) {
        sigs.push_back(sig);
        reps.emplace_back(numOrders);
      }
      auto& rep = reps[static_cast<std::size_t>(it->second)][t];
      if (rep.empty()) {
        rep = row;
        orderSigs[t].push_back(it->second);
      }
    } while (space.next(row));
    std::sort(orderSigs[t].begin(), orderSigs[t].end());
  }
  stats.signatures = sigs.size();

  const int p = cfg.supportBound;
  for (int s = 1; s <= p; ++s) {
    for (std::size_t t = 0; t < numOrders; ++t) {
      const auto& avail = orderSigs[t];
      if (avail.size() < static_cast<std::size_t>(s)) continue;
      std::vector<std::size_t> idx(static_cast<std::size_t>(s));
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      while (true) {
        std::vector<int> ids;
        for (std::size_t i : idx) ids.push_back(avail[i]);
        // Canonical: the first order realizing every signature.
        bool canonical = true;
        for (std::size_t u = 0; u < t && canonical; ++u) {
          canonical = !std::all_of(ids.begin(), ids.end(),
                                   [&](int id) { return !reps[static_cast<std::size_t>(id)][u].empty(); });
        }
        if (canonical) {
          Search::Job job;
          job.run = [&cf, &cfg, &counters, &sigs, ids, s] {
            std::vector<SupportPointModel> points;
            for (int j = 0; j < s; ++j) {
              points.push_back({sigs[static_cast<std::size_t>(ids[static_cast<std::size_t>(j)])],
                                Polynomial::variable(s, j)});
            }
            return decide(cf, cfg, counters, points, s, simplex(s, 0, s));
          };
          job.witness = [&cfg, &spaces, &reps, ids, t](const std::vector<Rational>& q) {
            std::vector<RowCodes> rows;
            for (int id : ids) rows.push_back(reps[static_cast<std::size_t>(id)][t]);
            return structureToScm(cfg.vars, cfg.domain, candidate(spaces[t], rows), q);
          };
          if (!search.submit(std::move(job))) return;
        }
        // Next combination.
        std::size_t i = idx.size();
        while (i > 0 && idx[i - 1] == avail.size() - idx.size() + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
      }
    }
  }
  search.flush();
}

// Markovian: an independent exogenous variable per endogenous one; the
// support is the product of per-variable table sets.
struct MarkovianChoice {
  std::size_t order = 0;
  std::vector<std::vector<std::uint64_t>> tables;  // per variable, ascending
};

Scm markovianScm(const SolveConfig& cfg, const RowSpace& space, const MarkovianChoice& choice,
                 const std::vector<Rational>& r) {
  const std::size_t n = cfg.vars.size();
  Scm scm;
  scm.domain = cfg.domain;
  scm.xVars = cfg.vars;
  scm.exo.mode = ExogenousMode::Markovian;
  std::vector<int> offsets;
  int offset = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const int k = static_cast<int>(choice.tables[v].size());
    scm.exo.vars.push_back({exoName("U_" + cfg.vars[v], cfg.vars), k});
    offsets.push_back(offset);
    offset += k;
    Mechanism mech;
    mech.target = static_cast<int>(v);
    mech.parents = space.order().parents[v];
    mech.exoArgs = {static_cast<int>(v)};
    RowCodes row(n, 0);
    for (std::uint64_t pr = 0; pr < space.parentRows(static_cast<int>(v)); ++pr) {
      for (int a = 0; a < k; ++a) {
        row[v] = choice.tables[v][static_cast<std::size_t>(a)];
        mech.table.push_back(space.tableValue(row, static_cast<int>(v), pr));
      }
    }
    scm.mechanisms.push_back(std::move(mech));
  }
  Assignment u(n, 0);
  while (true) {
    Rational prob = 1;
    for (std::size_t v = 0; v < n; ++v) prob *= r[static_cast<std::size_t>(offsets[v] + u[v])];
    scm.exo.support.push_back({u, prob});
    std::size_t v = n;
    while (v > 0 && u[v - 1] + 1 == scm.exo.vars[v - 1].card) u[--v] = 0;
    if (v == 0) break;
    ++u[v - 1];
  }
  return scm;
}

Outcome decideMarkovian(const CompiledFormula& cf, const SolveConfig& cfg, Counters& counters, const RowSpace& space,
                        const MarkovianChoice& choice, const std::vector<std::vector<int>>& forced,
                        const std::vector<std::pair<int, bool>>& units) {
  const std::size_t n = cfg.vars.size();
  std::vector<int> offsets;
  int k = 0;
  for (const auto& t : choice.tables) {
    offsets.push_back(k);
    k += static_cast<int>(t.size());
  }
  std::vector<SupportPointModel> points;
  std::vector<std::size_t> a(n, 0);
  while (true) {
    RowCodes row(n);
    Polynomial prob = Polynomial::constant(k, 1);
    for (std::size_t v = 0; v < n; ++v) {
      row[v] = choice.tables[v][a[v]];
      prob = prob * Polynomial::variable(k, offsets[v] + static_cast<int>(a[v]));
    }
    LeafSignature sig = rowSignature(cf, space, row, forced);
    if (!passesUnits(cf, units, sig)) return {};
    points.push_back({std::move(sig), std::move(prob)});
    std::size_t v = n;
    while (v > 0 && a[v - 1] + 1 == choice.tables[v - 1].size()) a[--v] = 0;
    if (v == 0) break;
    ++a[v - 1];
  }
  std::vector<PolyConstraint> domain;
  for (std::size_t v = 0; v < n; ++v) {
    auto part = simplex(k, offsets[v], static_cast<int>(choice.tables[v].size()));
    domain.insert(domain.end(), part.begin(), part.end());
  }
  return decide(cf, cfg, counters, points, k, std::move(domain));
}

// Calls visit(sizes) for every vector of positive sizes with product `total`.
bool forEachFactorization(std::size_t n, int total, std::vector<int>& sizes,
                          const std::function<bool(const std::vector<int>&)>& visit) {
  if (sizes.size() == n) return total == 1 ? visit(sizes) : true;
  for (int k = 1; k <= total; ++k) {
    if (total % k != 0) continue;
    sizes.push_back(k);
    bool go = forEachFactorization(n, total / k, sizes, visit);
    sizes.pop_back();
    if (!go) return false;
  }
  return true;
}

// Every strictly increasing selection of sizes[v] tables for each variable.
bool forEachSelection(const RowSpace& space, const std::vector<int>& sizes, std::size_t v,
                      std::vector<std::vector<std::uint64_t>>& chosen,
                      const std::function<bool()>& visit) {
  if (v == sizes.size()) return visit();
  const std::uint64_t count = space.tableCount(static_cast<int>(v));
  const auto k = static_cast<std::size_t>(sizes[v]);
  if (count < k) return true;
  std::vector<std::uint64_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    chosen[v] = idx;
    if (!forEachSelection(space, sizes, v + 1, chosen, visit)) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == count - k + (i - 1)) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void searchMarkovian(const CompiledFormula& cf, const SolveConfig& cfg, Search& search, Counters& counters) {
  std::vector<RowSpace> spaces;
  for (auto& order : searchOrders(cfg)) spaces.emplace_back(std::move(order), cfg.domain.card, false);
  for (const auto& space : spaces) {
    if (space.size() > cfg.limits.maxRows) {
      search.stop("response table space too large (" + std::to_string(space.size()) + " rows)");
      return;
    }
  }
  const auto forced = forcedArrays(cf);
  const auto units = cf.unitEvents();
  const std::size_t n = cfg.vars.size();
  for (int total = 1; total <= cfg.supportBound; ++total) {
    for (std::size_t t = 0; t < spaces.size(); ++t) {
      const RowSpace& space = spaces[t];
      std::vector<int> sizes;
      bool go = forEachFactorization(n, total, sizes, [&](const std::vector<int>& ks) {
        std::vector<std::vector<std::uint64_t>> chosen(n);
        return forEachSelection(space, ks, 0, chosen, [&] {
          MarkovianChoice choice{t, chosen};
          Search::Job job;
          job.run = [&cf, &cfg, &counters, &space, &forced, &units, choice] {
            return decideMarkovian(cf, cfg, counters, space, choice, forced, units);
          };
          job.witness = [&cfg, &space, choice](const std::vector<Rational>& r) {
            return markovianScm(cfg, space, choice, r);
          };
          return search.submit(std::move(job));
        });
      });
      if (!go) return;
    }
  }
  search.flush();
}

}  // namespace

std::string backendName(Backend b) {
  switch (b) {
    case Backend::Auto: return "auto";
    case Backend::LinearExact: return "linear-exact";
    case Backend::PolyNaive: return "poly-naive";
    case Backend::PolyExport: return "poly-export";
  }
  return "auto";
}

Backend parseBackend(const std::string& name) {
  for (Backend b : {Backend::Auto, Backend::LinearExact, Backend::PolyNaive, Backend::PolyExport}) {
    if (backendName(b) == name) return b;
  }
  throw ConfigError("unknown backend '" + name + "'");
}

std::string verdictName(SatVerdict v) {
  switch (v) {
    case SatVerdict::Sat: return "SAT";
    case SatVerdict::UnsatWithinBounds: return "UNSAT_WITHIN_BOUNDS";
    case SatVerdict::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

void validateConfig(const SolveConfig& cfg) {
  if (cfg.supportBound < 1) throw ConfigError("support bound p must be at least 1");
  if (cfg.domain.card < 1) throw ConfigError("domain cardinality must be positive");
  if (cfg.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (cfg.vars.empty()) throw ConfigError("no variables declared");
  const std::set<std::string> names(cfg.vars.begin(), cfg.vars.end());
  if (names.size() != cfg.vars.size()) throw ConfigError("duplicate variable name");
  for (const auto& v : cfg.vars) {
    if (v.empty() || isKeyword(v)) throw ConfigError("invalid variable name '" + v + "'");
  }
  if (cfg.dag) {
    const auto& dv = cfg.dag->vars();
    if (std::set<std::string>(dv.begin(), dv.end()) != names || dv.size() != names.size()) {
      throw ConfigError("DAG variables differ from the declared variables");
    }
  }
  if (cfg.ordering) {
    const auto& o = *cfg.ordering;
    if (std::set<std::string>(o.begin(), o.end()) != names || o.size() != names.size()) {
      throw ConfigError("ordering is not a permutation of the declared variables");
    }
    if (cfg.dag) {
      Dag complete = Dag::complete(o);
      std::set<std::pair<std::string, std::string>> a, b;
      for (auto [p, c] : complete.edges()) a.emplace(complete.vars()[p], complete.vars()[c]);
      for (auto [p, c] : cfg.dag->edges()) b.emplace(cfg.dag->vars()[p], cfg.dag->vars()[c]);
      if (a != b) throw ConfigError("ordering conflicts with the DAG");
    }
  }
}

Scm structureToScm(const std::vector<std::string>& vars, const Domain& domain, const CandidateStructure& s,
                   const std::vector<Rational>& weights) {
  const int k = static_cast<int>(s.rows.size());
  if (k == 0 || weights.size() != s.rows.size()) throw ConfigError("structure and weights disagree");
  Scm scm;
  scm.domain = domain;
  scm.xVars = vars;
  scm.exo.mode = ExogenousMode::SemiMarkovian;
  scm.exo.vars.push_back({exoName("U", vars), k});
  for (int j = 0; j < k; ++j) scm.exo.support.push_back({{j}, weights[static_cast<std::size_t>(j)]});
  for (std::size_t v = 0; v < vars.size(); ++v) {
    Mechanism mech;
    mech.target = static_cast<int>(v);
    mech.parents = s.order.parents[v];
    mech.exoArgs = {0};
    const std::size_t rows = s.rows.front()[v].size();
    for (std::size_t r = 0; r < rows; ++r) {
      for (int j = 0; j < k; ++j) mech.table.push_back(s.rows[static_cast<std::size_t>(j)][v][r]);
    }
    scm.mechanisms.push_back(std::move(mech));
  }
  return scm;
}

namespace {

// Every mechanism reads only DAG parents, or only earlier variables of the
// causal ordering.
bool respectsStructure(const Scm& w, const SolveConfig& cfg) {
  for (const Mechanism& m : w.mechanisms) {
    const std::string& target = w.xVars[static_cast<std::size_t>(m.target)];
    for (int p : m.parents) {
      const std::string& parent = w.xVars[static_cast<std::size_t>(p)];
      if (cfg.dag) {
        const auto& ps = cfg.dag->parents(cfg.dag->indexOf(target));
        if (std::find(ps.begin(), ps.end(), cfg.dag->indexOf(parent)) == ps.end()) return false;
      }
      if (cfg.ordering) {
        auto at = [&](const std::string& v) { return std::find(cfg.ordering->begin(), cfg.ordering->end(), v); };
        if (at(parent) >= at(target)) return false;
      }
    }
  }
  return true;
}

}  // namespace

SatResult solveSat(const FormulaPtr& f, const SolveConfig& cfg) {
  const auto start = Clock::now();
  validateConfig(cfg);
  for (const auto& v : mentionedVariables(f)) {
    if (std::find(cfg.vars.begin(), cfg.vars.end(), v) == cfg.vars.end()) {
      throw ConfigError("formula mentions undeclared variable '" + v + "'");
    }
  }
  const CompiledFormula cf = compileFormula(f, cfg.vars, cfg.domain.card, cfg.sumBudget);
  const int layer = classify(f).layer;

  SatResult result;
  Counters counters;
  Search search(cfg, start);
  if (cfg.strictMarkovian) {
    searchMarkovian(cf, cfg, search, counters);
  } else {
    searchSemiMarkovian(cf, cfg, layer, search, counters, result.stats);
  }

  result.stats.structures = search.examined();
  result.stats.branches = counters.branches;
  result.stats.lpCalls = counters.lpCalls;
  result.stats.polyCalls = counters.polyCalls;
  if (search.witness()) {
    const Scm& w = *search.witness();
    if (!validateScm(w).empty()) throw Error("internal: witness violates the model invariants");
    EvalOptions options;
    options.sumBudget = cfg.sumBudget;
    if (!evalFormula(w, f, options).isTrue()) throw Error("internal: witness failed re-verification");
    if (countSupportU(w) > static_cast<std::size_t>(cfg.supportBound)) {
      throw Error("internal: witness exceeds the support bound");
    }
    if (!respectsStructure(w, cfg)) throw Error("internal: witness violates the dag or ordering");
    result.verdict = SatVerdict::Sat;
    result.witness = w;
  } else if (!search.unknown().empty()) {
    result.verdict = SatVerdict::Unknown;
    result.reason = search.unknown();
  } else {
    result.verdict = SatVerdict::UnsatWithinBounds;
  }
  result.stats.elapsedMs = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return result;
}

SatResult solveValidityBounded(const FormulaPtr& f, const SolveConfig& cfg) { return solveSat(fNot(f), cfg); }

EnumerationSummary enumerateStructures(const SolveConfig& cfg,
                                       const std::function<bool(const CandidateStructure&)>& visit) {
  validateConfig(cfg);
  std::vector<RowSpace> spaces;
  for (auto& order : searchOrders(cfg)) spaces.emplace_back(std::move(order), cfg.domain.card, false);
  const bool dedupe = spaces.size() > 1;
  EnumerationSummary summary;
  std::vector<std::vector<RowCodes>> rows;
  for (const auto& space : spaces) {
    if (space.size() > cfg.limits.maxRows) throw ConfigError("response table space too large");
    std::vector<RowCodes> all;
    RowCodes row = space.first();
    do all.push_back(row);
    while (space.next(row));
    rows.push_back(std::move(all));
  }
  const std::size_t n = cfg.vars.size();
  for (int s = 1; s <= cfg.supportBound; ++s) {
    for (std::size_t t = 0; t < spaces.size(); ++t) {
      const auto& space = spaces[t];
      const auto& avail = rows[t];
      if (avail.size() < static_cast<std::size_t>(s)) continue;
      std::vector<std::size_t> idx(static_cast<std::size_t>(s));
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      while (true) {
        std::vector<RowCodes> chosen;
        for (std::size_t i : idx) chosen.push_back(avail[i]);
        bool emit = true;
        if (dedupe) {
          std::vector<std::vector<int>> genuine(n);
          for (std::size_t v = 0; v < n; ++v) {
            const auto& pa = space.order().parents[v];
            for (std::size_t k = 0; k < pa.size(); ++k) {
              bool dep = std::any_of(chosen.begin(), chosen.end(), [&](const RowCodes& r) {
                return space.dependsOn(r, static_cast<int>(v), k);
              });
              if (dep) genuine[v].push_back(pa[k]);
            }
          }
          emit = smallestTopologicalOrder(genuine) == space.order().order;
        }
        if (emit) {
          if (cfg.limits.maxStructures != 0 && summary.count >= cfg.limits.maxStructures) {
            summary.truncated = true;
            return summary;
          }
          ++summary.count;
          if (!visit(candidate(space, chosen))) return summary;
        }
        std::size_t i = idx.size();
        while (i > 0 && idx[i - 1] == avail.size() - idx.size() + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
      }
    }
  }
  return summary;
}

}  // namespace causat
