#include "causat_cli/cli.hpp"

#include <algorithm>
#include <sstream>

#include "CLI11.hpp"
#include "causat/causat.hpp"

namespace causat::cli {
namespace {

std::vector<std::string> splitList(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Options {
  std::string model;
  std::string formulaFile;
  std::string formulaText;
  std::string termFile;
  std::string termText;
  std::string vars;
  int card = 2;
  int p = 0;
  std::string dag;
  std::string ordering;
  std::string backend = "auto";
  std::string witness;
  std::string output;
  std::string doList;
  std::string keep;
  std::string transform;
  std::string mode = "joint-table";
  int jobs = 1;
  std::uint64_t seed = 0;
  std::size_t maxStructures = 0;
  long timeBudgetMs = 0;
  std::uint64_t sumBudget = 1'000'000;
  bool markovian = false;
  bool json = false;
  bool allRows = false;
};

std::string source(const std::string& file, const std::string& text, const char* what) {
  if (!text.empty()) return text;
  if (file.empty()) throw ConfigError(std::string("no ") + what + " given");
  try {
    return readTextFile(file);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

Signature signatureOf(const Options& o) {
  if (o.vars.empty()) throw ConfigError("--vars is required");
  return Signature{splitList(o.vars), Domain{o.card}};
}

Signature signatureOf(const AnyModel& m) {
  return std::visit(
      [](const auto& model) -> Signature {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, Scm>) {
          return {model.xVars, model.domain};
        } else if constexpr (std::is_same_v<T, Bn>) {
          return {model.dag.vars(), model.domain};
        } else if constexpr (std::is_same_v<T, JointTable>) {
          return {model.xVars, model.domain};
        } else {
          throw ModelError("a DAG document is not a probabilistic model");
        }
      },
      m);
}

// An SCM for every model kind; BNs and joint tables only answer layer-1
// questions.
Scm asScm(const AnyModel& m, int layer) {
  if (const auto* scm = std::get_if<Scm>(&m)) return *scm;
  if (layer > 1) throw ModelError("interventional query on a model without mechanisms");
  if (const auto* bn = std::get_if<Bn>(&m)) return liftJointToScm(bnJointDistribution(*bn));
  if (const auto* jt = std::get_if<JointTable>(&m)) return liftJointToScm(*jt);
  throw ModelError("a DAG document is not a probabilistic model");
}

SolveConfig solveConfig(const Options& o) {
  SolveConfig cfg;
  cfg.vars = signatureOf(o).vars;
  cfg.domain = Domain{o.card};
  cfg.supportBound = o.p;
  if (!o.dag.empty()) cfg.dag = loadDag(o.dag);
  if (!o.ordering.empty()) cfg.ordering = splitList(o.ordering);
  cfg.backend = parseBackend(o.backend);
  cfg.limits.maxStructures = o.maxStructures;
  cfg.limits.timeBudget = std::chrono::milliseconds(o.timeBudgetMs);
  cfg.strictMarkovian = o.markovian;
  cfg.jobs = o.jobs;
  cfg.sumBudget = o.sumBudget;
  return cfg;
}

std::string describeUndefined(const Verdict& v) {
  if (!v.evidence || !v.evidence->conditional) return "undefined";
  return "undefined (zero-probability condition in " + printTerm(v.evidence->conditional) + ")";
}

int truthExit(Truth t) {
  switch (t) {
    case Truth::True: return kTrue;
    case Truth::False: return kFalse;
    case Truth::Undefined: return kUndefined;
  }
  return kUndefined;
}

int cmdCheck(const Options& o, std::ostream& out) {
  AnyModel model = loadModelFile(o.model);
  Signature sig = signatureOf(model);
  FormulaPtr f = parseFormula(source(o.formulaFile, o.formulaText, "formula"), sig);
  EvalOptions eo;
  eo.sumBudget = o.sumBudget;
  Verdict v;
  if (const auto* scm = std::get_if<Scm>(&model)) {
    v = evalFormula(*scm, f, eo);
  } else if (const auto* bn = std::get_if<Bn>(&model)) {
    v = evalFormulaBn(*bn, f, eo);
  } else {
    v = evalFormulaJoint(std::get<JointTable>(model), f, eo);
  }
  out << (v.truth == Truth::Undefined ? describeUndefined(v) : truthName(v.truth)) << '\n';
  return truthExit(v.truth);
}

int cmdEval(const Options& o, std::ostream& out) {
  AnyModel model = loadModelFile(o.model);
  Signature sig = signatureOf(model);
  TermPtr t = parseTerm(source(o.termFile, o.termText, "term"), sig);
  EvalOptions eo;
  eo.sumBudget = o.sumBudget;
  EvalOutcome r = termValue(asScm(model, classifyTerm(t).layer), t, eo);
  if (const auto* u = std::get_if<Undefined>(&r)) {
    out << "undefined (zero-probability condition in " << printTerm(u->conditional) << ")\n";
    return kUndefined;
  }
  const Rational& value = std::get<Rational>(r);
  out << formatRational(value) << '\n' << formatDecimal(value, 10) << '\n';
  return kTrue;
}

void printStats(const SatResult& r, std::ostream& out) {
  out << "structures: " << r.stats.structures << "\nrows: " << r.stats.rows << "\nsignatures: " << r.stats.signatures
      << "\nbranches: " << r.stats.branches << "\nlp-calls: " << r.stats.lpCalls
      << "\npoly-calls: " << r.stats.polyCalls << "\nelapsed-ms: " << formatDecimal(Rational(r.stats.elapsedMs), 1)
      << '\n';
}

int cmdSolve(const Options& o, std::ostream& out, bool validity) {
  if (o.p < 1) throw ConfigError("--p is required and must be positive");
  SolveConfig cfg = solveConfig(o);
  Signature sig{cfg.vars, cfg.domain};
  FormulaPtr f = parseFormula(source(o.formulaFile, o.formulaText, "formula"), sig);
  SatResult r = validity ? solveValidityBounded(f, cfg) : solveSat(f, cfg);
  int code = kUndefined;
  switch (r.verdict) {
    case SatVerdict::Sat:
      out << "verdict: " << (validity ? "COUNTEREXAMPLE" : "SAT") << '\n';
      code = validity ? kFalse : kTrue;
      break;
    case SatVerdict::UnsatWithinBounds:
      out << "verdict: " << (validity ? "VALID_WITHIN_BOUNDS" : "UNSAT_WITHIN_BOUNDS") << '\n';
      code = validity ? kTrue : kFalse;
      break;
    case SatVerdict::Unknown:
      out << "verdict: UNKNOWN\nreason: " << r.reason << '\n';
      break;
  }
  printStats(r, out);
  if (r.witness) {
    std::string path = o.witness.empty() ? (validity ? "counterexample.json" : "witness.json") : o.witness;
    writeTextFile(path, toJson(*r.witness));
    out << "witness: " << path << '\n';
  }
  return code;
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.output.empty() || o.output == "-") {
    out << text;
  } else {
    writeTextFile(o.output, text);
  }
}

int cmdTransform(const Options& o, std::ostream& out) {
  const std::string& name = o.transform;
  if (name == "dag-l3") {
    if (o.dag.empty()) throw ConfigError("dag-l3 needs --dag");
    emit(o, out, printFormula(encodeDagConstraintL3(loadDag(o.dag), Domain{o.card})) + "\n");
    return kTrue;
  }
  if (name == "docalc-rule3") {
    auto names = splitList(o.vars);
    if (names.size() != 4) throw ConfigError("docalc-rule3 needs --vars X,Y,Z,W");
    emit(o, out, printFormula(buildDoCalcObservationRule(names[0], names[1], names[2], names[3], Domain{o.card})) + "\n");
    return kTrue;
  }
  Signature sig = signatureOf(o);
  FormulaPtr f = parseFormula(source(o.formulaFile, o.formulaText, "formula"), sig);
  if (name == "expand-sums") {
    emit(o, out, printFormula(expandSums(f, o.card, o.sumBudget)) + "\n");
  } else if (name == "constant-free") {
    emit(o, out, printFormula(eliminateConstants(f, sig.vars.front(), o.sumBudget)) + "\n");
  } else if (name == "complete-dag") {
    CompleteDagReduction r = reduceToCompleteDag(f, sig.vars);
    emit(o, out, printFormula(r.formula) + "\n" + toJson(r.dag));
  } else if (name == "causal-ordering") {
    if (o.ordering.empty()) throw ConfigError("causal-ordering needs --ordering");
    OrderingEncoding r = encodeCausalOrdering(f, splitList(o.ordering), sig.vars, sig.domain);
    std::string vars;
    for (const auto& v : r.vars) vars += (vars.empty() ? "" : ",") + v;
    emit(o, out, "# vars: " + vars + "\n" + printFormula(r.formula) + "\n");
  } else {
    throw ConfigError("unknown transform '" + name + "'");
  }
  return kTrue;
}

int cmdExport(const Options& o, std::ostream& out) {
  Options copy = o;
  if (copy.p < 1) copy.p = 1;
  SolveConfig cfg = solveConfig(copy);
  Signature sig{cfg.vars, cfg.domain};
  FormulaPtr f = parseFormula(source(o.formulaFile, o.formulaText, "formula"), sig);
  emit(o, out, exportSmtLib(f, cfg, parseExportMode(o.mode)));
  return kTrue;
}

int cmdInfo(const Options& o, std::ostream& out) {
  Signature sig = o.model.empty() ? signatureOf(o) : signatureOf(loadModelFile(o.model));
  FormulaPtr f = parseFormula(source(o.formulaFile, o.formulaText, "formula"), sig);
  Classification c = classify(f);
  out << "formula: " << printFormula(f) << "\nclass: " << describe(c) << "\nlayer: " << c.layer
      << "\narithmetic: " << arithmeticName(c.arithmetic) << "\nsums: " << (c.usesSum ? "yes" : "no")
      << "\nconditionals: " << (c.usesCond ? "yes" : "no") << "\nexpanded-size: " << expandedSize(f, sig.domain.card)
      << '\n';
  return kTrue;
}

int cmdJoint(const Options& o, std::ostream& out) {
  AnyModel model = loadModelFile(o.model);
  Signature sig = signatureOf(model);
  JointTable jt;
  if (!o.doList.empty()) {
    const auto* scm = std::get_if<Scm>(&model);
    if (!scm) throw ModelError("--do needs an SCM");
    std::vector<std::pair<std::string, int>> items;
    for (const auto& item : parseInterventionList(o.doList, sig)) items.emplace_back(item.var, item.value.value);
    jt = jointDistribution(applyIntervention(*scm, items));
  } else if (const auto* scm = std::get_if<Scm>(&model)) {
    jt = jointDistribution(*scm);
  } else if (const auto* bn = std::get_if<Bn>(&model)) {
    jt = bnJointDistribution(*bn);
  } else {
    jt = std::get<JointTable>(model);
  }
  if (!o.keep.empty()) jt = marginalize(jt, splitList(o.keep));
  if (o.json) {
    out << toJson(jt);
    return kTrue;
  }
  auto row = [&](const Assignment& x, const Rational& prob) {
    for (std::size_t v = 0; v < x.size(); ++v) out << (v ? " " : "") << jt.xVars[v] << '=' << x[v];
    out << "  " << formatRational(prob) << "  " << formatDecimal(prob, 6) << '\n';
  };
  if (!o.allRows) {
    for (const auto& [x, prob] : jt.entries) row(x, prob);
    return kTrue;
  }
  // Every assignment in lexicographic order, zeros included.
  Assignment x(jt.xVars.size(), 0);
  while (true) {
    row(x, jt.probability(x));
    std::size_t v = x.size();
    while (v > 0 && x[v - 1] == jt.domain.card - 1) x[--v] = 0;
    if (v == 0) break;
    ++x[v - 1];
  }
  return kTrue;
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact evaluation, transformation and bounded satisfiability for causal probability formulas",
               "causat"};
  app.require_subcommand(1);
  Options o;

  auto formulaOpts = [&](CLI::App* sub) {
    sub->add_option("--formula,-f", o.formulaFile, "Formula file ('-' for stdin)");
    sub->add_option("--expr,-e", o.formulaText, "Formula text");
  };
  auto signatureOpts = [&](CLI::App* sub) {
    sub->add_option("--vars", o.vars, "Comma-separated endogenous variables");
    sub->add_option("--c", o.card, "Domain size c (values 0..c-1)")->check(CLI::PositiveNumber);
  };
  auto solverOpts = [&](CLI::App* sub) {
    sub->add_option("--p", o.p, "Support bound p")->required()->check(CLI::PositiveNumber);
    sub->add_option("--dag", o.dag, "DAG document");
    sub->add_option("--ordering", o.ordering, "Comma-separated causal ordering");
    sub->add_option("--backend", o.backend, "auto | linear-exact | poly-naive | poly-export");
    sub->add_option("--witness", o.witness, "Where to write a witness model");
    sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--max-structures", o.maxStructures, "Structure limit (0 = none)");
    sub->add_option("--time-budget", o.timeBudgetMs, "Time limit in milliseconds (0 = none)");
    sub->add_flag("--markovian", o.markovian, "Independent exogenous variable per endogenous variable");
    sub->add_option("--seed", o.seed, "Seed (the search itself is deterministic)");
  };

  auto* check = app.add_subcommand("check", "Evaluate a formula on a model");
  check->add_option("--model,-m", o.model, "Model document")->required();
  formulaOpts(check);

  auto* eval = app.add_subcommand("eval", "Evaluate a term on a model");
  eval->add_option("--model,-m", o.model, "Model document")->required();
  eval->add_option("--term,-t", o.termFile, "Term file ('-' for stdin)");
  eval->add_option("--expr,-e", o.termText, "Term text");

  auto* solve = app.add_subcommand("solve", "Bounded satisfiability");
  formulaOpts(solve);
  signatureOpts(solve);
  solverOpts(solve);

  auto* validity = app.add_subcommand("validity", "Bounded validity (search for a counterexample)");
  formulaOpts(validity);
  signatureOpts(validity);
  solverOpts(validity);

  auto* transform = app.add_subcommand("transform", "Apply a formula transformation");
  transform->add_option("--name", o.transform,
                        "expand-sums | constant-free | complete-dag | causal-ordering | dag-l3 | docalc-rule3")
      ->required();
  formulaOpts(transform);
  signatureOpts(transform);
  transform->add_option("--ordering", o.ordering, "Comma-separated causal ordering");
  transform->add_option("--dag", o.dag, "DAG document");
  transform->add_option("--output,-o", o.output, "Output file");

  auto* exportCmd = app.add_subcommand("export", "SMT-LIB 2 export");
  exportCmd->add_option("--mode", o.mode, "joint-table | per-structure");
  formulaOpts(exportCmd);
  signatureOpts(exportCmd);
  exportCmd->add_option("--p", o.p, "Support bound p (per-structure)");
  exportCmd->add_option("--dag", o.dag, "DAG document");
  exportCmd->add_option("--ordering", o.ordering, "Comma-separated causal ordering");
  exportCmd->add_option("--max-structures", o.maxStructures, "Structure limit (0 = none)");
  exportCmd->add_option("--output,-o", o.output, "Output file");

  auto* info = app.add_subcommand("info", "Classify a formula");
  formulaOpts(info);
  signatureOpts(info);
  info->add_option("--model,-m", o.model, "Take the signature from a model");

  auto* joint = app.add_subcommand("joint", "Print the (post-interventional) joint distribution");
  joint->add_option("--model,-m", o.model, "Model document")->required();
  joint->add_option("--do", o.doList, "Intervention, e.g. X=1,Z=0");
  joint->add_option("--keep", o.keep, "Marginalize onto these variables");
  joint->add_flag("--json", o.json, "Print a joint-table document");
  joint->add_flag("--all", o.allRows, "Also print zero-probability assignments");

  for (auto* sub : {check, eval, solve, validity, transform, exportCmd, info}) {
    sub->add_option("--sum-budget", o.sumBudget, "Maximum leaves after sum expansion");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (check->parsed()) return cmdCheck(o, out);
    if (eval->parsed()) return cmdEval(o, out);
    if (solve->parsed()) return cmdSolve(o, out, false);
    if (validity->parsed()) return cmdSolve(o, out, true);
    if (transform->parsed()) return cmdTransform(o, out);
    if (exportCmd->parsed()) return cmdExport(o, out);
    if (info->parsed()) return cmdInfo(o, out);
    if (joint->parsed()) return cmdJoint(o, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << '\n';
    return kModel;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kUndefined;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const EvalError& e) {
    err << "evaluation error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace causat::cli
