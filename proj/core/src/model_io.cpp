#include "causat/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>

#include "causat/errors.hpp"
#include <nlohmann/json.hpp>

namespace causat {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ModelError(msg); }

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) fail(std::string("missing field '") + key + "'");
  return obj.at(key);
}

std::string str(const json& j, const char* what) {
  if (!j.is_string()) fail(std::string(what) + " must be a string");
  return j.get<std::string>();
}

int integer(const json& j, const char* what) {
  if (!j.is_number_integer()) fail(std::string(what) + " must be an integer");
  return j.get<int>();
}

Rational probability(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) fail("probabilities must be strings such as \"3/10\" or \"0.3\"");
  try {
    return parseRational(j.get<std::string>());
  } catch (const Error& e) {
    fail(e.what());
  }
}

std::vector<std::string> names(const json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& v : j) out.push_back(str(v, what));
  return out;
}

int lookup(const std::vector<std::string>& vars, const std::string& name) {
  auto it = std::find(vars.begin(), vars.end(), name);
  if (it == vars.end()) fail("unknown variable '" + name + "'");
  return static_cast<int>(it - vars.begin());
}

Assignment values(const json& j) {
  if (!j.is_array()) fail("\"values\" must be an array");
  Assignment out;
  for (const auto& v : j) out.push_back(integer(v, "value"));
  return out;
}

Domain domainOf(const json& doc) {
  int card = integer(field(doc, "domain"), "domain");
  if (card < 1) fail("domain must be positive");
  return Domain{card};
}

Dag dagFrom(const json& doc, const char* varsKey) {
  auto vars = names(field(doc, varsKey), varsKey);
  std::vector<std::pair<std::string, std::string>> edges;
  if (doc.contains("edges")) {
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2) fail("edges must be [parent, child] pairs");
      edges.emplace_back(str(e[0], "edge"), str(e[1], "edge"));
    }
  }
  return Dag::fromNames(std::move(vars), edges);
}

Scm scmFrom(const json& doc) {
  Scm scm;
  scm.domain = domainOf(doc);
  scm.xVars = names(field(doc, "endogenous"), "endogenous");
  const json& exo = field(doc, "exogenous");
  std::string mode = exo.contains("mode") ? str(exo.at("mode"), "mode") : "semi-markovian";
  if (mode == "markovian") {
    scm.exo.mode = ExogenousMode::Markovian;
  } else if (mode == "semi-markovian") {
    scm.exo.mode = ExogenousMode::SemiMarkovian;
  } else {
    fail("unknown exogenous mode '" + mode + "'");
  }
  std::vector<std::string> exoNames;
  for (const auto& v : field(exo, "variables")) {
    scm.exo.vars.push_back({str(field(v, "name"), "name"), integer(field(v, "card"), "card")});
    exoNames.push_back(scm.exo.vars.back().name);
  }
  for (const auto& s : field(exo, "support")) {
    scm.exo.support.push_back({values(field(s, "values")), probability(field(s, "p"))});
  }
  const json& mechs = field(doc, "mechanisms");
  if (!mechs.is_array()) fail("\"mechanisms\" must be an array");
  scm.mechanisms.resize(scm.xVars.size());
  std::set<int> seen;
  for (const auto& m : mechs) {
    int target = lookup(scm.xVars, str(field(m, "target"), "target"));
    if (!seen.insert(target).second) fail("two mechanisms for " + scm.xVars[static_cast<std::size_t>(target)]);
    Mechanism mech;
    mech.target = target;
    for (const auto& p : names(field(m, "parents"), "parents")) mech.parents.push_back(lookup(scm.xVars, p));
    for (const auto& e : names(field(m, "exo"), "exo")) mech.exoArgs.push_back(lookup(exoNames, e));
    for (const auto& v : field(m, "table")) mech.table.push_back(integer(v, "table entry"));
    scm.mechanisms[static_cast<std::size_t>(target)] = std::move(mech);
  }
  if (seen.size() != scm.xVars.size()) fail("every endogenous variable needs a mechanism");
  requireValid(scm);
  return scm;
}

Bn bnFrom(const json& doc) {
  Bn bn;
  bn.domain = domainOf(doc);
  bn.dag = dagFrom(doc, "variables");
  const auto& vars = bn.dag.vars();
  bn.cpts.resize(vars.size());
  std::set<int> seen;
  for (const auto& cpt : field(doc, "cpts")) {
    int var = lookup(vars, str(field(cpt, "variable"), "variable"));
    if (!seen.insert(var).second) fail("two CPTs for " + vars[static_cast<std::size_t>(var)]);
    std::vector<int> parents;
    for (const auto& p : names(field(cpt, "parents"), "parents")) parents.push_back(lookup(vars, p));
    if (parents != bn.dag.parents(var)) {
      fail("CPT parents of " + vars[static_cast<std::size_t>(var)] +
           " must list the DAG parents in declaration order");
    }
    std::size_t rows = 1;
    for (std::size_t k = 0; k < parents.size(); ++k) rows *= static_cast<std::size_t>(bn.domain.card);
    const json& rj = field(cpt, "rows");
    if (!rj.is_array() || rj.size() != rows) fail("CPT of " + vars[static_cast<std::size_t>(var)] + " needs " + std::to_string(rows) + " rows");
    for (const auto& row : rj) {
      if (!row.is_array() || row.size() != static_cast<std::size_t>(bn.domain.card)) fail("CPT row has wrong length");
      std::vector<Rational> r;
      Rational total = 0;
      for (const auto& v : row) {
        r.push_back(probability(v));
        if (sgn(r.back()) < 0) fail("negative CPT entry");
        total += r.back();
      }
      if (total != 1) fail("CPT row of " + vars[static_cast<std::size_t>(var)] + " does not sum to 1");
      bn.cpts[static_cast<std::size_t>(var)].push_back(std::move(r));
    }
  }
  if (seen.size() != vars.size()) fail("every variable needs a CPT");
  return bn;
}

JointTable jointFrom(const json& doc) {
  JointTable jt;
  jt.domain = domainOf(doc);
  jt.xVars = names(field(doc, "variables"), "variables");
  Rational total = 0;
  for (const auto& e : field(doc, "entries")) {
    Assignment x = values(field(e, "values"));
    if (x.size() != jt.xVars.size()) fail("entry has wrong arity");
    for (int v : x) {
      if (!jt.domain.contains(v)) fail("entry value outside Val");
    }
    Rational p = probability(field(e, "p"));
    if (sgn(p) <= 0) fail("joint entries must be positive (omit zero rows)");
    if (!jt.entries.emplace(x, p).second) fail("duplicate joint entry");
    total += p;
  }
  if (total != 1) fail("joint entries do not sum to 1");
  return jt;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json edgesJson(const Dag& dag) {
  json edges = json::array();
  for (auto [a, b] : dag.edges()) {
    edges.push_back({dag.vars()[static_cast<std::size_t>(a)], dag.vars()[static_cast<std::size_t>(b)]});
  }
  return edges;
}

}  // namespace

AnyModel parseModelJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  try {
    std::string kind = str(field(doc, "kind"), "kind");
    if (kind == "scm") return scmFrom(doc);
    if (kind == "bn") return bnFrom(doc);
    if (kind == "joint") return jointFrom(doc);
    if (kind == "dag") return dagFrom(doc, "variables");
    fail("unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    fail(std::string("bad model document: ") + e.what());
  }
}

AnyModel loadModelFile(const std::filesystem::path& path) {
  std::string text;
  try {
    text = readTextFile(path);
  } catch (const ModelError&) {
    throw;
  } catch (const Error& e) {
    throw ModelError(e.what());
  }
  return parseModelJson(text);
}

Scm loadScm(const std::filesystem::path& path) {
  auto model = loadModelFile(path);
  if (auto* scm = std::get_if<Scm>(&model)) return std::move(*scm);
  if (auto* jt = std::get_if<JointTable>(&model)) return liftJointToScm(*jt);
  if (auto* bn = std::get_if<Bn>(&model)) return liftJointToScm(bnJointDistribution(*bn));
  fail(path.string() + " is not a model");
}

Dag loadDag(const std::filesystem::path& path) {
  auto model = loadModelFile(path);
  if (auto* dag = std::get_if<Dag>(&model)) return std::move(*dag);
  fail(path.string() + " is not a DAG document");
}

std::string toJson(const Scm& scm) {
  json doc;
  doc["kind"] = "scm";
  doc["domain"] = scm.domain.card;
  doc["endogenous"] = scm.xVars;
  json exo;
  exo["mode"] = scm.exo.mode == ExogenousMode::Markovian ? "markovian" : "semi-markovian";
  exo["variables"] = json::array();
  for (const auto& v : scm.exo.vars) exo["variables"].push_back({{"name", v.name}, {"card", v.card}});
  auto support = scm.exo.support;
  std::sort(support.begin(), support.end(),
            [](const SupportPoint& a, const SupportPoint& b) { return a.values < b.values; });
  exo["support"] = json::array();
  for (const auto& s : support) exo["support"].push_back({{"values", s.values}, {"p", formatRational(s.prob)}});
  doc["exogenous"] = exo;
  doc["mechanisms"] = json::array();
  for (const auto& m : scm.mechanisms) {
    json mj;
    mj["target"] = scm.xVars[static_cast<std::size_t>(m.target)];
    mj["parents"] = json::array();
    for (int p : m.parents) mj["parents"].push_back(scm.xVars[static_cast<std::size_t>(p)]);
    mj["exo"] = json::array();
    for (int e : m.exoArgs) mj["exo"].push_back(scm.exo.vars[static_cast<std::size_t>(e)].name);
    mj["table"] = m.table;
    doc["mechanisms"].push_back(mj);
  }
  return dump(doc);
}

std::string toJson(const Bn& bn) {
  json doc;
  doc["kind"] = "bn";
  doc["domain"] = bn.domain.card;
  doc["variables"] = bn.dag.vars();
  doc["edges"] = edgesJson(bn.dag);
  doc["cpts"] = json::array();
  for (std::size_t i = 0; i < bn.cpts.size(); ++i) {
    json cpt;
    cpt["variable"] = bn.dag.vars()[i];
    cpt["parents"] = json::array();
    for (int p : bn.dag.parents(static_cast<int>(i))) cpt["parents"].push_back(bn.dag.vars()[static_cast<std::size_t>(p)]);
    cpt["rows"] = json::array();
    for (const auto& row : bn.cpts[i]) {
      json r = json::array();
      for (const auto& v : row) r.push_back(formatRational(v));
      cpt["rows"].push_back(r);
    }
    doc["cpts"].push_back(cpt);
  }
  return dump(doc);
}

std::string toJson(const JointTable& table) {
  json doc;
  doc["kind"] = "joint";
  doc["domain"] = table.domain.card;
  doc["variables"] = table.xVars;
  doc["entries"] = json::array();
  for (const auto& [x, p] : table.entries) doc["entries"].push_back({{"values", x}, {"p", formatRational(p)}});
  return dump(doc);
}

std::string toJson(const Dag& dag) {
  json doc;
  doc["kind"] = "dag";
  doc["variables"] = dag.vars();
  doc["edges"] = edgesJson(dag);
  return dump(doc);
}

std::string readTextFile(const std::filesystem::path& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void writeTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace causat
