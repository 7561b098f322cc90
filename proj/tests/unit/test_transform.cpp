#include <gtest/gtest.h>

#include "causat/classify.hpp"
#include "causat/errors.hpp"
#include "causat/eval.hpp"
#include "causat/parser.hpp"
#include "causat/printer.hpp"
#include "causat/transform.hpp"
#include "fig1.hpp"
#include "gen.hpp"
#include "oracle.hpp"

using namespace causat;

namespace {

const Signature kSig{{"Z", "X", "Y"}, Domain{2}};

bool hasConst(const TermPtr& t) {
  if (!t) return false;
  return t->kind == Term::Kind::Const || hasConst(t->lhs) || hasConst(t->rhs);
}

bool hasConst(const FormulaPtr& f) {
  if (!f) return false;
  return hasConst(f->left) || hasConst(f->right) || hasConst(f->lhs) || hasConst(f->rhs);
}

bool hasSum(const TermPtr& t) {
  if (!t) return false;
  return t->kind == Term::Kind::Sum || hasSum(t->lhs) || hasSum(t->rhs);
}

Scm binaryScm(std::vector<std::string> vars, std::vector<Mechanism> mechs, int exoCard) {
  Scm scm;
  scm.domain = Domain{2};
  scm.xVars = std::move(vars);
  scm.mechanisms = std::move(mechs);
  scm.exo.mode = ExogenousMode::SemiMarkovian;
  scm.exo.vars = {{"U", exoCard}};
  for (int u = 0; u < exoCard; ++u) scm.exo.support.push_back({{u}, ratio(1, exoCard)});
  return scm;
}

}  // namespace

TEST(ExpandSums, Examples) {
  TermPtr t = expandSums(parseTerm("sum x . P(Y=1 && X=x)", kSig), 2);
  EXPECT_TRUE(equal(t, parseTerm("P(Y=1 && X=0) + P(Y=1 && X=1)", kSig)));
  TermPtr u = expandSums(parseTerm("sum x . P(Y=1)", kSig), 2);
  EXPECT_TRUE(equal(u, parseTerm("P(Y=1) + P(Y=1)", kSig)));
  TermPtr v = expandSums(parseTerm("sum x . sum y . P(X=x && Y=y)", kSig), 2);
  EXPECT_FALSE(hasSum(v));
  EXPECT_EQ(expandedSize(v, 2), 4u);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Scm scm = randomScm(seed, 3, 2, 3);
    scm.xVars = {"Z", "X", "Y"};
    EXPECT_EQ(std::get<Rational>(termValue(scm, v)), 1);
  }
}

TEST(ExpandSums, BudgetReportsRequiredSize) {
  try {
    expandSums(parseTerm("sum a . sum b . sum c . P(X=a && Y=b && Z=c)", kSig), 2, 7);
    FAIL();
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.required(), 8u);
    EXPECT_EQ(e.budget(), 7u);
  }
}

TEST(ExpandSums, PreservesValuesProperty) {
  causat::testing::GenConfig cfg;
  cfg.vars = {"X1", "X2", "X3"};
  cfg.maxSums = 3;
  cfg.termDepth = 4;
  causat::testing::Generator gen(21, cfg);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Scm scm = randomScm(seed, 3, 2, 3);
    TermPtr t = gen.term();
    TermPtr e = expandSums(t, 2);
    EXPECT_FALSE(hasSum(e));
    EvalOutcome a = termValue(scm, t);
    EvalOutcome b = termValue(scm, e);
    ASSERT_EQ(a.index(), b.index()) << printTerm(t);
    if (a.index() == 0) EXPECT_EQ(std::get<Rational>(a), std::get<Rational>(b));
  }
}

TEST(ConstantFree, Examples) {
  FormulaPtr f = eliminateConstants(parseFormula("P(X=1) <= 1/2", kSig), "Z");
  EXPECT_TRUE(equal(f, parseFormula("P(X=1) + P(X=1) <= P(Z=0 || Z!=0)", kSig))) << printFormula(f);
  FormulaPtr g = eliminateConstants(parseFormula("P(X=1) - 2 = 0", kSig), "Z");
  EXPECT_TRUE(equal(g, parseFormula("P(X=1) - (P(Z=0 || Z!=0) + P(Z=0 || Z!=0)) = P(Z=0 && Z!=0)", kSig)))
      << printFormula(g);
  // 1/2 * P(X=1) * (1/3 * P(Y=1)) = 1/6 is scaled by 6 = 2 * 3.
  FormulaPtr h = eliminateConstants(parseFormula("1/2 * P(X=1) * (1/3 * P(Y=1)) = 1/6", kSig), "Z");
  EXPECT_FALSE(hasConst(h));
  Scm fig1 = causat::testing::fig1Scm();
  EXPECT_EQ(std::get<Rational>(termValue(fig1, h->left)),
            std::get<Rational>(termValue(fig1, parseTerm("P(X=1) * P(Y=1)", kSig))));
  EXPECT_EQ(std::get<Rational>(termValue(fig1, h->right)), 1);
}

TEST(ConstantFree, Budget) {
  EXPECT_THROW(eliminateConstants(parseFormula("P(X=1) <= 1/1000", kSig), "Z", 100), BudgetExceeded);
}

TEST(ConstantFree, PreservesTruthProperty) {
  causat::testing::GenConfig cfg;
  cfg.vars = {"X1", "X2", "X3"};
  cfg.maxSums = 1;
  causat::testing::Generator gen(22, cfg);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Scm scm = randomScm(seed, 3, 2, 3);
    FormulaPtr f = gen.formula();
    FormulaPtr g = eliminateConstants(f, "X1");
    EXPECT_FALSE(hasConst(g)) << printFormula(f);
    EXPECT_EQ(evalFormula(scm, f).truth, evalFormula(scm, g).truth) << printFormula(f);
  }
}

TEST(CompleteDag, Edges) {
  FormulaPtr f = parseFormula("P(X=1) = 1/2", kSig);
  auto r2 = reduceToCompleteDag(f, {"X", "Y"});
  EXPECT_TRUE(equal(r2.formula, f));
  EXPECT_EQ(r2.dag.edges(), (std::vector<std::pair<int, int>>{{0, 1}}));
  EXPECT_EQ(reduceToCompleteDag(f, {"X", "Y", "Z"}).dag.edges().size(), 3u);
  EXPECT_THROW(reduceToCompleteDag(parseFormula("P([X=1](Y=1)) = 1", kSig), {"X", "Y"}), ConfigError);
}

TEST(CausalOrdering, SingleEdgeExample) {
  const Signature sig{{"X", "Y"}, Domain{2}};
  auto enc = encodeCausalOrdering(parseFormula("P([X=1](Y=1)) = 1", sig), {"X", "Y"}, {"X", "Y"}, Domain{2});
  EXPECT_EQ(enc.control, "C");
  EXPECT_EQ(enc.vars, (std::vector<std::string>{"X", "Y", "C"}));
  EXPECT_EQ(printFormula(enc.formula),
            "P([C=0, X=1](Y=1)) = 1 AND P([C=1, X=0](Y=0)) = 1 AND P([C=1, X=1](Y=1)) = 1");
  EXPECT_EQ(classify(enc.formula).layer, 2);
}

TEST(CausalOrdering, SingleVariableAndFreshName) {
  const Signature one{{"X"}, Domain{2}};
  auto enc = encodeCausalOrdering(parseFormula("P(X=1) = 1", one), {"X"}, {"X"}, Domain{2});
  EXPECT_EQ(printFormula(enc.formula), "P([C=0](X=1)) = 1");
  const Signature withC{{"C", "X"}, Domain{2}};
  auto enc2 = encodeCausalOrdering(parseFormula("P(C=1) = 1", withC), {"X", "C"}, {"C", "X"}, Domain{2});
  EXPECT_EQ(enc2.control, "_freshC");
  EXPECT_THROW(encodeCausalOrdering(parseFormula("P([X=1](Y=1) && [X=0](Y=1)) = 0", kSig),
                                    {"Z", "X", "Y"}, {"Z", "X", "Y"}, Domain{2}),
               ConfigError);
  EXPECT_THROW(encodeCausalOrdering(parseFormula("P(X=1) = 1", kSig), {"Z", "X"}, {"Z", "X", "Y"}, Domain{2}),
               ConfigError);
}

TEST(CausalOrdering, ObservationalTreesStaySingleLeaves) {
  auto enc = encodeCausalOrdering(parseFormula("P([](X=1) && !([](Y=0))) = 0", kSig), {"Z", "X", "Y"},
                                  {"Z", "X", "Y"}, Domain{2});
  EXPECT_EQ(classify(enc.formula).layer, 2);
  EXPECT_NE(printFormula(enc.formula).find("P([C=0](X=1 && !(Y=0))) = 0"), std::string::npos)
      << printFormula(enc.formula);
}

TEST(CausalOrdering, AlwaysLayerTwo) {
  causat::testing::GenConfig cfg;
  cfg.vars = {"X", "Y"};
  cfg.maxLayer = 2;
  causat::testing::Generator gen(31, cfg);
  for (int i = 0; i < 200; ++i) {
    auto enc = encodeCausalOrdering(gen.formula(), {"Y", "X"}, {"X", "Y"}, Domain{2});
    EXPECT_EQ(classify(enc.formula).layer, 2);
  }
}

TEST(DagL3, IsolatedAndReadingModels) {
  Dag g = Dag::fromNames({"X", "Y", "Z"}, {{"X", "Y"}});
  FormulaPtr f = encodeDagConstraintL3(g, Domain{2});
  EXPECT_EQ(classify(f).layer, 3);
  EXPECT_TRUE(classify(f).usesSum);
  // U = (ux, uy, uz) flattened into one exogenous variable of 8 points.
  auto bit = [](int u, int k) { return (u >> k) & 1; };
  std::vector<int> tx, ty, tz, tyz;
  for (int u = 0; u < 8; ++u) {
    tx.push_back(bit(u, 2));
    tz.push_back(bit(u, 0));
  }
  for (int x = 0; x < 2; ++x) {
    for (int u = 0; u < 8; ++u) ty.push_back(x ^ bit(u, 1));
  }
  for (int x = 0; x < 2; ++x) {
    for (int z = 0; z < 2; ++z) {
      for (int u = 0; u < 8; ++u) tyz.push_back(x ^ z);
    }
  }
  Scm good = binaryScm({"X", "Y", "Z"}, {{0, {}, {0}, tx}, {1, {0}, {0}, ty}, {2, {}, {0}, tz}}, 8);
  Scm bad = binaryScm({"X", "Y", "Z"}, {{0, {}, {0}, tx}, {1, {0, 2}, {0}, tyz}, {2, {}, {0}, tz}}, 8);
  ASSERT_TRUE(validateScm(good).empty());
  ASSERT_TRUE(validateScm(bad).empty());
  EXPECT_EQ(evalFormula(good, f).truth, Truth::True);
  EXPECT_EQ(evalFormula(bad, f).truth, Truth::False);
}

TEST(DagL3, TwoVariableChainIsTrivial) {
  Dag g = Dag::fromNames({"X", "Y"}, {{"X", "Y"}});
  FormulaPtr f = encodeDagConstraintL3(g, Domain{2});
  // Reversed dependence X := Y is still consistent with the Y constraint but not the X one;
  // every model with X parentless satisfies it.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Scm scm = randomScm(seed, 2, 2, 3, g);
    EXPECT_EQ(evalFormula(scm, f).truth, Truth::True);
  }
}

TEST(DagL3, MatchesGenuineDependence) {
  const std::vector<std::string> vars = {"X1", "X2", "X3"};
  auto dags = causat::testing::allDags(vars);
  ASSERT_EQ(dags.size(), 25u);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Scm scm = randomScm(seed, 3, 2, 3);
    for (const Dag& g : dags) {
      EXPECT_EQ(evalFormula(scm, encodeDagConstraintL3(g, Domain{2})).truth == Truth::True,
                !causat::testing::violatesDag(scm, g));
    }
  }
}

TEST(DoCalc, StructureAndModels) {
  FormulaPtr f = buildDoCalcObservationRule("X", "Y", "Z", "W", Domain{2});
  Classification c = classify(f);
  EXPECT_EQ(c.arithmetic, Arithmetic::Poly);
  EXPECT_TRUE(c.usesSum);
  EXPECT_TRUE(c.usesCond);
  EXPECT_EQ(boundDummies(f).size(), 4u);
  EXPECT_EQ(expandedSize(f, 2), 16u * 4 + 1);

  // U = (ux, uy, uz, uw) in 16 equiprobable points.
  auto bit = [](int u, int k) { return (u >> k) & 1; };
  std::vector<int> tx, tz, tw, tyx, tyz;
  for (int u = 0; u < 16; ++u) {
    tx.push_back(bit(u, 3));
    tz.push_back(bit(u, 1));
    tw.push_back(bit(u, 0));
  }
  for (int x = 0; x < 2; ++x) {
    for (int u = 0; u < 16; ++u) tyx.push_back(x ^ bit(u, 2));
  }
  for (int z = 0; z < 2; ++z) {
    for (int u = 0; u < 16; ++u) tyz.push_back(z);
  }
  std::vector<std::string> vars = {"X", "Y", "Z", "W"};
  Scm yx = binaryScm(vars, {{0, {}, {0}, tx}, {1, {0}, {0}, tyx}, {2, {}, {0}, tz}, {3, {}, {0}, tw}}, 16);
  Scm yz = binaryScm(vars, {{0, {}, {0}, tx}, {1, {2}, {0}, tyz}, {2, {}, {0}, tz}, {3, {}, {0}, tw}}, 16);
  EXPECT_EQ(evalFormula(yx, f).truth, Truth::True);
  EXPECT_EQ(evalFormula(yz, f).truth, Truth::False);
}

TEST(FreshName, Suffixes) {
  EXPECT_EQ(freshName("C", {"X"}), "C");
  EXPECT_EQ(freshName("C", {"C", "C1"}), "C2");
}
