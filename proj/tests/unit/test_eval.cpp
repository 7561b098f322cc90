#include <gtest/gtest.h>

#include "causat/classify.hpp"
#include "causat/errors.hpp"
#include "causat/eval.hpp"
#include "causat/parser.hpp"
#include "causat/printer.hpp"
#include "fig1.hpp"
#include "gen.hpp"
#include "oracle.hpp"

using namespace causat;
using causat::testing::fig1Scm;

namespace {

const Signature kSig{{"Z", "X", "Y"}, Domain{2}};

Rational value(const Scm& scm, const char* text) {
  EvalOutcome out = termValue(scm, parseTerm(text, kSig));
  EXPECT_TRUE(std::holds_alternative<Rational>(out)) << text;
  return std::holds_alternative<Rational>(out) ? std::get<Rational>(out) : Rational(-1);
}

Truth truth(const Scm& scm, const char* text) { return evalFormula(scm, parseFormula(text, kSig)).truth; }

Bn fig1Bn() { return bnFromJoint(jointDistribution(fig1Scm()), Dag::complete({"Z", "X", "Y"})); }

}  // namespace

TEST(Eval, SatisfiesCfOnFig1Rows) {
  Scm scm = fig1Scm();
  std::vector<int> u = {0, 0, 1};
  EXPECT_TRUE(satisfiesCf(scm, u, parseEvent("[](X=1 && Y=1)", kSig)));
  EXPECT_FALSE(satisfiesCf(scm, u, parseEvent("[X=0](Y=1)", kSig)));
  for (const auto& s : scm.exo.support) {
    EXPECT_FALSE(satisfiesCf(scm, s.values, parseEvent("[X=1](Y=1) && [X=1](Y=0)", kSig)));
  }
}

TEST(Eval, Fig1Terms) {
  Scm scm = fig1Scm();
  EXPECT_EQ(value(scm, "P(Z=0 && X=1 && Y=1)"), ratio(4266, 10000));
  EXPECT_EQ(value(scm, "P([X=1](Y=1))"), ratio(94, 100));
  EXPECT_EQ(value(scm, "P([X=0](Y=1))"), ratio(1, 10));
  EXPECT_EQ(value(scm, "P([X=1](Y=1) | X=0 && Y=0)"), 1);
  EXPECT_EQ(value(scm, "P(X=0 && Y=0)"), ratio(3978, 10000));
  EXPECT_EQ(value(scm, "P(Y=1 | X=1)"), ratio(5106, 5580));
  EXPECT_EQ(value(scm, "P(Y=1 | X=0)"), ratio(442, 4420));
  EXPECT_EQ(value(scm, "P(X=1 && X=0)"), 0);
}

TEST(Eval, Fig1Formulas) {
  Scm scm = fig1Scm();
  EXPECT_EQ(truth(scm, "P([X=1](Y=1)) - P([X=0](Y=1)) > 0"), Truth::True);
  EXPECT_EQ(truth(scm, "sum x . P(Y=1 && X=x) = P(Y=1)"), Truth::True);
  EXPECT_EQ(truth(scm, "P([X=1](Y=1)) = 95/100"), Truth::False);
}

TEST(Eval, UndefinedConditional) {
  Scm scm = fig1Scm();
  Verdict v = evalFormula(scm, parseFormula("P(X=1 | X=0 && X=1) = 0", kSig));
  EXPECT_EQ(v.truth, Truth::Undefined);
  ASSERT_TRUE(v.evidence.has_value());
  EXPECT_EQ(printTerm(v.evidence->conditional), "P(X=1 | X=0 && X=1)");
  EXPECT_EQ(truth(scm, "NOT P(X=1 | X=0 && X=1) = 0"), Truth::Undefined);
  EXPECT_EQ(truth(scm, "P(X=1 | X=0 && X=1) = 0 OR P(X=1) >= 0"), Truth::True);
  EXPECT_EQ(truth(scm, "P(X=1 | X=0 && X=1) = 0 AND P(X=1) < 0"), Truth::False);
  EXPECT_TRUE(std::holds_alternative<Undefined>(
      termValue(scm, parseTerm("2 * (P(Y=1) + P(Y=1 | Z=1 && Z=0))", kSig))));
  EXPECT_TRUE(std::holds_alternative<Undefined>(
      termValue(scm, parseTerm("sum x . P(Y=1 | X=x && Z=1 && Z=0)", kSig))));
}

TEST(Eval, EvidenceIsLeftmostInnermost) {
  Verdict v = evalFormula(fig1Scm(), parseFormula(
      "P(Y=1 | Z=0 && Z=1) + P(X=1 | X=0 && X=1) = 0", kSig));
  ASSERT_TRUE(v.evidence.has_value());
  EXPECT_EQ(printTerm(v.evidence->conditional), "P(Y=1 | Z=0 && Z=1)");
}

TEST(Eval, Bn) {
  EXPECT_EQ(evalFormulaBn(fig1Bn(), parseFormula("P(Y=1 && X=1) = 5106/10000", kSig)).truth, Truth::True);
  Bn one;
  one.dag = Dag({"X"}, {});
  one.domain = Domain{2};
  one.cpts = {{{ratio(7, 10), ratio(3, 10)}}};
  EXPECT_EQ(evalFormulaBn(one, parseFormula("P(X=1) <= 3/10", Signature{{"X"}, Domain{2}})).truth, Truth::True);
  try {
    evalFormulaBn(fig1Bn(), parseFormula("P([X=1](Y=1)) = 0", kSig));
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_NE(std::string(e.what()).find("interventional formula on BN"), std::string::npos);
  }
}

TEST(Eval, SumBudget) {
  EvalOptions tight;
  tight.sumBudget = 3;
  EXPECT_THROW(termValue(fig1Scm(), parseTerm("sum a . sum b . P(X=a && Y=b)", kSig), tight), BudgetExceeded);
}

TEST(Eval, UnknownVariableIsAnError) {
  TermPtr t = prob(obs(atom("Q", 0)));
  EXPECT_THROW(termValue(fig1Scm(), t), EvalError);
}

TEST(EvalProperties, AgreesWithOracleAndJoint) {
  causat::testing::GenConfig cfg;
  cfg.vars = {"X1", "X2", "X3"};
  cfg.maxSums = 1;
  causat::testing::Generator gen(11, cfg);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Scm scm = randomScm(seed, 3, 2, 4);
    TermPtr t = gen.term();
    EvalOutcome got = termValue(scm, t);
    auto expect = causat::testing::oracleTerm(scm, t);
    ASSERT_EQ(std::holds_alternative<Rational>(got), expect.has_value()) << printTerm(t);
    if (expect) EXPECT_EQ(std::get<Rational>(got), *expect) << printTerm(t);
    if (classifyTerm(t).layer == 1) {
      JointTable jt = jointDistribution(scm);
      EvalOutcome viaJoint = termValue(liftJointToScm(jt), t);
      EXPECT_EQ(got.index(), viaJoint.index());
      if (expect) EXPECT_EQ(std::get<Rational>(viaJoint), *expect);
    }
  }
}

TEST(EvalProperties, SumInterventionAndMonotonicity) {
  causat::testing::GenConfig cfg;
  cfg.vars = {"X1", "X2", "X3"};
  cfg.maxLayer = 1;
  causat::testing::Generator gen(12, cfg);
  const Signature sig{{"X1", "X2", "X3"}, Domain{2}};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Scm scm = randomScm(seed, 3, 2, 4);
    // Σ soundness
    TermPtr body = prob(obs(propAnd(atom("X2", ValueRef::ofDummy("x")), atom("X3", static_cast<int>(seed % 2)))));
    Rational expanded = 0;
    for (int v = 0; v < 2; ++v) expanded += std::get<Rational>(termValue(scm, substituteDummy(body, "x", v)));
    EXPECT_EQ(std::get<Rational>(termValue(scm, sum("x", body))), expanded);
    // normalization
    EXPECT_EQ(std::get<Rational>(termValue(scm, parseTerm("sum a . sum b . sum c . P(X1=a, X2=b, X3=c)", sig))), 1);
    // intervention consistency
    PropPtr p = propOr(atom("X3", 1), atom("X1", 0));
    Intervention alpha = {{"X2", ValueRef::literal(1)}};
    Scm done = applyIntervention(scm, std::vector<std::pair<std::string, int>>{{"X2", 1}});
    EXPECT_EQ(std::get<Rational>(termValue(scm, prob(leaf(alpha, p)))),
              std::get<Rational>(termValue(done, prob(obs(p)))));
    // monotonicity
    CfPtr e1 = leaf(alpha, atom("X3", 1));
    CfPtr e2 = leaf(alpha, atom("X1", 0));
    Rational both = probabilityOf(scm, cfAnd(e1, e2));
    EXPECT_LE(both, probabilityOf(scm, e1));
    EXPECT_LE(both, probabilityOf(scm, e2));
    (void)gen;
  }
}

TEST(EvalProperties, BnMatchesLiftedJoint) {
  causat::testing::GenConfig cfg;
  cfg.vars = {"Z", "X", "Y"};
  cfg.maxLayer = 1;
  cfg.maxSums = 1;
  causat::testing::Generator gen(13, cfg);
  Bn bn = fig1Bn();
  Scm lifted = liftJointToScm(bnJointDistribution(bn));
  for (int i = 0; i < 200; ++i) {
    FormulaPtr f = gen.formula();
    EXPECT_EQ(evalFormulaBn(bn, f).truth, evalFormula(lifted, f).truth) << printFormula(f);
  }
}
