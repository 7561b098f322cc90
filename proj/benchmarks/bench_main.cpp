#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "causat/eval.hpp"
#include "causat/lp.hpp"
#include "causat/model.hpp"
#include "causat/parser.hpp"
#include "causat/solve.hpp"
#include "causat/transform.hpp"

using namespace causat;

namespace {

Signature signatureOf(const Scm& scm) { return Signature{scm.xVars, scm.domain}; }

void BM_JointDistribution(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Scm scm = randomScm(7, n, 2, 16);
  for (auto _ : state) benchmark::DoNotOptimize(jointDistribution(scm));
}
BENCHMARK(BM_JointDistribution)->DenseRange(2, 8, 2);

void BM_TermValueCounterfactual(benchmark::State& state) {
  Scm scm = randomScm(11, 3, 2, static_cast<int>(state.range(0)));
  TermPtr t = parseTerm("P([X1=1](X3=1) | X1=0 && X3=0) + P([X2=0](X3=1) && [X2=1](X3=0))", signatureOf(scm));
  for (auto _ : state) benchmark::DoNotOptimize(termValue(scm, t));
}
BENCHMARK(BM_TermValueCounterfactual)->RangeMultiplier(4)->Range(4, 256);

void BM_TermValueSums(benchmark::State& state) {
  Scm scm = randomScm(13, 4, 2, 16);
  TermPtr t = parseTerm("sum a. sum b. sum c. P([X1=a](X4=b) && X2=c)", signatureOf(scm));
  for (auto _ : state) benchmark::DoNotOptimize(termValue(scm, t));
}
BENCHMARK(BM_TermValueSums);

// Random dense system with a known interior point, so it is always feasible.
void BM_LinearFeasibility(benchmark::State& state) {
  const int vars = static_cast<int>(state.range(0));
  LinearSystem sys;
  sys.numVars = vars;
  std::vector<Rational> all(static_cast<std::size_t>(vars), Rational(1));
  sys.constraints.push_back({all, RelOp::Eq, Rational(1)});
  std::uint64_t s = 12345;
  for (int row = 0; row < vars; ++row) {
    std::vector<Rational> c;
    Rational atCenter = 0;
    for (int j = 0; j < vars; ++j) {
      s = s * 6364136223846793005ULL + 1442695040888963407ULL;
      c.emplace_back(static_cast<long>(s >> 60) - 8);
      atCenter += c.back() / vars;
    }
    sys.constraints.push_back({c, RelOp::Lt, atCenter + 1});
  }
  for (auto _ : state) benchmark::DoNotOptimize(linearFeasibilityExact(sys));
}
BENCHMARK(BM_LinearFeasibility)->RangeMultiplier(2)->Range(4, 32);

void BM_SolveSatL1(benchmark::State& state) {
  SolveConfig cfg;
  cfg.vars = {"X", "Y", "Z"};
  cfg.domain = Domain{2};
  cfg.supportBound = static_cast<int>(state.range(0));
  FormulaPtr f = parseFormula(
      "P(X=1 && Y=1) > P(X=1) * P(Y=1) AND P(Z=1 | X=1) = 1/2 AND P(X=0 || Z=0) <= 3/4",
      Signature{cfg.vars, cfg.domain});
  for (auto _ : state) benchmark::DoNotOptimize(solveSat(f, cfg));
}
BENCHMARK(BM_SolveSatL1)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

void BM_SolveSatL2(benchmark::State& state) {
  SolveConfig cfg;
  cfg.vars = {"X", "Y"};
  cfg.domain = Domain{2};
  cfg.supportBound = static_cast<int>(state.range(0));
  FormulaPtr f = parseFormula("P([X=1](Y=1)) - P([X=0](Y=1)) >= 1/2 AND P(X=1 && Y=0) > 1/5",
                              Signature{cfg.vars, cfg.domain});
  for (auto _ : state) benchmark::DoNotOptimize(solveSat(f, cfg));
}
BENCHMARK(BM_SolveSatL2)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_RuleThreeCounterexample(benchmark::State& state) {
  SolveConfig cfg;
  cfg.vars = {"X", "Y", "Z", "W"};
  cfg.domain = Domain{2};
  cfg.supportBound = 2;
  FormulaPtr f = buildDoCalcObservationRule("X", "Y", "Z", "W", cfg.domain);
  for (auto _ : state) benchmark::DoNotOptimize(solveValidityBounded(f, cfg));
}
BENCHMARK(BM_RuleThreeCounterexample)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace
BENCHMARK_MAIN();
