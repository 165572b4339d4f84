#include <benchmark/benchmark.h>

#include "chemlambda/analysis.hpp"
#include "chemlambda/lambda.hpp"
#include "chemlambda/mol.hpp"
#include "chemlambda/rewrites.hpp"
#include "chemlambda/scheduler.hpp"

namespace {

using namespace chemlambda;

TermPtr ackermann22() {
  return application(
      application(
          parse_lambda(
              "\\m.\\n.m (\\g.\\h.h g (g (\\s.\\z.s z))) (\\k.\\s.\\z.s (k s z)) n"),
          church(2)),
      church(2));
}

void BM_ParseBetaRedex(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse_mol("L 1 2 c\nA c 4 3"));
}
BENCHMARK(BM_ParseBetaRedex);

void BM_FindMatchesChurch(benchmark::State& state) {
  Molecule m = compile(application(
      parse_lambda("\\m.\\n.\\f.m (n f)"),
      church(static_cast<unsigned>(state.range(0)))));
  for (auto _ : state) {
    for (MoveKind kind : rewrite_move_kinds())
      benchmark::DoNotOptimize(find_matches(m, kind));
  }
}
BENCHMARK(BM_FindMatchesChurch)->Arg(4)->Arg(16);

void BM_ReduceTimes(benchmark::State& state) {
  const unsigned n = static_cast<unsigned>(state.range(0));
  TermPtr term = application(
      application(parse_lambda("\\m.\\n.\\f.m (n f)"), church(n)), church(n));
  Molecule m = compile(term);
  AlgorithmConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(reduce(m, cfg));
}
BENCHMARK(BM_ReduceTimes)->Arg(2)->Arg(4);

void BM_ReduceAckermann22(benchmark::State& state) {
  Molecule m = compile(ackermann22());
  AlgorithmConfig cfg;
  cfg.max_cycles = 100000;
  for (auto _ : state) benchmark::DoNotOptimize(reduce(m, cfg));
}
BENCHMARK(BM_ReduceAckermann22)->Unit(benchmark::kMillisecond);

void BM_CanonicalForm(benchmark::State& state) {
  Molecule m = compile(church(static_cast<unsigned>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(canonical_form(m));
}
BENCHMARK(BM_CanonicalForm)->Arg(4)->Arg(16);

void BM_OracleAckermann22(benchmark::State& state) {
  TermPtr term = ackermann22();
  for (auto _ : state) benchmark::DoNotOptimize(beta_normalize(term, 1000000));
}
BENCHMARK(BM_OracleAckermann22)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
