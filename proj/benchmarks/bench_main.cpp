#include <benchmark/benchmark.h>

#include "sparsetail/analyze.hpp"
#include "sparsetail/synth.hpp"
#include "sparsetail/tail.hpp"

using namespace sparsetail;

namespace {

struct Demo {
  Sft sft = fullShift(2);
  Potential phi{sft, 1, {{Word{0}, Rational(1)}, {Word{1}, Rational(-1)}}};
  ControlParams params = geometricParams(3, Rational(4, 3), Rational(6, 25), Rational(1, 3), {1, 2, 3, 3}, 0);
  Scale scale;

  Demo() {
    std::vector<std::int64_t> soj;
    for (int n = 0; n < 3; ++n) {
      soj.push_back(static_cast<std::int64_t>(universalWord(sft, params.densityDepth[static_cast<std::size_t>(n)]).size()));
    }
    scale = buildScale(6, minimalFactors(params, Rational(1), soj, 6));
  }
};

const Demo& demo() {
  static const Demo d;
  return d;
}

void BM_BuildTail(benchmark::State& state) {
  const Scale& scale = demo().scale;
  for (auto _ : state) benchmark::DoNotOptimize(buildTail(scale, 3));
}
BENCHMARK(BM_BuildTail)->Unit(benchmark::kMillisecond);

void BM_ValidateTailSampled(benchmark::State& state) {
  const SparseTail tail = buildTail(demo().scale, 3);
  for (auto _ : state) benchmark::DoNotOptimize(validateTail(tail, {false, 97}));
}
BENCHMARK(BM_ValidateTailSampled)->Unit(benchmark::kMillisecond);

void BM_UniversalWord(benchmark::State& state) {
  const Sft sft = fullShift(2);
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(universalWord(sft, m));
}
BENCHMARK(BM_UniversalWord)->Arg(4)->Arg(10)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_Synthesize(benchmark::State& state) {
  const Demo& d = demo();
  const int depth = static_cast<int>(state.range(0));
  const SparseTail tail = buildTail(d.scale, depth);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(d.sft, d.phi, d.scale, tail, d.params));
  state.SetItemsProcessed(state.iterations() * tail.horizon());
}
BENCHMARK(BM_Synthesize)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_VerifyControl(benchmark::State& state) {
  const Demo& d = demo();
  const SparseTail tail = buildTail(d.scale, 3);
  const SynthesisLedger ledger = synthesize(d.sft, d.phi, d.scale, tail, d.params);
  const bool withLedger = state.range(0) != 0;
  for (auto _ : state) {
    if (withLedger) {
      benchmark::DoNotOptimize(verifyControl(d.sft, ledger.prefix, tail, d.params, d.phi, ledger));
    } else {
      benchmark::DoNotOptimize(verifyControl(d.sft, ledger.prefix, tail, d.params, d.phi));
    }
  }
  state.SetItemsProcessed(state.iterations() * tail.horizon());
}
BENCHMARK(BM_VerifyControl)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EmpiricalMeasure(benchmark::State& state) {
  const Demo& d = demo();
  const SparseTail tail = buildTail(d.scale, 3);
  const SynthesisLedger ledger = synthesize(d.sft, d.phi, d.scale, tail, d.params);
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(empiricalMeasure(ledger.prefix, 2, tail.horizon(), order));
  state.SetItemsProcessed(state.iterations() * tail.horizon());
}
BENCHMARK(BM_EmpiricalMeasure)->Arg(3)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
