// Serial reference kernels against the OpenMP ones.

#include <benchmark/benchmark.h>

#include "stbc/codebook.hpp"
#include "stbc/spectrum.hpp"

namespace {

using namespace stbc;

EnumerationOptions threads(benchmark::State& state) {
  EnumerationOptions o;
  o.threads = static_cast<int>(state.range(0));
  return o;
}

void BM_MinDetReference(benchmark::State& state) {
  const LinearCode code = make_golden();
  const auto cons = Constellation::qam(4);
  for (auto _ : state) benchmark::DoNotOptimize(reference::min_determinant(code, cons));
}
BENCHMARK(BM_MinDetReference)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_MinDetParallel(benchmark::State& state) {
  const LinearCode code = make_golden();
  const auto cons = Constellation::qam(4);
  const auto o = threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(min_determinant(code, cons, o));
}
BENCHMARK(BM_MinDetParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_GoldenMinDet16QAM(benchmark::State& state) {
  const LinearCode code = make_golden();
  const auto cons = Constellation::qam(16);
  const auto o = threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(min_determinant(code, cons, o));
}
BENCHMARK(BM_GoldenMinDet16QAM)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SpectrumReference(benchmark::State& state) {
  const LinearCode code = make_quasi_orthogonal();
  const auto cons = Constellation::qam(4);
  for (auto _ : state) benchmark::DoNotOptimize(reference::distance_spectrum(code, cons));
}
BENCHMARK(BM_SpectrumReference)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SpectrumParallel(benchmark::State& state) {
  const LinearCode code = make_quasi_orthogonal();
  const auto cons = Constellation::qam(4);
  const auto o = threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(distance_spectrum(code, cons, true, o));
}
BENCHMARK(BM_SpectrumParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Rank2Reference(benchmark::State& state) {
  const LinearCode code = make_quasi_orthogonal();
  const auto cons = Constellation::qam(4);
  for (auto _ : state) benchmark::DoNotOptimize(reference::rank2_multiplicity(code, cons));
}
BENCHMARK(BM_Rank2Reference)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Rank2Parallel(benchmark::State& state) {
  const LinearCode code = make_quasi_orthogonal();
  const auto cons = Constellation::qam(4);
  const auto o = threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(rank2_multiplicity(code, cons, o));
}
BENCHMARK(BM_Rank2Parallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

// The 9^8 enumeration behind the 4x2 code's rank-2 count.
void BM_Rank2New4x2(benchmark::State& state) {
  const LinearCode code = make_code("new4x2-4qam");
  const auto cons = Constellation::qam(4);
  const auto o = threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(rank2_multiplicity(code, cons, o));
}
BENCHMARK(BM_Rank2New4x2)->Arg(1)->Arg(4)->Unit(benchmark::kSecond)->Iterations(1)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
