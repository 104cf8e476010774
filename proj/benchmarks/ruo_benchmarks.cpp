#include <benchmark/benchmark.h>

#include "ruo/asymptotics.hpp"
#include "ruo/attractors.hpp"
#include "ruo/choi.hpp"
#include "ruo/io.hpp"
#include "ruo/random.hpp"

namespace {

ruo::UnitaryEnsemble random_pair(std::size_t d) {
  ruo::Rng rng(d);
  return ruo::validate_ensemble({{0.4, ruo::random_unitary(d, rng)}, {0.6, ruo::random_unitary(d, rng)}});
}

void BM_Superoperator(benchmark::State& state) {
  const auto e = random_pair(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ruo::superoperator(e));
}
BENCHMARK(BM_Superoperator)->RangeMultiplier(2)->Range(2, 16);

void BM_UnitSpectrum(benchmark::State& state) {
  const auto s = ruo::superoperator(random_pair(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(ruo::unit_spectrum(s));
}
BENCHMARK(BM_UnitSpectrum)->RangeMultiplier(2)->Range(2, 8)->Unit(benchmark::kMillisecond);

void BM_BuildAttractorSpaceCnot(benchmark::State& state) {
  const auto e = ruo::to_ensemble(ruo::builtin("cnot_pair"));
  for (auto _ : state) benchmark::DoNotOptimize(ruo::build_attractor_space(e));
}
BENCHMARK(BM_BuildAttractorSpaceCnot)->Unit(benchmark::kMillisecond);

void BM_BuildAttractorSpaceRandom(benchmark::State& state) {
  const auto e = random_pair(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ruo::build_attractor_space(e));
}
BENCHMARK(BM_BuildAttractorSpaceRandom)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_ConvergenceTraceCnot(benchmark::State& state) {
  const auto e = ruo::to_ensemble(ruo::builtin("cnot_pair", 0.9));
  const auto space = ruo::build_attractor_space(e);
  ruo::Rng rng(1);
  const auto rho = ruo::random_density(4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ruo::convergence_trace(e, space, rho, state.range(0)));
}
BENCHMARK(BM_ConvergenceTraceCnot)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_ChoiAudit(benchmark::State& state) {
  const auto s = ruo::superoperator(random_pair(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(ruo::audit(ruo::reshuffle(s)));
}
BENCHMARK(BM_ChoiAudit)->RangeMultiplier(2)->Range(2, 8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
