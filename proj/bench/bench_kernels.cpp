#include <benchmark/benchmark.h>

#include "eulerdd/analysis.hpp"

using namespace eulerdd;

namespace {

const Scenario& s3() {
  static const Scenario s = make_scenario("symmetric-s3");
  return s;
}

void BM_FMap(benchmark::State& state) {
  const auto exec = state.range(0) ? kernels::Exec::Parallel : kernels::Exec::Serial;
  Rng rng(1);
  const Matrix x = random_hermitian(rng, 8);
  for (auto _ : state) benchmark::DoNotOptimize(f_map(s3().profiles, x, 256, exec));
}
BENCHMARK(BM_FMap)->Arg(0)->Arg(1)->ArgName("parallel");

void BM_AverageHamiltonian(benchmark::State& state) {
  const auto exec = state.range(0) ? kernels::Exec::Parallel : kernels::Exec::Serial;
  const auto schedule = s3().schedule();
  const Matrix h0 = generic_drift(8, 2, 1).total();
  for (auto _ : state) benchmark::DoNotOptimize(average_hamiltonian(schedule, h0, 128, exec));
}
BENCHMARK(BM_AverageHamiltonian)->Arg(0)->Arg(1)->ArgName("parallel");

void BM_GroupAverage(benchmark::State& state) {
  const auto p = make_scenario("pauli", {.qubits = 3});
  Rng rng(2);
  const Matrix x = random_hermitian(rng, 8);
  const auto& reps = p.group.rep.matrices;
  for (auto _ : state) {
    if (state.range(0)) benchmark::DoNotOptimize(kernels::group_average(reps, x));
    else benchmark::DoNotOptimize(kernels::group_average_serial(reps, x));
  }
}
BENCHMARK(BM_GroupAverage)->Arg(0)->Arg(1)->ArgName("parallel");

}  // namespace

BENCHMARK_MAIN();
