#include <benchmark/benchmark.h>

#include "nls/operator.hpp"
#include "nls/spectra.hpp"

using namespace nls;

namespace {

AssembledOperator two_species(int n) {
  return assemble_K({1.0, 0.5}, {Kernel::uniform(), Kernel::triangle()}, MatrixField::random(2, 7),
                    build_grid_1d(-1.0, 1.0, n));
}

void BM_Assemble(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(two_species(n));
  state.SetComplexityN(n);
}
BENCHMARK(BM_Assemble)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);

void BM_Apply(benchmark::State& state) {
  const AssembledOperator op = two_species(static_cast<int>(state.range(0)));
  BlockVector x(op.size(), 1.0), y(op.size());
  for (auto _ : state) {
    op.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_Apply)->RangeMultiplier(2)->Range(64, 1024);

void BM_PrincipalEigenpair(benchmark::State& state) {
  const AssembledOperator op = two_species(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(principal_eigenpair(op).lambda_p);
}
BENCHMARK(BM_PrincipalEigenpair)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

// sigma = 50, m = 1: nearly flat top of the spectrum, exercises the fallback path
void BM_NarrowGap(benchmark::State& state) {
  const AssembledOperator op = assemble_K_sigma_m(50.0, 1.0, {Kernel::uniform()}, MatrixField::scalar("2 - x^2"),
                                                  build_grid_1d(-1.0, 1.0, static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(principal_eigenpair(op).lambda_p);
}
BENCHMARK(BM_NarrowGap)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_FullSpectrum(benchmark::State& state) {
  const AssembledOperator op = two_species(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(full_spectrum_small(op));
}
BENCHMARK(BM_FullSpectrum)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
