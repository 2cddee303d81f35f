#include <benchmark/benchmark.h>

#include "drspher/heat.hpp"
#include "drspher/hypergroup.hpp"

using namespace drspher;

namespace {

const Space& space() {
  static const Space s = calibrated_space(2, 1);
  return s;
}

void BM_EvalPhi(benchmark::State& state) {
  std::vector<double> rs;
  for (int i = 0; i < state.range(0); ++i) rs.push_back(20.0 * i / state.range(0));
  double l = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(space().spherical().real_row(l, rs));
    l += 1e-3;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvalPhi)->Arg(64)->Arg(1024);

void BM_Transform(benchmark::State& state) {
  const auto p1 = heat_kernel(space(), 1.0).profile;
  const auto grid = UniformGrid::symmetric(8.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spherical_transform(space(), p1, grid));
}
BENCHMARK(BM_Transform)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_HeatKernel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(heat_kernel(space(), 1.0));
}
BENCHMARK(BM_HeatKernel)->Unit(benchmark::kMillisecond);

void BM_KernelBuild(benchmark::State& state) {
  const auto grid = UniformGrid::symmetric(8.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(KernelTensor::build(space(), grid));
}
BENCHMARK(BM_KernelBuild)->Arg(33)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_Odot(benchmark::State& state) {
  const auto grid = UniformGrid::symmetric(8.0, 129);
  static const KernelTensor K = KernelTensor::build(space(), grid);
  const auto G = heat_multiplier(space(), 1.0, grid);
  for (auto _ : state) benchmark::DoNotOptimize(odot(space(), K, G, G));
}
BENCHMARK(BM_Odot)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
