// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "mwd/bench.hpp"
#include "mwd/reference.hpp"

using namespace mwd;

namespace {

void run_cell_args(benchmark::internal::Benchmark* b) {
  for (int m : {1, 3}) b->Args({m});
  b->Unit(benchmark::kMillisecond);
}

CellOptions cell_options() {
  CellOptions opt;
  opt.reps = 16;
  return opt;
}

void BM_RunCellParallel(benchmark::State& state) {
  const Signal truth = test_signal("lidar", 4096);
  const auto channels = homogeneous_channels(static_cast<std::size_t>(state.range(0)), 0.3, 1.0);
  const EstimatorConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(run_cell(truth, channels, cfg, cell_options()).rmse);
  state.counters["threads"] = omp_get_max_threads();
}
BENCHMARK(BM_RunCellParallel)->Apply(run_cell_args);

void BM_RunCellSerial(benchmark::State& state) {
  const Signal truth = test_signal("lidar", 4096);
  const auto channels = homogeneous_channels(static_cast<std::size_t>(state.range(0)), 0.3, 1.0);
  const EstimatorConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(reference::run_cell_serial(truth, channels, cfg, cell_options()).rmse);
}
BENCHMARK(BM_RunCellSerial)->Apply(run_cell_args);

void BM_ForwardFast(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Signal f = test_signal("doppler", n);
  const int j1 = grid_level(n) - 2;
  for (auto _ : state) benchmark::DoNotOptimize(forward_transform(f, 0, j1).energy());
}
BENCHMARK(BM_ForwardFast)->RangeMultiplier(4)->Range(64, 4096);

void BM_ForwardDirect(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Signal f = test_signal("doppler", n);
  const int j1 = grid_level(n) - 2;
  for (auto _ : state) benchmark::DoNotOptimize(reference::direct_analysis(f, 0, j1).energy());
}
BENCHMARK(BM_ForwardDirect)->RangeMultiplier(4)->Range(64, 1024);

void BM_ConvolveFft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Signal f = test_signal("blocks", n);
  const auto k = KernelSpec::boxcar(default_boxcar_width(0));
  for (auto _ : state) benchmark::DoNotOptimize(convolve(f, k).data());
}
BENCHMARK(BM_ConvolveFft)->RangeMultiplier(4)->Range(64, 4096);

void BM_ConvolveDirect(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Signal f = test_signal("blocks", n);
  const auto k = KernelSpec::boxcar(default_boxcar_width(0));
  for (auto _ : state) benchmark::DoNotOptimize(reference::circular_convolve(f, k).data());
}
BENCHMARK(BM_ConvolveDirect)->RangeMultiplier(4)->Range(64, 1024);

}  // namespace

BENCHMARK_MAIN();
