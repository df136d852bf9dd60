#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "hrod/criterion.hpp"
#include "hrod/kernels.hpp"
#include "hrod/model.hpp"
#include "hrod/reference.hpp"
#include "hrod/spectral.hpp"

namespace {

std::vector<double> bump(const hrod::Grid& grid) {
  std::vector<double> w(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double x = grid.x(j);
    w[j] = std::exp(-x * x) + 0.5 * x * x * std::exp(-x * x / 2);
  }
  return w;
}

void BM_OneSided_Parallel(benchmark::State& st) {
  const auto grid = hrod::Grid::make(20.0, static_cast<std::size_t>(st.range(0)));
  const auto w = bump(grid);
  for (auto _ : st) benchmark::DoNotOptimize(hrod::one_sided_convolutions(grid, w));
}

void BM_OneSided_Reference(benchmark::State& st) {
  const auto grid = hrod::Grid::make(20.0, static_cast<std::size_t>(st.range(0)));
  const auto w = bump(grid);
  for (auto _ : st) benchmark::DoNotOptimize(hrod::reference::one_sided_convolutions(grid, w));
}

void BM_Scan_Parallel(benchmark::State& st) {
  const auto grid = hrod::Grid::make(20.0, static_cast<std::size_t>(st.range(0)));
  const auto spec = hrod::preset_rotation_ch({0.1, 1.0, 1.0, 0.0, 0.05, 0.02});
  const auto s = hrod::make_state(grid, bump(grid));
  for (auto _ : st) benchmark::DoNotOptimize(hrod::scan_profile(spec, s));
}

void BM_Scan_Reference(benchmark::State& st) {
  const auto grid = hrod::Grid::make(20.0, static_cast<std::size_t>(st.range(0)));
  const auto spec = hrod::preset_rotation_ch({0.1, 1.0, 1.0, 0.0, 0.05, 0.02});
  const auto s = hrod::make_state(grid, bump(grid));
  for (auto _ : st) benchmark::DoNotOptimize(hrod::reference::scan_profile(spec, s));
}

}  // namespace

BENCHMARK(BM_OneSided_Parallel)->RangeMultiplier(2)->Range(512, 4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OneSided_Reference)->RangeMultiplier(2)->Range(512, 4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Scan_Parallel)->RangeMultiplier(4)->Range(1024, 16384)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Scan_Reference)->RangeMultiplier(4)->Range(1024, 16384)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
