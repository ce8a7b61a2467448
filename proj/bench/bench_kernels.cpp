#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "wlopt/correlation.hpp"
#include "wlopt/nullmodel.hpp"
#include "wlopt/rng.hpp"
#include "wlopt/table.hpp"

using namespace wlopt;

namespace {

std::vector<double> tied_values(std::size_t n, std::uint64_t seed, std::uint64_t levels) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = 0.5 * static_cast<double>(rng.below(levels));
  return v;
}

FrequencyLengthTable zipf_table(std::size_t types) {
  std::vector<TypeEntry> entries;
  for (std::size_t i = 1; i <= types; ++i) {
    double length = std::ceil(std::log2(static_cast<double>(i + 1)));
    entries.push_back({"", 100000 / i, length});
  }
  return FrequencyLengthTable(std::move(entries));
}

void BM_pair_counts_sorted(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> x = tied_values(n, 11, 40);
  std::vector<double> y = tied_values(n, 23, 40);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pair_counts(x, y));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_pair_counts_sorted)->Arg(1000)->Arg(10000)->Complexity();

void BM_pair_counts_quadratic(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> x = tied_values(n, 11, 40);
  std::vector<double> y = tied_values(n, 23, 40);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pair_counts_naive(x, y));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_pair_counts_quadratic)->Arg(1000)->Arg(10000)->Complexity();

void BM_null_serial(benchmark::State& state) {
  FrequencyLengthTable table = zipf_table(100);
  std::uint64_t reps = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(monte_carlo_null(table, reps, 7, Execution::serial));
  }
}
BENCHMARK(BM_null_serial)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_null_parallel(benchmark::State& state) {
  FrequencyLengthTable table = zipf_table(100);
  std::uint64_t reps = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(monte_carlo_null(table, reps, 7, Execution::parallel));
  }
}
BENCHMARK(BM_null_parallel)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_permutation_test_serial(benchmark::State& state) {
  FrequencyLengthTable table = zipf_table(100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(length_permutation_test(table, 10000, 7, Execution::serial));
  }
}
BENCHMARK(BM_permutation_test_serial)->Unit(benchmark::kMillisecond);

void BM_permutation_test_parallel(benchmark::State& state) {
  FrequencyLengthTable table = zipf_table(100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(length_permutation_test(table, 10000, 7, Execution::parallel));
  }
}
BENCHMARK(BM_permutation_test_parallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
