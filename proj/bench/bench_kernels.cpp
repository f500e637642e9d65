// Serial reference vs OpenMP kernel on the same inputs.
#include <benchmark/benchmark.h>

#include <omp.h>

#include "hopim/analysis.hpp"
#include "hopim/bounds.hpp"
#include "hopim/graph.hpp"
#include "hopim/oracle.hpp"
#include "hopim/selection.hpp"

namespace {

const hopim::Graph& bench_graph() {
  static const hopim::Graph g = [] {
    hopim::PowerLawOptions opts;
    opts.nodes = 20'000;
    opts.edges = 100'000;
    opts.gamma = 2.5;
    opts.seed = 7;
    return hopim::apply_weight_model(hopim::generate_power_law(opts), hopim::WeightModel::weighted_cascade());
  }();
  return g;
}

void BM_UpperBoundsSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(hopim::serial::upper_bounds(bench_graph(), 2));
}
void BM_UpperBoundsParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(hopim::upper_bounds(bench_graph(), 2, static_cast<int>(st.range(0))));
}

void BM_FirstRoundSerial(benchmark::State& st) {
  hopim::HopState state(bench_graph(), {hopim::Diffusion::ic, 2});
  for (auto _ : st) benchmark::DoNotOptimize(hopim::serial::first_round_gains(state));
}
void BM_FirstRoundParallel(benchmark::State& st) {
  hopim::HopState state(bench_graph(), {hopim::Diffusion::ic, 2});
  for (auto _ : st) benchmark::DoNotOptimize(hopim::first_round_gains(state, static_cast<int>(st.range(0))));
}

const std::vector<hopim::NodeId> kSeeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};

void BM_SpreadSerial(benchmark::State& st) {
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        hopim::serial::estimate_spread(bench_graph(), kSeeds, hopim::Diffusion::ic, hopim::kUnlimitedHops, 500, 1));
  }
}
void BM_SpreadParallel(benchmark::State& st) {
  for (auto _ : st) {
    benchmark::DoNotOptimize(hopim::estimate_spread(bench_graph(), kSeeds, hopim::Diffusion::ic,
                                                    hopim::kUnlimitedHops, 500, 1, static_cast<int>(st.range(0))));
  }
}

hopim::analysis::SurfaceGrid bench_grid() {
  hopim::analysis::SurfaceGrid grid;
  grid.truncation = 100'000;
  return grid;
}

void BM_AlphaSurfaceSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(hopim::analysis::serial::alpha_surface(bench_grid()));
}
void BM_AlphaSurfaceParallel(benchmark::State& st) {
  for (auto _ : st) {
    benchmark::DoNotOptimize(hopim::analysis::alpha_surface(bench_grid(), static_cast<int>(st.range(0))));
  }
}

void thread_counts(benchmark::internal::Benchmark* b) {
  for (int t = 1; t <= omp_get_max_threads(); t *= 2) b->Arg(t);
}

}  // namespace

BENCHMARK(BM_UpperBoundsSerial);
BENCHMARK(BM_UpperBoundsParallel)->Apply(thread_counts);
BENCHMARK(BM_FirstRoundSerial);
BENCHMARK(BM_FirstRoundParallel)->Apply(thread_counts);
BENCHMARK(BM_SpreadSerial);
BENCHMARK(BM_SpreadParallel)->Apply(thread_counts);
BENCHMARK(BM_AlphaSurfaceSerial);
BENCHMARK(BM_AlphaSurfaceParallel)->Apply(thread_counts);

BENCHMARK_MAIN();
