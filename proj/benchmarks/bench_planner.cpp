#include <benchmark/benchmark.h>

#include <vector>

#include "terraroute/graph.hpp"
#include "terraroute/risk.hpp"
#include "terraroute/solver.hpp"
#include "terraroute/terrain.hpp"

namespace {

using namespace terraroute;

TerrainGrid terrain(int n) { return scale_rci(generate_synthetic_terrain(9, n, n, 10.0, {}), 0.7); }

TacticalPicture picture(int n) {
  TacticalPicture p;
  p.enemy_cells = {{n / 2, n / 2}, {n / 4, 3 * n / 4}, {3 * n / 4, n / 6}};
  for (int i = 0; i < n; ++i) p.history_cells.push_back({i, (i * 3 / 4 + n / 9) % n});
  return p;
}

void BM_DistanceTransform(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto sources = picture(n).history_cells;
  for (auto _ : state) benchmark::DoNotOptimize(distance_to_nearest(n, n, sources));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_DistanceTransform)->Arg(100)->Arg(300)->Arg(900)->Unit(benchmark::kMillisecond);

void BM_CostField(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto grid = terrain(n);
  const auto pic = picture(n);
  for (auto _ : state) benchmark::DoNotOptimize(build_cost_field(grid, nominal_vehicle(), nominal_weights(), pic));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_CostField)->Arg(100)->Arg(300)->Arg(900)->Unit(benchmark::kMillisecond);

void BM_GraphBuild(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto grid = terrain(n);
  const auto field = build_cost_field(grid, nominal_vehicle(), nominal_weights(), picture(n));
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(field, grid, {0, 0}, {n - 1, n - 1}));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_GraphBuild)->Arg(100)->Arg(300)->Arg(900)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto grid = terrain(n);
  const auto field = build_cost_field(grid, nominal_vehicle(), nominal_weights(), picture(n));
  const auto graph = build_graph(field, grid, {0, 0}, {n - 1, n - 1});
  for (auto _ : state) benchmark::DoNotOptimize(solve_min_cost_path(graph));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Solve)->Arg(100)->Arg(300)->Arg(900)->Unit(benchmark::kMillisecond);

// Cost field, graph and solve together, as one planning request would run.
void BM_EndToEnd(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto grid = terrain(n);
  const auto pic = picture(n);
  for (auto _ : state) {
    const auto field = build_cost_field(grid, nominal_vehicle(), nominal_weights(), pic);
    benchmark::DoNotOptimize(solve_min_cost_path(build_graph(field, grid, {0, 0}, {n - 1, n - 1})));
  }
}
BENCHMARK(BM_EndToEnd)->Arg(900)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
