#include <benchmark/benchmark.h>

#include "cwg/value_table.hpp"

using namespace cwg;

namespace {

ShiftConstants box_constants(const StateGrid& grid) {
  ShiftConstants c;
  c.bounding_box.lo = grid.lo;
  for (std::size_t ax = 0; ax < grid.dim(); ++ax)
    c.bounding_box.hi.push_back(grid.hi(ax));
  c.diameter = c.bounding_box.diameter();
  return c;
}

}  // namespace

static void BM_BuildTable1D(benchmark::State& state) {
  const GameDefinition game = example2_game(3);
  const int layers = static_cast<int>(state.range(0));
  const StateGrid grid = StateGrid::make_uniform(-2.0, 2.0, 1.0 / layers, 1);
  for (auto _ : state) {
    ValueTable table = build_value_table(game, box_constants(grid), grid, layers, 1e-3);
    benchmark::DoNotOptimize(table.total_pairs());
  }
}
BENCHMARK(BM_BuildTable1D)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_BuildTable2D(benchmark::State& state) {
  const GameDefinition game = example1_game(3);
  const int layers = static_cast<int>(state.range(0));
  const StateGrid grid = StateGrid::make_uniform(-2.0, 2.0, 1.0 / layers, 2);
  for (auto _ : state) {
    ValueTable table = build_value_table(game, box_constants(grid), grid, layers, 0.05);
    benchmark::DoNotOptimize(table.total_pairs());
  }
}
BENCHMARK(BM_BuildTable2D)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_Query(benchmark::State& state) {
  const GameDefinition game = example2_game(3);
  const StateGrid grid = StateGrid::make_uniform(-2.0, 2.0, 1.0 / 128, 1);
  const ValueTable table = build_value_table(game, box_constants(grid), grid, 128, 1e-3);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(table.query(t, Vec{0.25}));
    t = t < 0.9 ? t + 1.0 / 256 : 0.0;
  }
}
BENCHMARK(BM_Query);
