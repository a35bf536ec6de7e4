#include <benchmark/benchmark.h>

#include "cwg/harness.hpp"

using namespace cwg;

namespace {

struct ClosedFormSetup {
  std::shared_ptr<const GameDefinition> game;
  StrategyHandle s1, s2;

  ClosedFormSetup() {
    game = std::make_shared<const GameDefinition>(example1_game());
    const ShiftConstants constants =
        estimate_constants(*game, Box{Vec{-1.0, -1.0}, Vec{1.0, 1.0}}, 4000, 1);
    const ClosedFormValue value = example1_closed_form(game);
    s1 = make_closed_form_strategy(Role::player1, game, value, constants);
    s2 = make_closed_form_strategy(Role::player2, game, value, constants);
  }
};

}  // namespace

static void BM_GuideStep(benchmark::State& state) {
  const ClosedFormSetup setup;
  const GuideState guide = init_guide(setup.s1, 0.0, Vec{0.0, 0.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        guide_step(setup.s1, guide, 0.0, Vec{0.01, -0.02}, 1.0 / 256));
  }
}
BENCHMARK(BM_GuideStep);

static void BM_ConsistentRun(benchmark::State& state) {
  const ClosedFormSetup setup;
  const Partition partition =
      Partition::uniform(0.0, 1.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_consistent(*setup.game, setup.s1, setup.s2, Vec{0.0, 0.0}, partition));
  }
}
BENCHMARK(BM_ConsistentRun)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
