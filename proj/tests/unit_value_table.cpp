#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cwg/value_table.hpp"
#include "table_oracle.hpp"

using namespace cwg;

namespace {

ShiftConstants constants_for(const StateGrid& grid) {
  ShiftConstants c;
  c.bounding_box.lo = grid.lo;
  for (std::size_t ax = 0; ax < grid.dim(); ++ax)
    c.bounding_box.hi.push_back(grid.hi(ax));
  c.diameter = c.bounding_box.diameter();
  return c;
}

/// example2 on the 5-node grid {-1,-0.5,0,0.5,1} with controls {-1,0,1}.
ValueTable hand_table(int layers = 2, double eps = 2e-3) {
  const GameDefinition g = example2_game(3);
  const StateGrid grid = StateGrid::make_uniform(-1.0, 1.0, 0.5, 1);
  return build_value_table(g, constants_for(grid), grid, layers, eps);
}

bool set_contains(const PayoffSet& set, double j1, double j2, double tol = 1e-9) {
  for (const auto& p : set.pairs)
    if (std::abs(p.j1 - j1) <= tol && std::abs(p.j2 - j2) <= tol) return true;
  return false;
}

}  // namespace

TEST_CASE("state grid geometry") {
  const StateGrid grid = StateGrid::make_uniform(-2.0, 2.0, 0.5, 2);
  CHECK(grid.count[0] == 9);
  CHECK(grid.node_count() == 81);
  // a step that does not divide the span rounds the node count up
  const StateGrid padded = StateGrid::make_uniform(0.0, 1.0, 0.3, 1);
  CHECK(padded.count[0] == 5);
  CHECK(padded.hi(0) >= 1.0);
  CHECK(padded.covers(Box{Vec{0.0}, Vec{1.0}}));
  const std::size_t node = grid.snap(Vec{0.26, -1.3});
  const Vec back = grid.coords(node);
  CHECK(back[0] == 0.5);  // half-way rounds away from the lower edge
  CHECK(back[1] == -1.5);
  bool clamped = false;
  grid.snap(Vec{5.0, 0.0}, &clamped);
  CHECK(clamped);
  CHECK(grid.covers(Box{Vec{-2.0, -2.0}, Vec{2.0, 2.0}}));
  CHECK_FALSE(grid.covers(Box{Vec{-2.0, -2.0}, Vec{2.1, 2.0}}));
}

TEST_CASE("terminal layer is the exact payoff map") {
  const ValueTable table = hand_table();
  const std::size_t node = table.grid().snap(Vec{0.5});
  const auto& set = table.at(2, node);
  REQUIRE(set.size() == 1);
  CHECK(set.pairs[0].j1 == 0.5);
  CHECK(set.pairs[0].j2 == 0.5);
}

TEST_CASE("mid layer at the kink node holds both branches") {
  const ValueTable table = hand_table();
  const std::size_t node = table.grid().snap(Vec{0.0});
  const auto& set = table.at(1, node);
  REQUIRE(set.size() == 2);
  CHECK(set_contains(set, 0.5, -0.5));
  CHECK(set_contains(set, 0.5, 0.5));
}

TEST_CASE("sigma_min on the hand-built table") {
  const ValueTable table = hand_table();
  const std::size_t mid = table.grid().snap(Vec{0.0});
  CHECK(table.sigma_min(1, mid, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(table.sigma_min(1, mid, 2) == doctest::Approx(-0.5).epsilon(1e-12));
  // terminal singletons return the component itself
  const std::size_t low = table.grid().snap(Vec{-1.0});
  CHECK(table.sigma_min(2, low, 1) == 1.0);
  CHECK(table.sigma_min(2, low, 2) == -1.0);
}

TEST_CASE("rho floors on the hand-built table") {
  const ValueTable table = hand_table();
  const std::size_t mid = table.grid().snap(Vec{0.0});
  CHECK(table.rho(1, mid, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(table.rho(1, mid, 2) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("rho equals the next sigma_min when the dynamics freeze") {
  // f = g = 0: the successor is the node itself
  GameDefinition frozen = example2_game(3);
  frozen.name = "frozen";
  frozen.f_eval = [](double, const Vec&, const Vec&) { return Vec{0.0}; };
  const StateGrid grid = StateGrid::make_uniform(-1.0, 1.0, 0.5, 1);
  const ValueTable table = build_value_table(frozen, constants_for(grid), grid, 2, 1e-3);
  for (std::size_t node = 0; node < grid.node_count(); ++node)
    for (int player : {1, 2})
      CHECK(table.rho(1, node, player) == table.sigma_min(2, node, player));
}

TEST_CASE("rho on an example1 table with quarter steps") {
  const GameDefinition g = example1_game();  // 5-point control grids
  const StateGrid grid = StateGrid::make_uniform(-2.0, 2.0, 0.125, 2);
  const ValueTable table = build_value_table(g, constants_for(grid), grid, 4, 1e-3);
  const std::size_t origin = table.grid().snap(Vec{0.0, 0.0});
  // x1 after one step is -delta v, minimized by v = 1, independent of u
  CHECK(table.rho(3, origin, 1) == doctest::Approx(-0.25).epsilon(1e-12));

  SUBCASE("punishment lookups at the same node") {
    const auto vs_player1 =
        table.punish_move(3, origin, FixedRole::player1_fixed, Vec{0.5});
    CHECK(vs_player1.response == Vec{1.0});
    const auto vs_player2 =
        table.punish_move(3, origin, FixedRole::player2_fixed, Vec{0.0});
    CHECK(vs_player2.response == Vec{-1.0});
  }
}

TEST_CASE("query follows the two-layer time rule") {
  const ValueTable table = hand_table();
  // terminal time reads the last layer only
  const auto at_T = table.query(1.0, Vec{0.5});
  REQUIRE(at_T.set.size() == 1);
  CHECK(at_T.set.pairs[0].j1 == 0.5);
  // interior time reads the upper layer
  const auto interior = table.query(0.25, Vec{0.0});
  REQUIRE(interior.set.size() == 2);
  CHECK(set_contains(interior.set, 0.5, -0.5));
  CHECK(set_contains(interior.set, 0.5, 0.5));
  // an exact grid time reads the union of the two adjacent layers
  const auto at_grid = table.query(0.5, Vec{0.0});
  REQUIRE(at_grid.set.size() == 3);
  CHECK(set_contains(at_grid.set, 0.5, -0.5));
  CHECK(set_contains(at_grid.set, 0.5, 0.5));
  CHECK(set_contains(at_grid.set, 0.0, 0.0));
  // off-grid states snap and get flagged
  const auto clamped = table.query(1.0, Vec{7.0});
  CHECK(clamped.clamped);
}

TEST_CASE("selector rules and tie-breaks") {
  const ValueTable table = hand_table();
  const PayoffPair sum = table.select(0.25, Vec{0.0}, SelectorRule::max_sum);
  CHECK(sum.j1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sum.j2 == doctest::Approx(0.5).epsilon(1e-12));
  const PayoffPair low = table.select(0.25, Vec{0.0}, SelectorRule::min_j2);
  CHECK(low.j2 == doctest::Approx(-0.5).epsilon(1e-12));
  // singleton sets are returned whatever the rule
  for (auto rule : {SelectorRule::max_sum, SelectorRule::max_j1, SelectorRule::max_j2,
                    SelectorRule::min_j2}) {
    const PayoffPair p = table.select(1.0, Vec{1.0}, rule);
    CHECK(p.j1 == 1.0);
    CHECK(p.j2 == 1.0);
  }
}

TEST_CASE("consistent_move walks the stored pair to a successor") {
  const ValueTable table = hand_table();
  const std::size_t mid = table.grid().snap(Vec{0.0});

  const auto up = table.consistent_move(1, mid, PayoffPair{0.5, 0.5});
  CHECK(up.u == Vec{1.0});
  CHECK(table.grid().coords(up.next_node)[0] == 0.5);
  CHECK(up.pair.j1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(up.pair.j2 == doctest::Approx(0.5).epsilon(1e-12));

  const auto down = table.consistent_move(1, mid, PayoffPair{0.5, -0.5});
  CHECK(down.u == Vec{-1.0});
  CHECK(table.grid().coords(down.next_node)[0] == -0.5);

  CHECK_THROWS_AS(table.consistent_move(2, mid, PayoffPair{0.5, 0.5}), NoWitnessError);
}

TEST_CASE("punish_move with a fictitious opponent") {
  const ValueTable table = hand_table();
  const std::size_t mid = table.grid().snap(Vec{0.0});
  const auto pm = table.punish_move(1, mid, FixedRole::player1_fixed, Vec{1.0});
  CHECK(pm.response == Vec{0.0});  // singleton response grid
  // unique successor of u=1 from 0 is 0.5; its terminal set is {(0.5, 0.5)}
  CHECK(table.grid().coords(pm.next_node)[0] == 0.5);
  CHECK(pm.pair.j1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pm.pair.j2 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("built tables satisfy the structural invariants") {
  hand_table(3).validate();
  const GameDefinition g = example2_game(3);
  const StateGrid grid = StateGrid::make_uniform(-2.0, 2.0, 1.0 / 16, 1);
  build_value_table(g, constants_for(grid), grid, 16, 1e-3).validate();
  const GameDefinition aff = random_affine_game(2, 7171);
  const StateGrid agrid = StateGrid::make_uniform(-2.0, 2.0, 0.125, 2);
  build_value_table(aff, constants_for(agrid), agrid, 6, 1e-3).validate();
}

TEST_CASE("oracle equality for small tables") {
  // 1-D: example2 on 5 nodes, N = 1..3
  for (int layers : {1, 2, 3}) {
    const GameDefinition g = example2_game(3);
    const StateGrid grid = StateGrid::make_uniform(-1.0, 1.0, 0.5, 1);
    const ValueTable table = build_value_table(g, constants_for(grid), grid, layers, 2e-3);
    const auto expected = testing::oracle_layers(g, grid, layers, 2e-3);
    for (int k = 0; k <= layers; ++k)
      for (std::size_t node = 0; node < grid.node_count(); ++node) {
        REQUIRE(table.at(k, node).pairs.size() == expected[k][node].pairs.size());
        CHECK(table.at(k, node).pairs == expected[k][node].pairs);  // bitwise
      }
  }
  // 2-D: example1 on a 3x3 grid, N = 2
  {
    const GameDefinition g = example1_game(3);
    const StateGrid grid = StateGrid::make_uniform(-1.0, 1.0, 1.0, 2);
    const ValueTable table = build_value_table(g, constants_for(grid), grid, 2, 1e-3);
    const auto expected = testing::oracle_layers(g, grid, 2, 1e-3);
    for (int k = 0; k <= 2; ++k)
      for (std::size_t node = 0; node < grid.node_count(); ++node)
        CHECK(table.at(k, node).pairs == expected[k][node].pairs);
    // cross-check: stored pairs are (rounded) reachable payoffs
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
      const auto reachable = testing::oracle_reachable_payoffs(g, grid, 2, node);
      for (const auto& p : table.at(0, node).pairs) {
        bool hit = false;
        for (const auto& q : reachable)
          if (p.max_norm_to(q) <= 0.5 * 1e-3 + 1e-15) hit = true;
        CHECK(hit);
      }
    }
  }
}

TEST_CASE("example1 table carries the conserved value pair at the origin") {
  // Exact-lattice configuration: delta = grid step = 1/8, controls {-1,0,1},
  // eps = 1/16 divides every reachable payoff, so no rounding distortion.
  const GameDefinition g = example1_game(3);
  const StateGrid grid = StateGrid::make_uniform(-2.0, 2.0, 0.125, 2);
  const ValueTable table =
      build_value_table(g, constants_for(grid), grid, 8, 1.0 / 16);
  const PayoffSet at_origin = table.query(0.0, Vec{0.0, 0.0}).set;
  CHECK(set_contains(at_origin, 1.0, 1.0, 0.1));
  // the joint motion (u,v) = (1,-1) conserves both components; its pair is
  // stored exactly on this lattice
  CHECK(set_contains(at_origin, 1.0, 1.0, 1e-12));
  // max_sum ties (every extreme chain sums to 2) resolve to larger J1
  const PayoffPair top = table.select(0.0, Vec{0.0, 0.0}, SelectorRule::max_sum);
  CHECK(top.j1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(top.j2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("export/import round-trips bit-exactly") {
  const GameDefinition g = example2_game(3);
  const StateGrid grid = StateGrid::make_uniform(-1.0, 1.0, 0.25, 1);
  const ValueTable table = build_value_table(g, constants_for(grid), grid, 8, 1e-3);

  std::ostringstream first;
  table.export_text(first);
  std::istringstream in(first.str());
  const ValueTable loaded = ValueTable::import_text(in, example2_game(3));
  REQUIRE(loaded.layers() == table.layers());
  for (int k = 0; k <= table.layers(); ++k)
    for (std::size_t node = 0; node < grid.node_count(); ++node)
      CHECK(loaded.at(k, node).pairs == table.at(k, node).pairs);

  std::ostringstream second;
  loaded.export_text(second);
  CHECK(first.str() == second.str());

  std::istringstream wrong(first.str());
  CHECK_THROWS_AS(ValueTable::import_text(wrong, example1_game()), ConfigError);

  // the same game with a different control discretization is rejected too
  std::istringstream refit(first.str());
  CHECK_THROWS_AS(ValueTable::import_text(refit, example2_game(5)), ConfigError);
}

TEST_CASE("csv slice export") {
  const ValueTable table = hand_table();
  std::ostringstream out;
  table.export_csv(out);
  CHECK(out.str().rfind("t,x1,J1,J2,set_size\n", 0) == 0);
  CHECK(out.str().find("1,1,1,1") != std::string::npos);
}

TEST_CASE("refinement distances are reported for the record") {
  const GameDefinition g = example2_game(3);
  const StateGrid grid = StateGrid::make_uniform(-2.0, 2.0, 1.0 / 32, 1);
  const ValueTable coarse = build_value_table(g, constants_for(grid), grid, 16, 1e-3);
  const ValueTable fine = build_value_table(g, constants_for(grid), grid, 32, 1e-3);
  for (const double x : {0.0, 0.5, -0.25}) {
    const double h = hausdorff(coarse.query(0.0, Vec{x}).set, fine.query(0.0, Vec{x}).set);
    MESSAGE("N=16 vs N=32 refinement at x=", x, ": Hausdorff ", h);
    CHECK(std::isfinite(h));
  }
}

TEST_CASE("build guards") {
  const GameDefinition g = example2_game(3);
  const StateGrid grid = StateGrid::make_uniform(-1.0, 1.0, 0.5, 1);
  ShiftConstants wide = constants_for(grid);
  wide.bounding_box = Box{Vec{-3.0}, Vec{3.0}};
  CHECK_THROWS_AS(build_value_table(g, wide, grid, 2, 1e-3), ConfigError);
  CHECK_THROWS_AS(build_value_table(g, constants_for(grid), grid, 0, 1e-3), ConfigError);
  CHECK_THROWS_AS(build_value_table(g, constants_for(grid), grid, 2, 0.0), ConfigError);
  BuildOptions tiny;
  tiny.max_total_pairs = 3;
  CHECK_THROWS_AS(build_value_table(g, constants_for(grid), grid, 2, 1e-3, tiny),
                  std::runtime_error);
}
