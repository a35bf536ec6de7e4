#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "cwg/guide.hpp"

using namespace cwg;

namespace {

ShiftConstants constants_for_box(const Box& box) {
  ShiftConstants c;
  c.bounding_box = box;
  c.diameter = box.diameter();
  return c;
}

StrategyHandle example1_strategy(Role role) {
  auto game = std::make_shared<const GameDefinition>(example1_game());
  const ShiftConstants constants =
      estimate_constants(*game, Box{Vec{-1.0, -1.0}, Vec{1.0, 1.0}}, 4000, 9);
  return make_closed_form_strategy(role, game, example1_closed_form(game), constants);
}

struct TableSetup {
  std::shared_ptr<const ValueTable> table;
  StrategyHandle strategy;

  explicit TableSetup(SelectorRule rule = SelectorRule::max_sum, Role role = Role::player1) {
    const GameDefinition g = example2_game(3);
    const StateGrid grid = StateGrid::make_uniform(-1.0, 1.0, 0.5, 1);
    ShiftConstants c = constants_for_box(Box{Vec{-1.0}, Vec{1.0}});
    c.speed_bound = 1.05;
    c.speed_bound_euler = 1.05;
    table = std::make_shared<const ValueTable>(
        build_value_table(g, c, grid, 2, 2e-3));
    strategy = make_table_strategy(role, table, rule, c);
  }
};

}  // namespace

TEST_CASE("fresh guides carry the start position") {
  const StrategyHandle s = example1_strategy(Role::player1);
  const GuideState g = init_guide(s, 0.0, Vec{0.0, 0.0});
  CHECK(g.accumulated_error == 0.0);
  CHECK(g.last_correction == 0.0);
  CHECK(g.punish_anchor == Vec{0.0, 0.0});
  CHECK(g.consist_anchor == Vec{0.0, 0.0});

  const GuideState later = init_guide(s, 0.25, Vec{0.5, -0.5});
  CHECK(later.last_correction == 0.25);
  CHECK(later.accumulated_error == 0.0);
}

TEST_CASE("multivalued init stores the selector pair") {
  const TableSetup setup(SelectorRule::max_sum);
  const GuideState g = init_guide(setup.strategy, 0.0, Vec{0.0});
  // the layer-0 set at the kink node is {(1,-1), (1,1)}; max_sum picks (1,1)
  CHECK(g.expected1 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g.expected2 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g.accumulated_error == 0.0);  // on-lattice start

  // off-lattice starts book the snap distance as accumulated error, so the
  // first correction still opens on the consistent branch
  const GuideState off = init_guide(setup.strategy, 0.0, Vec{0.1});
  CHECK(off.consist_anchor == Vec{0.0});
  CHECK(off.accumulated_error == doctest::Approx(0.01).epsilon(1e-12));
  const auto choice = select_anchor(off, 0.0, Vec{0.1}, setup.strategy.constants);
  CHECK(choice.branch == AnchorBranch::consistent);
}

TEST_CASE("multivalued init on the 2-D game reads the conserved pair") {
  const GameDefinition g = example1_game(3);
  const StateGrid grid = StateGrid::make_uniform(-2.0, 2.0, 0.125, 2);
  ShiftConstants c = constants_for_box(Box{Vec{-2.0, -2.0}, Vec{2.0, 2.0}});
  auto table = std::make_shared<const ValueTable>(
      build_value_table(g, c, grid, 8, 1.0 / 16));
  const StrategyHandle s =
      make_table_strategy(Role::player1, table, SelectorRule::max_sum, c);
  const GuideState guide = init_guide(s, 0.0, Vec{0.0, 0.0});
  CHECK(std::abs(guide.expected1 - 1.0) <= 0.1);
  CHECK(std::abs(guide.expected2 - 1.0) <= 0.1);
}

TEST_CASE("anchor choice follows the accumulated-error inequality") {
  ShiftConstants c = constants_for_box(Box{Vec{-1.0, -1.0}, Vec{1.0, 1.0}});

  GuideState fresh;
  fresh.consist_anchor = Vec{0.3, 0.3};
  fresh.punish_anchor = Vec{-1.0, -1.0};
  fresh.accumulated_error = 0.0;
  fresh.last_correction = 0.5;
  // equality branch: x at the consistent anchor, zero elapsed time
  const auto at_anchor = select_anchor(fresh, 0.5, Vec{0.3, 0.3}, c);
  CHECK(at_anchor.branch == AnchorBranch::consistent);
  CHECK(at_anchor.z == fresh.consist_anchor);

  // displaced beyond the bound: 1 > phi * dt
  ShiftConstants tiny = c;
  tiny.speed_bound = 0.05;  // phi(dt) dt = 4 K^2 dt^2 = 0.01 at dt = 1
  GuideState displaced = fresh;
  displaced.last_correction = 0.0;
  const auto punished = select_anchor(displaced, 1.0, Vec{1.3, 0.3}, tiny);
  CHECK(punished.branch == AnchorBranch::punishment);
  CHECK(punished.z == fresh.punish_anchor);

  // exactly on the bound: the inequality is non-strict (0.5^2 is exact)
  ShiftConstants zero = c;
  zero.speed_bound = 0.0;
  GuideState boundary = fresh;
  boundary.accumulated_error = 0.25;  // bound = d (beta = 0, phi = 0)
  boundary.last_correction = 0.0;
  const auto kept = select_anchor(boundary, 1.0, Vec{0.8, 0.3}, zero);
  CHECK(dist_sq(boundary.consist_anchor, Vec{0.8, 0.3}) == 0.25);
  CHECK(kept.branch == AnchorBranch::consistent);
}

TEST_CASE("extremal controls with tie-breaks") {
  const GameDefinition g = example1_game();
  // z - x = (1, 0): player I's own product is identically zero -> lowest
  // index; the witness minimizes <(1,0), (-v, v)> = -v at v = 1
  const Vec x{0.0, 0.0}, z{1.0, 0.0};
  const auto p1 = extremal_controls(g, 0.0, x, z, Role::player1);
  CHECK(p1.own == Vec{-1.0});
  CHECK(p1.opponent_witness == Vec{1.0});

  const auto p2 = extremal_controls(g, 0.0, x, z, Role::player2);
  CHECK(p2.own == Vec{-1.0});               // maximizes -v at v = -1
  CHECK(p2.opponent_witness == Vec{-1.0});  // tie over u -> lowest index

  // degenerate direction: everything ties to the lowest index
  const auto degenerate = extremal_controls(g, 0.0, x, x, Role::player1);
  CHECK(degenerate.own == Vec{-1.0});
  CHECK(degenerate.opponent_witness == Vec{-1.0});
}

TEST_CASE("closed-form guide step tracks the conserving motion") {
  const StrategyHandle s = example1_strategy(Role::player1);
  const GuideState guide = init_guide(s, 0.0, Vec{0.0, 0.0});
  const GuideStep step = guide_step(s, guide, 0.0, Vec{0.0, 0.0}, 0.5);
  CHECK(step.branch == AnchorBranch::consistent);
  CHECK(step.next.accumulated_error == 0.0);
  CHECK(step.next.last_correction == 0.0);
  // the joint motion holds (u,v) = (1,-1): z + 0.5 * (1,1)
  CHECK(step.next.consist_anchor[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(step.next.consist_anchor[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("accumulated error is the squared anchor gap") {
  const StrategyHandle s = example1_strategy(Role::player2);
  GuideState guide = init_guide(s, 0.0, Vec{0.0, 0.0});
  guide.consist_anchor = Vec{0.5, -0.25};
  const Vec x{0.25, 0.25};
  const GuideStep step = guide_step(s, guide, 0.0, x, 0.25);
  CHECK(step.next.accumulated_error ==
        doctest::Approx(dist_sq(step.anchor, x)).epsilon(1e-15));
}

TEST_CASE("punishment switch resets the expected pair to the low branch") {
  const TableSetup setup(SelectorRule::max_sum, Role::player1);
  GuideState guide = init_guide(setup.strategy, 0.0, Vec{0.0});
  // force a switch: consistent anchor far from the state, bound is zero
  guide.consist_anchor = Vec{1.0};
  guide.punish_anchor = Vec{0.0};
  guide.last_correction = 0.5;
  guide.expected1 = 1.0;
  guide.expected2 = 1.0;
  const GuideStep step = guide_step(setup.strategy, guide, 0.5, Vec{0.0}, 1.0);
  CHECK(step.branch == AnchorBranch::punishment);
  // the pre-step layer at the kink node holds {(0.5,-0.5),(0.5,0.5)};
  // player I's punishment bookkeeping takes the min-J2 member
  CHECK(step.next.expected1 == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(step.next.expected2 == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("multivalued steps must walk the time grid") {
  const TableSetup setup;
  const GuideState guide = init_guide(setup.strategy, 0.0, Vec{0.0});
  CHECK_THROWS_AS(guide_step(setup.strategy, guide, 0.0, Vec{0.0}, 0.3), ConfigError);
  CHECK_THROWS_AS(guide_step(setup.strategy, guide, 0.1, Vec{0.0}, 0.5), ConfigError);
  CHECK_THROWS_AS(guide_step(setup.strategy, guide, 0.5, Vec{0.0}, 0.5), ConfigError);
}

TEST_CASE("closed-form strategies require all three motions") {
  auto game = std::make_shared<const GameDefinition>(example1_game());
  ClosedFormValue incomplete = example1_closed_form(game);
  incomplete.punish_motion_p2 = nullptr;
  CHECK_THROWS_AS(make_closed_form_strategy(Role::player1, game, incomplete,
                                            ShiftConstants{}),
                  ConfigError);
}
