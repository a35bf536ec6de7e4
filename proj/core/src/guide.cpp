#include "cwg/guide.hpp"

#include <cmath>
#include <stdexcept>

#include "cwg/trajectory.hpp"

namespace cwg {

StrategyHandle make_closed_form_strategy(Role role,
                                         std::shared_ptr<const GameDefinition> game,
                                         ClosedFormValue value, ShiftConstants constants) {
  StrategyHandle s;
  s.role = role;
  s.mode = GuideMode::closed_form;
  s.game = std::move(game);
  s.closed = std::move(value);
  s.constants = std::move(constants);
  if (!s.closed.c1 || !s.closed.c2 || !s.closed.consist_motion ||
      !s.closed.punish_motion_p1 || !s.closed.punish_motion_p2)
    throw ConfigError("closed-form strategy needs a value pair and all three motions");
  return s;
}

StrategyHandle make_table_strategy(Role role, std::shared_ptr<const ValueTable> table,
                                   SelectorRule rule, ShiftConstants constants) {
  StrategyHandle s;
  s.role = role;
  s.mode = GuideMode::multivalued;
  s.table = std::move(table);
  s.game = s.table->game_ptr();
  s.rule = rule;
  s.constants = std::move(constants);
  return s;
}

namespace {

/// Motion by holding the given controls, integrated with the shared Euler
/// stepper so closed-form anchors and simulated states share arithmetic.
Vec const_control_motion(const GameDefinition& game, double t_plus, double t, const Vec& z,
                         const Vec& u, const Vec& v, int substeps) {
  const Partition leg{{t, t_plus}};
  return integrate(game, t, z, {u}, {v}, leg, substeps).terminal();
}

}  // namespace

ClosedFormValue example1_closed_form(std::shared_ptr<const GameDefinition> game,
                                     int substeps) {
  if (game->name != "example1")
    throw ConfigError("closed-form value pair is registered for example1 only");
  ClosedFormValue value;
  value.c1 = [](double t, const Vec& x) { return x[0] + (1.0 - t); };
  value.c2 = [](double t, const Vec& x) { return x[1] + (1.0 - t); };
  const GameDefinition* g = game.get();
  auto owner = game;  // keep alive inside the lambdas
  value.consist_motion = [g, owner, substeps](double t_plus, double t, const Vec& z) {
    return const_control_motion(*g, t_plus, t, z, Vec{1.0}, Vec{-1.0}, substeps);
  };
  value.punish_motion_p1 = [g, owner, substeps](double t_plus, double t, const Vec& z,
                                                const Vec& v_witness) {
    return const_control_motion(*g, t_plus, t, z, Vec{-1.0}, v_witness, substeps);
  };
  value.punish_motion_p2 = [g, owner, substeps](double t_plus, double t, const Vec& z,
                                                const Vec& u_witness) {
    return const_control_motion(*g, t_plus, t, z, u_witness, Vec{1.0}, substeps);
  };
  return value;
}

namespace {

/// Member with the minimal opponent component: min-J2 for player I's
/// punishment bookkeeping, min-J1 for player II's. First in stored order on
/// ties.
PayoffPair punishment_pair(const PayoffSet& set, Role role) {
  const int component = role == Role::player1 ? 2 : 1;
  const double target = set.min_component(component);
  for (const auto& p : set.pairs)
    if ((component == 1 ? p.j1 : p.j2) == target) return p;
  return set.pairs.front();
}

}  // namespace

GuideState init_guide(const StrategyHandle& strategy, double t0, const Vec& x0) {
  GuideState g;
  g.accumulated_error = 0.0;
  g.last_correction = t0;
  g.punish_anchor = x0;
  g.consist_anchor = x0;
  g.mode = strategy.mode;
  if (strategy.mode == GuideMode::multivalued) {
    // Anchors must live on the table's node lattice, and the expected pair
    // is read from the pre-step layer so the first correction can trace it.
    // The snap distance counts as accumulated error, otherwise an
    // off-lattice start would fail the anchor inequality at the very first
    // correction and open on the punishment branch.
    const ValueTable& table = *strategy.table;
    const std::size_t node = table.grid().snap(x0);
    const Vec snapped = table.grid().coords(node);
    g.accumulated_error = dist_sq(snapped, x0);
    g.punish_anchor = snapped;
    g.consist_anchor = snapped;
    const int k = table.layer_of(t0);
    const PayoffSet& layer_set = table.at(k, node);
    auto score = [&](const PayoffPair& p) {
      switch (strategy.rule) {
        case SelectorRule::max_sum: return p.j1 + p.j2;
        case SelectorRule::max_j1: return p.j1;
        case SelectorRule::max_j2: return p.j2;
        case SelectorRule::min_j2: return -p.j2;
      }
      return 0.0;
    };
    const PayoffPair* best = &layer_set.pairs.front();
    for (const auto& p : layer_set.pairs) {
      const double sp = score(p), sb = score(*best);
      if (sp > sb || (sp == sb && (p.j1 > best->j1 || (p.j1 == best->j1 && p.j2 > best->j2))))
        best = &p;
    }
    g.expected1 = best->j1;
    g.expected2 = best->j2;
  }
  return g;
}

AnchorChoice select_anchor(const GuideState& guide, double t, const Vec& x,
                           const ShiftConstants& constants) {
  const double dt = t - guide.last_correction;
  if (dt < 0.0) throw ConfigError("select_anchor needs t >= the last correction time");
  const double bound = guide.accumulated_error * (1.0 + constants.beta * dt) +
                       constants.phi(dt) * dt;
  if (dist_sq(guide.consist_anchor, x) <= bound)
    return AnchorChoice{guide.consist_anchor, AnchorBranch::consistent};
  return AnchorChoice{guide.punish_anchor, AnchorBranch::punishment};
}

ExtremalChoice extremal_controls(const GameDefinition& game, double t, const Vec& x,
                                 const Vec& z, Role role) {
  const Vec dir = sub(z, x);
  auto arg_best = [&](const std::vector<Vec>& grid, bool maximize, bool through_f) {
    std::size_t best = 0;
    double best_score = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Vec field = through_f ? game.f_eval(t, x, grid[i]) : game.g_eval(t, x, grid[i]);
      const double score = dot(dir, field);
      if (first || (maximize ? score > best_score : score < best_score)) {
        best = i;
        best_score = score;
        first = false;
      }
    }
    return grid[best];
  };
  if (role == Role::player1)
    return ExtremalChoice{arg_best(game.control_grid_p, true, true),
                          arg_best(game.control_grid_q, false, false)};
  return ExtremalChoice{arg_best(game.control_grid_q, true, false),
                        arg_best(game.control_grid_p, false, true)};
}

GuideStep guide_step(const StrategyHandle& strategy, const GuideState& guide, double t,
                     const Vec& x, double t_plus) {
  if (!(t_plus > t)) throw ConfigError("guide_step needs t_plus > t");
  const GameDefinition& game = *strategy.game;

  const AnchorChoice anchor = select_anchor(guide, t, x, strategy.constants);
  const ExtremalChoice extremal = extremal_controls(game, t, x, anchor.z, strategy.role);

  GuideState next;
  next.mode = strategy.mode;
  next.accumulated_error = dist_sq(anchor.z, x);
  next.last_correction = t;

  if (strategy.mode == GuideMode::closed_form) {
    next.consist_anchor = strategy.closed.consist_motion(t_plus, t, anchor.z);
    next.punish_anchor =
        strategy.role == Role::player1
            ? strategy.closed.punish_motion_p1(t_plus, t, anchor.z, extremal.opponent_witness)
            : strategy.closed.punish_motion_p2(t_plus, t, anchor.z, extremal.opponent_witness);
    return GuideStep{extremal.own, next, anchor.branch, anchor.z};
  }

  const ValueTable& table = *strategy.table;
  const int k = table.layer_of(t);
  if (k >= table.layers() || table.layer_of(t_plus) != k + 1)
    throw ConfigError("multivalued guide corrections must walk the table's time grid");
  const std::size_t node = table.grid().snap(anchor.z);

  PayoffPair expected{guide.expected1, guide.expected2};
  if (anchor.branch == AnchorBranch::punishment)
    expected = punishment_pair(table.at(k, node), strategy.role);

  const auto consistent = table.consistent_move(k, node, expected);
  next.consist_anchor = table.grid().coords(consistent.next_node);
  // Track the matched member so the carried pair stays an exact member of
  // the current layer; the raw pair would drift off the lattice by eps/2
  // per layer otherwise.
  next.expected1 = consistent.pair.j1;
  next.expected2 = consistent.pair.j2;

  const auto punish =
      strategy.role == Role::player1
          ? table.punish_move(k, node, FixedRole::player2_fixed, extremal.opponent_witness)
          : table.punish_move(k, node, FixedRole::player1_fixed, extremal.opponent_witness);
  next.punish_anchor = table.grid().coords(punish.next_node);

  return GuideStep{extremal.own, next, anchor.branch, anchor.z};
}

}  // namespace cwg
