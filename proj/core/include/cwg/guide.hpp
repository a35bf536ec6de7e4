#pragma once

#include <functional>
#include <memory>

#include "cwg/game.hpp"
#include "cwg/types.hpp"
#include "cwg/value_table.hpp"

namespace cwg {

enum class Role { player1, player2 };
enum class GuideMode { closed_form, multivalued };
enum class AnchorBranch { consistent, punishment };

/// The auxiliary state a control-with-guide strategy carries between
/// corrections: accumulated squared error, last correction time, the
/// punishment and consistent anchors, and (in multivalued mode) the
/// expected payoff pair.
struct GuideState {
  double accumulated_error = 0.0;      ///< d, squared anchor gap at the last correction
  double last_correction = 0.0;        ///< tau
  Vec punish_anchor;                   ///< w^a
  Vec consist_anchor;                  ///< w^c
  double expected1 = 0.0, expected2 = 0.0;  ///< (Y1, Y2); multivalued mode only
  GuideMode mode = GuideMode::closed_form;
};

/// Closed-form value pair plus the stable motions its viability conditions
/// promise. Motions map (t_plus, t, z [, frozen opponent control]) to the
/// state at t_plus.
struct ClosedFormValue {
  std::function<double(double, const Vec&)> c1, c2;
  /// Joint motion conserving both value components.
  std::function<Vec(double, double, const Vec&)> consist_motion;
  /// Player I's punishment motion: opponent control frozen at the witness,
  /// keeps c2 from rising.
  std::function<Vec(double, double, const Vec&, const Vec&)> punish_motion_p1;
  /// Player II's punishment motion: keeps c1 from rising.
  std::function<Vec(double, double, const Vec&, const Vec&)> punish_motion_p2;
};

/// Immutable description of one player's strategy: the extremal-shift rule
/// plus either a closed-form value pair with registered motions or a value
/// table with a selector.
struct StrategyHandle {
  Role role = Role::player1;
  GuideMode mode = GuideMode::closed_form;
  std::shared_ptr<const GameDefinition> game;
  ShiftConstants constants;
  // closed-form source
  ClosedFormValue closed;
  // multivalued source
  std::shared_ptr<const ValueTable> table;
  SelectorRule rule = SelectorRule::max_sum;
};

StrategyHandle make_closed_form_strategy(Role role,
                                         std::shared_ptr<const GameDefinition> game,
                                         ClosedFormValue value, ShiftConstants constants);

StrategyHandle make_table_strategy(Role role, std::shared_ptr<const ValueTable> table,
                                   SelectorRule rule, ShiftConstants constants);

/// The conserving value pair for the built-in two-dimensional game together
/// with its registered stable motions (joint motion at (u,v) = (1,-1),
/// player I punishing with u = -1, player II punishing with v = +1).
ClosedFormValue example1_closed_form(std::shared_ptr<const GameDefinition> game,
                                     int substeps = 1);

/// Fresh guide at (t0, x0): zero error, both anchors at x0; multivalued
/// mode also stores the selector pair read from the pre-step layer.
GuideState init_guide(const StrategyHandle& strategy, double t0, const Vec& x0);

struct AnchorChoice {
  Vec z;
  AnchorBranch branch = AnchorBranch::consistent;
};

/// The consistent anchor whenever
///   ||w^c - x||^2 <= d (1 + beta (t - tau)) + phi(t - tau) (t - tau)
/// (non-strict), else the punishment anchor.
AnchorChoice select_anchor(const GuideState& guide, double t, const Vec& x,
                           const ShiftConstants& constants);

struct ExtremalChoice {
  Vec own;
  Vec opponent_witness;
};

/// Extremal shift toward z: player I maximizes <z - x, f(t,x,u)> over the
/// P grid and records the witness argmin over Q of <z - x, g(t,x,v)>;
/// player II symmetric. Ties resolve to the lowest grid index.
ExtremalChoice extremal_controls(const GameDefinition& game, double t, const Vec& x,
                                 const Vec& z, Role role);

struct GuideStep {
  Vec control;          ///< own control to hold on [t, t_plus)
  GuideState next;      ///< guide state at t_plus
  AnchorBranch branch;  ///< which anchor drove this correction
  Vec anchor;           ///< the anchor z used
};

/// One correction at (t, x) with the next correction at t_plus: selects the
/// anchor, emits the extremal control, and advances both anchors along
/// their stable motions. In multivalued mode t and t_plus must be adjacent
/// table grid times; a punishment-branch correction re-reads the expected
/// pair from the pre-step layer at the punishment anchor (min-J2 member for
/// player I, min-J1 for player II).
GuideStep guide_step(const StrategyHandle& strategy, const GuideState& guide, double t,
                     const Vec& x, double t_plus);

}  // namespace cwg
