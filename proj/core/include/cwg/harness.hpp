#pragma once

#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "cwg/conditions.hpp"
#include "cwg/guide.hpp"
#include "cwg/trajectory.hpp"

namespace cwg {

/// Deviation signals for the equilibrium sweeps. Values always come from
/// the deviating player's control grid; switch times are free (they need
/// not sit on the correction partition).
struct DeviationControl {
  enum class Kind { constant, bang_bang, random_piecewise };
  Kind kind = Kind::constant;
  std::vector<double> switch_times;  ///< increasing, interior
  std::vector<Vec> values;           ///< one more than switch_times
  std::string label;

  Vec at(double t) const;
  ControlSignal signal() const;

  static DeviationControl constant(const Vec& value, const std::string& label);
  static DeviationControl bang_bang(int max_switches, double t0, double horizon,
                                    const std::vector<Vec>& grid, std::mt19937_64& rng);
  static DeviationControl random_piecewise(int pieces, double t0, double horizon,
                                           const std::vector<Vec>& grid,
                                           std::mt19937_64& rng);
};

/// The standard family mix: every-grid-value constants (cycled up to
/// `constants`), seeded bang-bang signals, seeded random piecewise signals.
std::vector<DeviationControl> deviation_family(const std::vector<Vec>& grid, int constants,
                                               int bang_bang, int max_switches,
                                               int random_piecewise, double t0,
                                               double horizon, unsigned seed);

struct RunOptions {
  int substeps = 64;           ///< sub-Euler steps per correction interval
  bool check_stability = true; ///< per-step anchor-gap growth assertions
  bool check_kappa = true;     ///< anchor gap within the kappa envelope
};

/// One correction record of a simulated run.
struct CorrectionRecord {
  double t = 0.0;
  Vec x;
  AnchorBranch branch = AnchorBranch::consistent;
  double accumulated_error = 0.0;
  double expected1 = 0.0, expected2 = 0.0;
  Vec control_u, control_v;  ///< whichever apply to this run
  double anchor_gap = 0.0;   ///< ||z - x|| at this correction
};

struct RunResult {
  Trajectory trajectory;
  PayoffPair payoff;  ///< (sigma1, sigma2) at the terminal state
  std::vector<CorrectionRecord> corrections;
  double max_anchor_gap = 0.0;
  double kappa_bound = 0.0;  ///< kappa(d(Delta)) for this run

  /// CSV: t, x..., branch(c/a), d, Y1, Y2, control...
  void write_trace_csv(std::ostream& out) const;
};

/// Both players play their guide strategies on the partition from
/// (t0, x0); controls are held between corrections. Strategies must share
/// the mode; in multivalued mode the partition must walk the table's time
/// grid.
RunResult run_consistent(const GameDefinition& game, const StrategyHandle& strategy1,
                         const StrategyHandle& strategy2, const Vec& x0,
                         const Partition& partition, const RunOptions& options = {});

/// The keeper plays its guide strategy; the deviator plays the prescribed
/// signal. `keeper` must be the non-deviating player's strategy.
RunResult run_deviation(const GameDefinition& game, const StrategyHandle& keeper,
                        Role deviator, const Vec& x0, const Partition& partition,
                        const DeviationControl& deviation, const RunOptions& options = {});

struct EquilibriumRow {
  double delta = 0.0;
  Vec x0;
  double j1_consistent = 0.0, j2_consistent = 0.0;
  double max_deviation1 = 0.0, max_deviation2 = 0.0;
  bool pass1 = true, pass2 = true;
  double tolerance = 0.0;
};

struct EquilibriumReport {
  double reference1 = 0.0, reference2 = 0.0;  ///< value pair at the start
  std::vector<EquilibriumRow> rows;
  unsigned seed = 0;

  bool all_pass() const;
  void write_json(std::ostream& out) const;
  void write_csv(std::ostream& out) const;
  std::string to_json() const;
};

using ToleranceRule = std::function<double(double)>;

/// phi_sigma(kappa(delta)) from a sampled Lipschitz bound of the payoffs
/// over the working box, floored at `floor_value`.
ToleranceRule default_tolerance_rule(const GameDefinition& game,
                                     const ShiftConstants& constants,
                                     double floor_value = 0.05);

/// Full sweep: for every partition diameter and start, one consistent run
/// plus every deviation for each role. Rows are ordered by (delta, x0,
/// family) and runs are seeded, so reports reproduce bit-identically.
EquilibriumReport equilibrium_report(const GameDefinition& game,
                                     const StrategyHandle& strategy1,
                                     const StrategyHandle& strategy2,
                                     const std::vector<Vec>& starts,
                                     const std::vector<double>& deltas,
                                     int constant_deviations, int bang_bang_deviations,
                                     int random_deviations, const ToleranceRule& tolerance,
                                     unsigned seed, const RunOptions& options = {});

/// Randomized check of the one-step extremal-shift gap estimate
///   ||s2(t+) - s1(t+)||^2 <= ||s20 - s10||^2 (1 + beta dt) + phi(dt) dt
/// with the frozen controls chosen by the saddle conditions at (t*, s1_0),
/// in both splittings: (i) the players hold u* / v* against arbitrary
/// opposition, (ii) one side holds the joint maximizer (u,v)*.
ConditionReport lemma1_check(const GameDefinition& game, const ShiftConstants& constants,
                             int trials, unsigned seed);

}  // namespace cwg
