#include "cwg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "cwg/parallel.hpp"
#include "cwg/text.hpp"

namespace cwg {

// ---------------------------------------------------------------------------
// Deviation signals
// ---------------------------------------------------------------------------

Vec DeviationControl::at(double t) const {
  std::size_t idx = 0;
  while (idx < switch_times.size() && t >= switch_times[idx]) ++idx;
  return values[idx];
}

ControlSignal DeviationControl::signal() const {
  DeviationControl copy = *this;
  return [copy](double t) { return copy.at(t); };
}

DeviationControl DeviationControl::constant(const Vec& value, const std::string& label) {
  DeviationControl d;
  d.kind = Kind::constant;
  d.values = {value};
  d.label = label;
  return d;
}

DeviationControl DeviationControl::bang_bang(int max_switches, double t0, double horizon,
                                             const std::vector<Vec>& grid,
                                             std::mt19937_64& rng) {
  DeviationControl d;
  d.kind = Kind::bang_bang;
  const int switches =
      max_switches > 0 ? static_cast<int>(rng() % static_cast<unsigned>(max_switches + 1)) : 0;
  std::uniform_real_distribution<double> when(t0, horizon);
  d.switch_times.resize(switches);
  for (auto& t : d.switch_times) t = when(rng);
  std::sort(d.switch_times.begin(), d.switch_times.end());
  // alternate between the two extreme grid elements
  bool high = rng() % 2 == 0;
  for (int i = 0; i <= switches; ++i) {
    d.values.push_back(high ? grid.back() : grid.front());
    high = !high;
  }
  d.label = "bang" + std::to_string(switches);
  return d;
}

DeviationControl DeviationControl::random_piecewise(int pieces, double t0, double horizon,
                                                    const std::vector<Vec>& grid,
                                                    std::mt19937_64& rng) {
  DeviationControl d;
  d.kind = Kind::random_piecewise;
  std::uniform_real_distribution<double> when(t0, horizon);
  d.switch_times.resize(std::max(0, pieces - 1));
  for (auto& t : d.switch_times) t = when(rng);
  std::sort(d.switch_times.begin(), d.switch_times.end());
  for (std::size_t i = 0; i <= d.switch_times.size(); ++i)
    d.values.push_back(grid[rng() % grid.size()]);
  d.label = "rand" + std::to_string(pieces);
  return d;
}

std::vector<DeviationControl> deviation_family(const std::vector<Vec>& grid, int constants,
                                               int bang_bang, int max_switches,
                                               int random_piecewise, double t0,
                                               double horizon, unsigned seed) {
  std::vector<DeviationControl> family;
  family.reserve(constants + bang_bang + random_piecewise);
  for (int i = 0; i < constants; ++i)
    family.push_back(DeviationControl::constant(grid[i % grid.size()],
                                                "const" + std::to_string(i % grid.size())));
  std::mt19937_64 rng(seed);
  for (int i = 0; i < bang_bang; ++i)
    family.push_back(DeviationControl::bang_bang(max_switches, t0, horizon, grid, rng));
  for (int i = 0; i < random_piecewise; ++i)
    family.push_back(DeviationControl::random_piecewise(8, t0, horizon, grid, rng));
  return family;
}

// ---------------------------------------------------------------------------
// Simulated runs
// ---------------------------------------------------------------------------

void RunResult::write_trace_csv(std::ostream& out) const {
  const std::size_t n = corrections.empty() ? 0 : corrections.front().x.size();
  out << "t";
  for (std::size_t i = 0; i < n; ++i) out << ",x" << i + 1;
  out << ",branch,d,Y1,Y2";
  if (!corrections.empty()) {
    for (std::size_t i = 0; i < corrections.front().control_u.size(); ++i) out << ",u" << i + 1;
    for (std::size_t i = 0; i < corrections.front().control_v.size(); ++i) out << ",v" << i + 1;
  }
  out << "\n";
  for (const auto& r : corrections) {
    out << format_double(r.t);
    for (double e : r.x) out << "," << format_double(e);
    out << "," << (r.branch == AnchorBranch::consistent ? "c" : "a");
    out << "," << format_double(r.accumulated_error);
    out << "," << format_double(r.expected1) << "," << format_double(r.expected2);
    for (double e : r.control_u) out << "," << format_double(e);
    for (double e : r.control_v) out << "," << format_double(e);
    out << "\n";
  }
}

namespace {

double snap_slack(const StrategyHandle& s) {
  if (s.mode != GuideMode::multivalued) return 0.0;
  // stable motions land on grid nodes, half a cell away from the exact step
  double d = 0.0;
  for (double e : s.table->grid().step) d += 0.25 * e * e;
  return std::sqrt(d);
}

/// Table anchors advance by one Euler step while the estimate bounds the
/// continuous motion; allow for that discretization on top of the snap.
double anchor_discretization(const StrategyHandle& s, double dt) {
  if (s.mode != GuideMode::multivalued) return 0.0;
  return snap_slack(s) + s.constants.phi_prime(dt) * std::exp(s.constants.lip_x_euler * dt);
}

/// One-step gap bound of the extremal-shift estimate.
double step_bound(const ShiftConstants& c, double d_plus, double dt) {
  return d_plus * (1.0 + c.beta * dt) + c.phi(dt) * dt;
}

void check_step(const StrategyHandle& strategy, const GuideStep& step, const Vec& x_plus,
                double t, double t_plus, bool check_consistent_anchor,
                const char* run_kind) {
  const double dt = t_plus - t;
  const double bound = step_bound(strategy.constants, step.next.accumulated_error, dt);
  const double allowance =
      std::sqrt(std::max(bound, 0.0)) + anchor_discretization(strategy, dt) + 1e-9;
  const double punish_gap = dist(x_plus, step.next.punish_anchor);
  if (punish_gap > allowance)
    throw std::runtime_error(std::string("punishment-anchor growth bound failed in ") +
                             run_kind + " run at t=" + format_double(t) +
                             ": gap=" + format_double(punish_gap) +
                             " allowance=" + format_double(allowance));
  if (check_consistent_anchor) {
    const double consist_gap = dist(x_plus, step.next.consist_anchor);
    if (consist_gap > allowance)
      throw std::runtime_error(std::string("consistent-anchor growth bound failed in ") +
                               run_kind + " run at t=" + format_double(t) +
                               ": gap=" + format_double(consist_gap) +
                               " allowance=" + format_double(allowance));
  }
}

void check_kappa_envelope(const StrategyHandle& strategy, double gap, double delta,
                          double elapsed_total, double t) {
  const double env = strategy.constants.kappa(delta, elapsed_total) + snap_slack(strategy);
  if (gap > env + 1e-9)
    throw std::runtime_error("anchor gap " + format_double(gap) +
                             " exceeds the kappa envelope " + format_double(env) +
                             " at t=" + format_double(t));
}

void require_same_game(const GameDefinition& game, const StrategyHandle& s) {
  if (s.game->name != game.name)
    throw ConfigError("strategy was built for game '" + s.game->name + "'");
}

void require_table_partition(const StrategyHandle& s, const Partition& partition) {
  if (s.mode != GuideMode::multivalued) return;
  int prev = s.table->layer_of(partition.times.front());
  for (std::size_t i = 1; i < partition.times.size(); ++i) {
    const int k = s.table->layer_of(partition.times[i]);
    if (k != prev + 1)
      throw ConfigError("multivalued runs must use the table's time grid");
    prev = k;
  }
}

}  // namespace

RunResult run_consistent(const GameDefinition& game, const StrategyHandle& strategy1,
                         const StrategyHandle& strategy2, const Vec& x0,
                         const Partition& partition, const RunOptions& options) {
  partition.validate(game.horizon);
  require_same_game(game, strategy1);
  require_same_game(game, strategy2);
  if (strategy1.mode != strategy2.mode)
    throw ConfigError("consistent runs need strategies of the same mode");
  if (strategy1.role != Role::player1 || strategy2.role != Role::player2)
    throw ConfigError("run_consistent expects (player1, player2) strategies");
  require_table_partition(strategy1, partition);
  require_table_partition(strategy2, partition);

  const double t0 = partition.t0();
  const double delta = partition.diameter();
  const double elapsed_total = game.horizon - t0;

  RunResult result;
  result.kappa_bound = strategy1.constants.kappa(delta, elapsed_total);
  result.trajectory.times.push_back(t0);
  result.trajectory.states.push_back(x0);

  GuideState guide1 = init_guide(strategy1, t0, x0);
  GuideState guide2 = init_guide(strategy2, t0, x0);
  Vec x = x0;

  for (int k = 0; k < partition.intervals(); ++k) {
    const double t = partition.times[k];
    const double t_plus = partition.times[k + 1];

    const GuideStep step1 = guide_step(strategy1, guide1, t, x, t_plus);
    const GuideStep step2 = guide_step(strategy2, guide2, t, x, t_plus);

    CorrectionRecord rec;
    rec.t = t;
    rec.x = x;
    rec.branch = step1.branch;
    rec.accumulated_error = step1.next.accumulated_error;
    rec.expected1 = step1.next.expected1;
    rec.expected2 = step1.next.expected2;
    rec.control_u = step1.control;
    rec.control_v = step2.control;
    rec.anchor_gap = dist(step1.anchor, x);
    result.max_anchor_gap =
        std::max({result.max_anchor_gap, rec.anchor_gap, dist(step2.anchor, x)});
    result.corrections.push_back(rec);

    if (options.check_kappa) {
      check_kappa_envelope(strategy1, dist(step1.anchor, x), delta, elapsed_total, t);
      check_kappa_envelope(strategy2, dist(step2.anchor, x), delta, elapsed_total, t);
    }

    const Partition leg{{t, t_plus}};
    x = integrate(game, t, x, {step1.control}, {step2.control}, leg, options.substeps)
            .terminal();
    result.trajectory.times.push_back(t_plus);
    result.trajectory.states.push_back(x);

    if (options.check_stability) {
      check_step(strategy1, step1, x, t, t_plus, true, "consistent");
      check_step(strategy2, step2, x, t, t_plus, true, "consistent");
    }

    guide1 = step1.next;
    guide2 = step2.next;
  }

  result.payoff = PayoffPair{game.sigma1(x), game.sigma2(x)};
  return result;
}

RunResult run_deviation(const GameDefinition& game, const StrategyHandle& keeper,
                        Role deviator, const Vec& x0, const Partition& partition,
                        const DeviationControl& deviation, const RunOptions& options) {
  partition.validate(game.horizon);
  require_same_game(game, keeper);
  if (keeper.role == deviator)
    throw ConfigError("the keeper strategy must belong to the non-deviating player");
  require_table_partition(keeper, partition);

  const double t0 = partition.t0();
  const double delta = partition.diameter();
  const double elapsed_total = game.horizon - t0;

  RunResult result;
  result.kappa_bound = keeper.constants.kappa(delta, elapsed_total);
  result.trajectory.times.push_back(t0);
  result.trajectory.states.push_back(x0);

  GuideState guide = init_guide(keeper, t0, x0);
  const ControlSignal dev_signal = deviation.signal();
  Vec x = x0;

  for (int k = 0; k < partition.intervals(); ++k) {
    const double t = partition.times[k];
    const double t_plus = partition.times[k + 1];

    const GuideStep step = guide_step(keeper, guide, t, x, t_plus);

    CorrectionRecord rec;
    rec.t = t;
    rec.x = x;
    rec.branch = step.branch;
    rec.accumulated_error = step.next.accumulated_error;
    rec.expected1 = step.next.expected1;
    rec.expected2 = step.next.expected2;
    if (keeper.role == Role::player1) {
      rec.control_u = step.control;
      rec.control_v = dev_signal(t);
    } else {
      rec.control_u = dev_signal(t);
      rec.control_v = step.control;
    }
    rec.anchor_gap = dist(step.anchor, x);
    result.max_anchor_gap = std::max(result.max_anchor_gap, rec.anchor_gap);
    result.corrections.push_back(rec);

    if (options.check_kappa)
      check_kappa_envelope(keeper, rec.anchor_gap, delta, elapsed_total, t);

    const Partition leg{{t, t_plus}};
    const ControlSignal own = [&step](double) { return step.control; };
    x = (keeper.role == Role::player1
             ? integrate_signals(game, t, x, own, dev_signal, leg, options.substeps)
             : integrate_signals(game, t, x, dev_signal, own, leg, options.substeps))
            .terminal();
    result.trajectory.times.push_back(t_plus);
    result.trajectory.states.push_back(x);

    // only the punishment anchor obeys the one-sided growth bound here
    if (options.check_stability) check_step(keeper, step, x, t, t_plus, false, "deviation");

    guide = step.next;
  }

  result.payoff = PayoffPair{game.sigma1(x), game.sigma2(x)};
  return result;
}

// ---------------------------------------------------------------------------
// Equilibrium report
// ---------------------------------------------------------------------------

bool EquilibriumReport::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass1 || !r.pass2) return false;
  return true;
}

void EquilibriumReport::write_json(std::ostream& out) const {
  out << "{\n  \"reference\": [" << format_double(reference1) << ", "
      << format_double(reference2) << "],\n  \"seed\": " << seed << ",\n  \"rows\": [\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << "    {\"delta\": " << format_double(r.delta) << ", \"x0\": [";
    for (std::size_t j = 0; j < r.x0.size(); ++j)
      out << (j ? ", " : "") << format_double(r.x0[j]);
    out << "], \"consistent\": [" << format_double(r.j1_consistent) << ", "
        << format_double(r.j2_consistent) << "], \"max_dev\": ["
        << format_double(r.max_deviation1) << ", " << format_double(r.max_deviation2)
        << "], \"tolerance\": " << format_double(r.tolerance) << ", \"pass\": ["
        << (r.pass1 ? "true" : "false") << ", " << (r.pass2 ? "true" : "false") << "]}";
    out << (i + 1 < rows.size() ? ",\n" : "\n");
  }
  out << "  ]\n}\n";
}

void EquilibriumReport::write_csv(std::ostream& out) const {
  const std::size_t n = rows.empty() ? 0 : rows.front().x0.size();
  out << "delta";
  for (std::size_t i = 0; i < n; ++i) out << ",x0_" << i + 1;
  out << ",J1_cons,J2_cons,max_dev1,max_dev2,pass1,pass2\n";
  for (const auto& r : rows) {
    out << format_double(r.delta);
    for (double e : r.x0) out << "," << format_double(e);
    out << "," << format_double(r.j1_consistent) << "," << format_double(r.j2_consistent)
        << "," << format_double(r.max_deviation1) << "," << format_double(r.max_deviation2)
        << "," << (r.pass1 ? 1 : 0) << "," << (r.pass2 ? 1 : 0) << "\n";
  }
}

std::string EquilibriumReport::to_json() const {
  std::ostringstream out;
  write_json(out);
  return out.str();
}

ToleranceRule default_tolerance_rule(const GameDefinition& game,
                                     const ShiftConstants& constants, double floor_value) {
  // sampled Lipschitz bound of the payoffs over the working box
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Box& box = constants.bounding_box;
  double lip = 0.0;
  for (int i = 0; i < 400; ++i) {
    Vec a(box.dim()), b(box.dim());
    for (std::size_t j = 0; j < box.dim(); ++j) {
      a[j] = box.lo[j] + (box.hi[j] - box.lo[j]) * unit(rng);
      b[j] = box.lo[j] + (box.hi[j] - box.lo[j]) * unit(rng);
    }
    const double gap = dist(a, b);
    if (gap <= 0.0) continue;
    lip = std::max(lip, std::abs(game.sigma1(a) - game.sigma1(b)) / gap);
    lip = std::max(lip, std::abs(game.sigma2(a) - game.sigma2(b)) / gap);
  }
  const double payoff_lip = 1.05 * lip;
  const double horizon = game.horizon;
  return [payoff_lip, horizon, floor_value, constants](double delta) {
    return std::max(floor_value, payoff_lip * constants.kappa(delta, horizon));
  };
}

EquilibriumReport equilibrium_report(const GameDefinition& game,
                                     const StrategyHandle& strategy1,
                                     const StrategyHandle& strategy2,
                                     const std::vector<Vec>& starts,
                                     const std::vector<double>& deltas,
                                     int constant_deviations, int bang_bang_deviations,
                                     int random_deviations, const ToleranceRule& tolerance,
                                     unsigned seed, const RunOptions& options) {
  if (starts.empty()) throw ConfigError("equilibrium_report needs at least one start");
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (!(deltas[i] < deltas[i - 1]))
      throw ConfigError("the delta sequence must be decreasing");

  EquilibriumReport report;
  report.seed = seed;
  {
    const double t0 = 0.0;
    if (strategy1.mode == GuideMode::closed_form) {
      report.reference1 = strategy1.closed.c1(t0, starts.front());
      report.reference2 = strategy1.closed.c2(t0, starts.front());
    } else {
      const PayoffPair ref = strategy1.table->select(t0, starts.front(), strategy1.rule);
      report.reference1 = ref.j1;
      report.reference2 = ref.j2;
    }
  }

  unsigned combo = 0;
  for (double delta : deltas) {
    const int intervals = std::max(1, static_cast<int>(std::lround(game.horizon / delta)));
    const Partition partition = Partition::uniform(0.0, game.horizon, intervals);
    for (const Vec& x0 : starts) {
      ++combo;
      const RunResult consistent =
          run_consistent(game, strategy1, strategy2, x0, partition, options);

      EquilibriumRow row;
      row.delta = partition.diameter();
      row.x0 = x0;
      row.j1_consistent = consistent.payoff.j1;
      row.j2_consistent = consistent.payoff.j2;
      row.tolerance = tolerance(partition.diameter());

      // player I deviates against the player-II keeper
      const auto family1 =
          deviation_family(game.control_grid_p, constant_deviations, bang_bang_deviations,
                           8, random_deviations, 0.0, game.horizon, seed + 7919 * combo);
      std::vector<double> dev1(family1.size(), -std::numeric_limits<double>::infinity());
      parallel_for(family1.size(), [&](std::size_t i) {
        dev1[i] = run_deviation(game, strategy2, Role::player1, x0, partition, family1[i],
                                options)
                      .payoff.j1;
      });
      // player II deviates against the player-I keeper
      const auto family2 =
          deviation_family(game.control_grid_q, constant_deviations, bang_bang_deviations,
                           8, random_deviations, 0.0, game.horizon, seed + 104729 * combo);
      std::vector<double> dev2(family2.size(), -std::numeric_limits<double>::infinity());
      parallel_for(family2.size(), [&](std::size_t i) {
        dev2[i] = run_deviation(game, strategy1, Role::player2, x0, partition, family2[i],
                                options)
                      .payoff.j2;
      });

      row.max_deviation1 = family1.empty()
                               ? -std::numeric_limits<double>::infinity()
                               : *std::max_element(dev1.begin(), dev1.end());
      row.max_deviation2 = family2.empty()
                               ? -std::numeric_limits<double>::infinity()
                               : *std::max_element(dev2.begin(), dev2.end());
      row.pass1 = family1.empty() || row.max_deviation1 <= row.j1_consistent + row.tolerance;
      row.pass2 = family2.empty() || row.max_deviation2 <= row.j2_consistent + row.tolerance;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Extremal-shift gap estimate suite
// ---------------------------------------------------------------------------

namespace {

struct SaddleChoice {
  Vec u_star, v_star;
};

/// Frozen controls from the saddle conditions at (t, base): u* attains the
/// outer max of max-min, v* the outer min of min-max, both over the grids.
SaddleChoice saddle_controls(const GameDefinition& game, double t, const Vec& base,
                             const Vec& direction) {
  SaddleChoice c;
  double best_outer = -std::numeric_limits<double>::infinity();
  for (const Vec& u : game.control_grid_p) {
    double inner = std::numeric_limits<double>::infinity();
    for (const Vec& v : game.control_grid_q)
      inner = std::min(inner, dot(direction, rhs(game, t, base, u, v)));
    if (inner > best_outer) {
      best_outer = inner;
      c.u_star = u;
    }
  }
  double best_minmax = std::numeric_limits<double>::infinity();
  for (const Vec& v : game.control_grid_q) {
    double inner = -std::numeric_limits<double>::infinity();
    for (const Vec& u : game.control_grid_p)
      inner = std::max(inner, dot(direction, rhs(game, t, base, u, v)));
    if (inner < best_minmax) {
      best_minmax = inner;
      c.v_star = v;
    }
  }
  return c;
}

}  // namespace

ConditionReport lemma1_check(const GameDefinition& game, const ShiftConstants& constants,
                             int trials, unsigned seed) {
  if (trials < 1) throw ConfigError("lemma1_check needs at least one trial");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Box& box = constants.bounding_box;

  auto sample_point = [&]() {
    Vec x(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i)
      x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit(rng);
    return x;
  };

  ConditionResult case_i{"case_i", true, -std::numeric_limits<double>::infinity(), "", 0};
  ConditionResult case_ii{"case_ii", true, -std::numeric_limits<double>::infinity(), "", 0};

  const int substeps = 64;
  for (int trial = 0; trial < trials; ++trial) {
    const Vec s1_start = sample_point();
    const Vec s2_start = sample_point();
    const double t_star = unit(rng) * 0.9 * game.horizon;
    const double t_plus = t_star + (game.horizon - t_star) * std::max(unit(rng), 0.05);
    const Vec direction = sub(s2_start, s1_start);
    const double gap0_sq = dist_sq(s2_start, s1_start);

    const auto random_u = DeviationControl::random_piecewise(
        8, t_star, game.horizon, game.control_grid_p, rng);
    const auto random_v = DeviationControl::random_piecewise(
        8, t_star, game.horizon, game.control_grid_q, rng);
    const auto random_u2 = DeviationControl::random_piecewise(
        8, t_star, game.horizon, game.control_grid_p, rng);
    const auto random_v2 = DeviationControl::random_piecewise(
        8, t_star, game.horizon, game.control_grid_q, rng);

    const SaddleChoice saddle = saddle_controls(game, t_star, s1_start, direction);

    auto run_case = [&](const ControlSignal& u1, const ControlSignal& v1,
                        const ControlSignal& u2, const ControlSignal& v2,
                        ConditionResult& result) {
      Vec s1 = s1_start, s2 = s2_start;
      const double h = (t_plus - t_star) / substeps;
      ++result.samples;
      for (int s = 0; s < substeps; ++s) {
        const double t = t_star + h * s;
        axpy(h, rhs(game, t, s1, u1(t), v1(t)), s1);
        axpy(h, rhs(game, t, s2, u2(t), v2(t)), s2);
        const double elapsed = h * (s + 1);
        const double lhs = dist_sq(s2, s1);
        const double bound =
            gap0_sq * (1.0 + constants.beta * elapsed) + constants.phi(elapsed) * elapsed;
        const double margin = lhs - bound;
        if (margin > result.worst) {
          result.worst = margin;
          result.witness = "trial " + std::to_string(trial) + " t=" + format_double(t_star + elapsed);
        }
      }
    };

    // case (i): s1 holds u*, s2 holds v*, the opposition is arbitrary
    const Vec u_star = saddle.u_star, v_star = saddle.v_star;
    run_case([&u_star](double) { return u_star; }, random_v.signal(),
             random_u.signal(), [&v_star](double) { return v_star; }, case_i);

    // case (ii): s1 holds the joint maximizer of <s2-s1, f+g>, s2 is free
    double best = -std::numeric_limits<double>::infinity();
    Vec joint_u, joint_v;
    for (const Vec& u : game.control_grid_p)
      for (const Vec& v : game.control_grid_q) {
        const double score = dot(direction, rhs(game, t_star, s1_start, u, v));
        if (score > best) {
          best = score;
          joint_u = u;
          joint_v = v;
        }
      }
    run_case([&joint_u](double) { return joint_u; }, [&joint_v](double) { return joint_v; },
             random_u2.signal(), random_v2.signal(), case_ii);
  }

  case_i.pass = case_i.worst <= 1e-12;
  case_ii.pass = case_ii.worst <= 1e-12;

  ConditionReport report;
  report.conditions = {case_i, case_ii};
  report.params["game"] = game.name;
  report.params["trials"] = std::to_string(trials);
  report.params["seed"] = std::to_string(seed);
  return report;
}

}  // namespace cwg

