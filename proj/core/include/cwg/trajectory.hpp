#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "cwg/game.hpp"
#include "cwg/types.hpp"

namespace cwg {

/// Strictly increasing correction times t0 < t1 < ... < tr = T.
struct Partition {
  std::vector<double> times;

  static Partition uniform(double t0, double horizon, int intervals);

  double t0() const { return times.front(); }
  double horizon() const { return times.back(); }
  int intervals() const { return static_cast<int>(times.size()) - 1; }

  /// d(Delta): the largest step.
  double diameter() const;

  void validate(double horizon) const;
};

/// Time-stamped state sequence sampled at partition times.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;

  const Vec& terminal() const { return states.back(); }

  /// CSV with header t,x1,...,xn; full decimal precision.
  void write_csv(std::ostream& out) const;
};

/// States of the Euler-step system on the uniform grid k = k_start..N.
struct DiscreteTrajectory {
  int grid_size = 0;    ///< N
  int start_index = 0;  ///< k*
  std::vector<Vec> states;
};

/// Control as a function of time; evaluated at the left endpoint of every
/// integration substep.
using ControlSignal = std::function<Vec(double)>;

/// Explicit Euler with `substeps` sub-intervals per partition interval,
/// controls held constant per interval. With substeps = 1 and the uniform
/// partition this reproduces the discrete-time system exactly.
Trajectory integrate(const GameDefinition& game, double t0, const Vec& x0,
                     const std::vector<Vec>& u_per_interval,
                     const std::vector<Vec>& v_per_interval,
                     const Partition& partition, int substeps);

/// Same integrator with free-form signals (deviation controls may switch
/// off the partition; switches resolve at substep resolution).
Trajectory integrate_signals(const GameDefinition& game, double t0, const Vec& x0,
                             const ControlSignal& u, const ControlSignal& v,
                             const Partition& partition, int substeps);

/// Exact Euler recursion with step T/N from (k_start, xi_start).
DiscreteTrajectory discrete_traj(const GameDefinition& game, int grid_size, int k_start,
                                 const Vec& xi_start, const std::vector<Vec>& u_seq,
                                 const std::vector<Vec>& v_seq);

/// Gap bound between the continuous motion and the Euler system:
/// initial_gap * exp(2 L' elapsed) + phi'(deltaN) * exp(L' elapsed).
double euler_error_bound(const ShiftConstants& constants, double initial_gap,
                         double elapsed, double delta_n);

}  // namespace cwg
