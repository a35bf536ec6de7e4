#include "cwg/trajectory.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cwg/text.hpp"

namespace cwg {

Partition Partition::uniform(double t0, double horizon, int intervals) {
  if (intervals < 1) throw ConfigError("partition needs at least one interval");
  if (!(t0 < horizon)) throw ConfigError("partition needs t0 < T");
  Partition p;
  p.times.resize(intervals + 1);
  for (int k = 0; k <= intervals; ++k)
    p.times[k] = t0 + (horizon - t0) * static_cast<double>(k) / intervals;
  p.times.back() = horizon;
  return p;
}

double Partition::diameter() const {
  double d = 0.0;
  for (std::size_t k = 0; k + 1 < times.size(); ++k)
    d = std::max(d, times[k + 1] - times[k]);
  return d;
}

void Partition::validate(double horizon) const {
  if (times.size() < 2) throw ConfigError("partition needs at least two times");
  for (std::size_t k = 0; k + 1 < times.size(); ++k)
    if (!(times[k] < times[k + 1]))
      throw ConfigError("partition times must be strictly increasing");
  if (times.back() != horizon)
    throw ConfigError("partition must end at the horizon");
}

void Trajectory::write_csv(std::ostream& out) const {
  out << "t";
  for (std::size_t i = 0; i < states.front().size(); ++i) out << ",x" << i + 1;
  out << "\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    out << format_double(times[k]);
    for (double e : states[k]) out << "," << format_double(e);
    out << "\n";
  }
}

Trajectory integrate(const GameDefinition& game, double t0, const Vec& x0,
                     const std::vector<Vec>& u_per_interval,
                     const std::vector<Vec>& v_per_interval,
                     const Partition& partition, int substeps) {
  const std::size_t r = partition.times.size() - 1;
  if (u_per_interval.size() != r || v_per_interval.size() != r)
    throw ConfigError("control signal length does not match the partition");
  if (partition.times.front() != t0)
    throw ConfigError("t0 must equal the first partition time");

  Trajectory traj;
  traj.times.reserve(r + 1);
  traj.states.reserve(r + 1);
  traj.times.push_back(t0);
  traj.states.push_back(x0);
  Vec x = x0;
  for (std::size_t k = 0; k < r; ++k) {
    const double a = partition.times[k];
    const double b = partition.times[k + 1];
    const double h = (b - a) / substeps;
    for (int s = 0; s < substeps; ++s) {
      const double t = a + h * s;
      const Vec dx = rhs(game, t, x, u_per_interval[k], v_per_interval[k]);
      axpy(h, dx, x);
    }
    traj.times.push_back(b);
    traj.states.push_back(x);
  }
  return traj;
}

Trajectory integrate_signals(const GameDefinition& game, double t0, const Vec& x0,
                             const ControlSignal& u, const ControlSignal& v,
                             const Partition& partition, int substeps) {
  if (partition.times.front() != t0)
    throw ConfigError("t0 must equal the first partition time");
  const std::size_t r = partition.times.size() - 1;
  Trajectory traj;
  traj.times.reserve(r + 1);
  traj.states.reserve(r + 1);
  traj.times.push_back(t0);
  traj.states.push_back(x0);
  Vec x = x0;
  for (std::size_t k = 0; k < r; ++k) {
    const double a = partition.times[k];
    const double b = partition.times[k + 1];
    const double h = (b - a) / substeps;
    for (int s = 0; s < substeps; ++s) {
      const double t = a + h * s;
      const Vec dx = rhs(game, t, x, u(t), v(t));
      axpy(h, dx, x);
    }
    traj.times.push_back(b);
    traj.states.push_back(x);
  }
  return traj;
}

DiscreteTrajectory discrete_traj(const GameDefinition& game, int grid_size, int k_start,
                                 const Vec& xi_start, const std::vector<Vec>& u_seq,
                                 const std::vector<Vec>& v_seq) {
  if (grid_size < 1) throw ConfigError("grid size must be >= 1");
  if (k_start < 0 || k_start > grid_size) throw ConfigError("start index out of range");
  const std::size_t steps = static_cast<std::size_t>(grid_size - k_start);
  if (u_seq.size() != steps || v_seq.size() != steps)
    throw ConfigError("control sequence length must be N - k_start");
  const double delta = game.horizon / grid_size;
  DiscreteTrajectory traj;
  traj.grid_size = grid_size;
  traj.start_index = k_start;
  traj.states.reserve(steps + 1);
  traj.states.push_back(xi_start);
  Vec xi = xi_start;
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = delta * (k_start + static_cast<int>(s));
    const Vec dx = rhs(game, t, xi, u_seq[s], v_seq[s]);
    axpy(delta, dx, xi);
    traj.states.push_back(xi);
  }
  return traj;
}

double euler_error_bound(const ShiftConstants& constants, double initial_gap,
                         double elapsed, double delta_n) {
  const double lip = constants.lip_x_euler;
  return initial_gap * std::exp(2.0 * lip * elapsed) +
         constants.phi_prime(delta_n) * std::exp(lip * elapsed);
}

}  // namespace cwg
