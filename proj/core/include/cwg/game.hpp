#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cwg/types.hpp"

namespace cwg {

/// Two-player game with separated dynamics  x' = f(t,x,u) + g(t,x,v)
/// and terminal payoffs sigma_i(x(T)) that each player maximizes.
/// The compact control sets P and Q are represented by finite grids, so
/// every extremal operation downstream is an exact finite max/min.
struct GameDefinition {
  std::string name;
  int state_dim = 0;
  double horizon = 0.0;
  std::vector<Vec> control_grid_p;  ///< discretization of P, nonempty
  std::vector<Vec> control_grid_q;  ///< discretization of Q ({0} if player II is fictitious)
  std::function<Vec(double, const Vec&, const Vec&)> f_eval;
  std::function<Vec(double, const Vec&, const Vec&)> g_eval;
  std::function<double(const Vec&)> sigma1;
  std::function<double(const Vec&)> sigma2;
};

/// f(t,x,u) + g(t,x,v).
Vec rhs(const GameDefinition& game, double t, const Vec& x, const Vec& u, const Vec& v);

/// Built-in games.
///
/// example1: n=2, T=1, x1' = -v, x2' = 2u + v, u,v in [-1,1],
///           sigma_i(x) = x_i. Both control boxes discretized with
///           `control_points` per axis (endpoints included).
GameDefinition example1_game(int control_points = 5);

/// example2: n=1, T=1, x' = u, u in [-1,1], player II fictitious (Q = {0}),
///           sigma1 = |x|, sigma2 = x.
GameDefinition example2_game(int control_points = 5);

/// Loads a game from an INI-style document. Either
///   [game] name = example1|example2  (plus optional control_points)
/// or an affine game:
///   [game] kind = affine, name, T, n
///   [dynamics] A,b,B,C (row-major), u_box/v_box (lo hi pairs), u_points/v_points
///   [payoff1]/[payoff2] kind = linear|abs_linear, c, d
/// Unknown keys are rejected.
GameDefinition load_game(const std::string& config_text, int default_control_points = 5);
GameDefinition load_game_file(const std::string& path, int default_control_points = 5);

/// Seeded affine game with bounded random coefficients; used by the
/// randomized estimate suites.
GameDefinition random_affine_game(int state_dim, unsigned seed, int control_points = 3);

/// Evenly spaced points including both endpoints (count >= 2), or the
/// midpoint alone for a degenerate axis.
std::vector<double> linspace(double lo, double hi, int count);

/// Cartesian product grid over per-axis point lists, row-major
/// (last axis fastest). The enumeration order defines control tie-breaks.
std::vector<Vec> product_grid(const std::vector<std::vector<double>>& axes);

/// Constants that feed the extremal-shift estimates, sampled over a working
/// box E that over-approximates the reachable set.
///
/// speed_bound       K  : max ||f+g|| over [0,T] x E x P x Q (with safety factor)
/// lip_x             L  : Lipschitz constant of f+g in x on E
/// beta                 : exactly 2*L
/// diameter          R  : Euclidean diameter of E
/// phi_star(d)          : time-variation modulus of f+g over steps <= d
/// phi(d)               : 4*phi_star(d)*R + 4*K^2*d
/// *_euler              : the analogous constants for the Euler comparison
/// phi_prime(d)         : joint time/state variation modulus with ||dx|| <= K'*d
struct ShiftConstants {
  Box bounding_box;
  double speed_bound = 0.0;
  double lip_x = 0.0;
  double beta = 0.0;
  double diameter = 0.0;
  double speed_bound_euler = 0.0;
  double lip_x_euler = 0.0;
  std::vector<double> delta_knots;    ///< increasing, first = 0
  std::vector<double> phi_star_tab;   ///< nondecreasing, phi_star_tab[0] = 0
  std::vector<double> phi_prime_tab;  ///< nondecreasing

  /// Ceiling lookup in the tabulated modulus (upper bound for any delta
  /// between knots); clamps beyond the last knot.
  double phi_star(double delta) const;
  double phi_prime(double delta) const;
  double phi(double delta) const;

  /// kappa(delta) over a window of length `elapsed`:
  /// sqrt((1 + elapsed) * phi(delta) * exp(beta * elapsed)).
  double kappa(double delta, double elapsed) const;
};

/// Samples the constants over E = initial_box inflated by Khat*T per
/// coordinate, where Khat is a first-pass speed bound (1.1 safety factor,
/// iterated once). Corner points of the box and the control grids are
/// always included in the samples, so affine maxima are hit exactly.
ShiftConstants estimate_constants(const GameDefinition& game, const Box& initial_box,
                                  int sample_count, unsigned seed);

/// Same sampling, but the given box is taken as the working set E itself
/// (no reachability inflation). Used when the caller fixes the state grid
/// a priori and treats it as the working box.
ShiftConstants estimate_constants_on_box(const GameDefinition& game, const Box& working_box,
                                         int sample_count, unsigned seed);

}  // namespace cwg
