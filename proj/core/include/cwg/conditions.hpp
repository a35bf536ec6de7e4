#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cwg/game.hpp"
#include "cwg/types.hpp"
#include "cwg/value_table.hpp"

namespace cwg {

/// A candidate value pair (c1, c2) with gradients (analytic where
/// registered, central finite differences otherwise). Gradients are
/// returned as (d/dt, d/dx1, ..., d/dxn).
struct CandidateValueFunction {
  std::string name;
  std::function<double(double, const Vec&)> c1, c2;
  std::function<Vec(double, const Vec&)> grad1, grad2;  ///< optional analytic
  double fd_step = 1e-5;
  /// Positions where the candidate is not differentiable; smooth-only
  /// operations must be called away from these.
  std::function<bool(double, const Vec&)> near_kink;
  /// Registered extremal selections for the residual operator, used when
  /// the grid argmax is degenerate (a vanishing gradient component makes
  /// every control maximal). Must attain the grid maximum.
  std::optional<Vec> u_hat_hint, v_hat_hint;

  double value(int which, double t, const Vec& x) const;
  Vec gradient(int which, double t, const Vec& x) const;
  bool smooth_at(double t, const Vec& x) const { return !near_kink || !near_kink(t, x); }
};

/// Named candidates per game:
///   example1: "conserved"            (x1 + (1-t), x2 + (1-t))
///             "conserved_perturbed"  (x1 - 2(1-t), x2 + (1-t)) - rises too
///                                    fast in t for the dynamics to hold it
///             "phi_alpha:<a>"        (x1 - (1-t), x2 + (1+2a)(1-t))
///   example2: "abs_branch"           (|x| + (1-t), x + sign(x)(1-t)), kinked
///                                    at x = 0
CandidateValueFunction candidate_for(const GameDefinition& game, const std::string& spec);

struct ConditionResult {
  std::string id;
  bool pass = false;
  double worst = 0.0;  ///< largest violation magnitude observed
  std::string witness;
  long samples = 0;
};

struct ConditionReport {
  std::vector<ConditionResult> conditions;
  std::map<std::string, std::string> params;

  bool all_pass() const;
  const ConditionResult& find(const std::string& id) const;
  void write_json(std::ostream& out) const;
  std::string to_json() const;
};

/// H1(t,x,s) = max over P of min over Q of <s, f + g>; roles swapped for
/// player 2. Exact over the control grids.
double hamiltonian(const GameDefinition& game, double t, const Vec& x, const Vec& costate,
                   int player);

struct HjResidual {
  double r1 = 0.0, r2 = 0.0;
  Vec u_hat, v_hat;  ///< the selections used (recorded for the report)
};

/// r_i = dc_i/dt + <grad c_i, f(t,x,u_hat) + g(t,x,v_hat)> with
/// u_hat = argmax <grad c1, f> over the P grid and v_hat = argmax
/// <grad c2, g> over the Q grid (ties to the lowest index, or the
/// candidate's registered selection).
HjResidual hj_residual(const CandidateValueFunction& candidate, const GameDefinition& game,
                       double t, const Vec& x);

struct SampleSpec {
  Box positions;                    ///< state sampling box
  double t_lo = 0.0, t_hi = 1.0;    ///< time sampling range
  int samples = 500;
  double step = 0.01;               ///< one-step surrogate delta
  double tolerance = 0.02;
  unsigned seed = 1;
};

/// Sampled one-step surrogates of the viability conditions for a
/// closed-form candidate:
///   F1: |c_i(T,x) - sigma_i(x)| <= tol
///   F2: for all u: min over v of c1 after one step <= c1 + tol
///   F3: for all v: min over u of c2 after one step <= c2 + tol
///   F4: min over (u,v) of |dc1| + |dc2| <= tol
ConditionReport check_F(const CandidateValueFunction& candidate, const GameDefinition& game,
                        const SampleSpec& spec);

/// min over the step sequence of (|c1(t+d, x+d*w) - c1(t,x)| +
/// |c2(t+d, x+d*w) - c2(t,x)|) / d.
double modulus_derivative(const CandidateValueFunction& candidate, double t, const Vec& x,
                          const Vec& w, const std::vector<double>& deltas);

/// Table-side conditions: S1 terminal layers match the payoff map exactly,
/// S2/S3 punishment lookups lower the required component (within eps),
/// S4 consistent lookups succeed. `samples` pairs are drawn seeded; a
/// budget at least the table's pair count makes the sweep exhaustive.
ConditionReport check_S(const ValueTable& table, long samples, unsigned seed);

}  // namespace cwg
