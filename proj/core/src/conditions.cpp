#include "cwg/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "cwg/text.hpp"

namespace cwg {

double CandidateValueFunction::value(int which, double t, const Vec& x) const {
  return which == 1 ? c1(t, x) : c2(t, x);
}

Vec CandidateValueFunction::gradient(int which, double t, const Vec& x) const {
  const auto& analytic = which == 1 ? grad1 : grad2;
  if (analytic) return analytic(t, x);
  const auto& c = which == 1 ? c1 : c2;
  const double h = fd_step;
  Vec grad(x.size() + 1);
  grad[0] = (c(t + h, x) - c(t - h, x)) / (2.0 * h);
  Vec xp = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    const double above = c(t, xp);
    xp[i] = x[i] - h;
    const double below = c(t, xp);
    xp[i] = x[i];
    grad[i + 1] = (above - below) / (2.0 * h);
  }
  return grad;
}

CandidateValueFunction candidate_for(const GameDefinition& game, const std::string& spec) {
  CandidateValueFunction cand;
  cand.name = spec;
  if (game.name == "example1") {
    if (spec == "conserved") {
      cand.c1 = [](double t, const Vec& x) { return x[0] + (1.0 - t); };
      cand.c2 = [](double t, const Vec& x) { return x[1] + (1.0 - t); };
      cand.grad1 = [](double, const Vec&) { return Vec{-1.0, 1.0, 0.0}; };
      cand.grad2 = [](double, const Vec&) { return Vec{-1.0, 0.0, 1.0}; };
      return cand;
    }
    if (spec == "conserved_perturbed") {
      // First component climbs at rate 2 while the dynamics can pull x1
      // down at rate at most 1, so no motion holds c1 down.
      cand.c1 = [](double t, const Vec& x) { return x[0] - 2.0 * (1.0 - t); };
      cand.c2 = [](double t, const Vec& x) { return x[1] + (1.0 - t); };
      cand.grad1 = [](double, const Vec&) { return Vec{2.0, 1.0, 0.0}; };
      cand.grad2 = [](double, const Vec&) { return Vec{-1.0, 0.0, 1.0}; };
      return cand;
    }
    if (spec.rfind("phi_alpha:", 0) == 0) {
      const double alpha = parse_number(spec.substr(std::string("phi_alpha:").size()));
      if (alpha < -1.0 || alpha > 1.0)
        throw ConfigError("phi_alpha parameter must lie in [-1, 1]");
      cand.c1 = [](double t, const Vec& x) { return x[0] - (1.0 - t); };
      cand.c2 = [alpha](double t, const Vec& x) {
        return x[1] + (1.0 + 2.0 * alpha) * (1.0 - t);
      };
      cand.grad1 = [](double, const Vec&) { return Vec{1.0, 1.0, 0.0}; };
      cand.grad2 = [alpha](double, const Vec&) {
        return Vec{-(1.0 + 2.0 * alpha), 0.0, 1.0};
      };
      // <grad c1, f> vanishes identically, so the residual argmax over u is
      // degenerate; the solution selection is u = alpha.
      cand.u_hat_hint = Vec{alpha};
      return cand;
    }
    throw ConfigError("unknown candidate '" + spec + "' for example1");
  }
  if (game.name == "example2") {
    if (spec == "abs_branch") {
      cand.c1 = [](double t, const Vec& x) { return std::abs(x[0]) + (1.0 - t); };
      cand.c2 = [](double t, const Vec& x) {
        return x[0] >= 0.0 ? x[0] + (1.0 - t) : x[0] - (1.0 - t);
      };
      cand.near_kink = [](double, const Vec& x) { return std::abs(x[0]) < 1e-4; };
      return cand;
    }
    throw ConfigError("unknown candidate '" + spec + "' for example2");
  }
  throw ConfigError("no candidates registered for game '" + game.name + "'");
}

bool ConditionReport::all_pass() const {
  for (const auto& c : conditions)
    if (!c.pass) return false;
  return true;
}

const ConditionResult& ConditionReport::find(const std::string& id) const {
  for (const auto& c : conditions)
    if (c.id == id) return c;
  throw std::out_of_range("no condition '" + id + "' in the report");
}

void ConditionReport::write_json(std::ostream& out) const {
  out << "{\n  \"conditions\": [\n";
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    const auto& c = conditions[i];
    out << "    {\"id\": \"" << json_escape(c.id) << "\", \"pass\": "
        << (c.pass ? "true" : "false") << ", \"worst\": " << format_double(c.worst)
        << ", \"samples\": " << c.samples << ", \"witness\": \"" << json_escape(c.witness)
        << "\"}";
    out << (i + 1 < conditions.size() ? ",\n" : "\n");
  }
  out << "  ],\n  \"params\": {";
  std::size_t i = 0;
  for (const auto& [k, v] : params) {
    out << "\"" << json_escape(k) << "\": \"" << json_escape(v) << "\"";
    if (++i < params.size()) out << ", ";
  }
  out << "}\n}\n";
}

std::string ConditionReport::to_json() const {
  std::ostringstream out;
  write_json(out);
  return out.str();
}

double hamiltonian(const GameDefinition& game, double t, const Vec& x, const Vec& costate,
                   int player) {
  double outer = -std::numeric_limits<double>::infinity();
  if (player == 1) {
    for (const Vec& u : game.control_grid_p) {
      double inner = std::numeric_limits<double>::infinity();
      for (const Vec& v : game.control_grid_q)
        inner = std::min(inner, dot(costate, rhs(game, t, x, u, v)));
      outer = std::max(outer, inner);
    }
  } else {
    for (const Vec& v : game.control_grid_q) {
      double inner = std::numeric_limits<double>::infinity();
      for (const Vec& u : game.control_grid_p)
        inner = std::min(inner, dot(costate, rhs(game, t, x, u, v)));
      outer = std::max(outer, inner);
    }
  }
  return outer;
}

namespace {

Vec space_part(const Vec& grad) { return Vec(grad.begin() + 1, grad.end()); }

/// Grid argmax of <s, field(control)>; ties to the lowest index. A
/// registered selection overrides the grid, provided it attains the grid
/// maximum (within 1e-9).
Vec residual_selection(const std::vector<Vec>& grid, const Vec& s,
                       const std::function<Vec(const Vec&)>& field,
                       const std::optional<Vec>& hint) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double score = dot(s, field(grid[i]));
    if (score > best) {
      best = score;
      best_i = i;
    }
  }
  if (hint) {
    const double hint_score = dot(s, field(*hint));
    if (hint_score < best - 1e-9)
      throw ConfigError("registered extremal selection does not attain the maximum");
    return *hint;
  }
  return grid[best_i];
}

}  // namespace

HjResidual hj_residual(const CandidateValueFunction& candidate, const GameDefinition& game,
                       double t, const Vec& x) {
  if (!candidate.smooth_at(t, x))
    throw ConfigError("hj_residual called at a registered kink of '" + candidate.name + "'");
  const Vec grad_full1 = candidate.gradient(1, t, x);
  const Vec grad_full2 = candidate.gradient(2, t, x);
  const Vec s1 = space_part(grad_full1);
  const Vec s2 = space_part(grad_full2);

  HjResidual r;
  r.u_hat = residual_selection(
      game.control_grid_p, s1, [&](const Vec& u) { return game.f_eval(t, x, u); },
      candidate.u_hat_hint);
  r.v_hat = residual_selection(
      game.control_grid_q, s2, [&](const Vec& v) { return game.g_eval(t, x, v); },
      candidate.v_hat_hint);

  const Vec flow = rhs(game, t, x, r.u_hat, r.v_hat);
  r.r1 = grad_full1[0] + dot(s1, flow);
  r.r2 = grad_full2[0] + dot(s2, flow);
  return r;
}

ConditionReport check_F(const CandidateValueFunction& candidate, const GameDefinition& game,
                        const SampleSpec& spec) {
  if (!(spec.step > 0.0) || !(spec.tolerance > 0.0))
    throw ConfigError("check_F needs positive step and tolerance");
  std::mt19937_64 rng(spec.seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  auto sample_x = [&]() {
    Vec x(spec.positions.dim());
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = uniform(spec.positions.lo[i], spec.positions.hi[i]);
    return x;
  };

  const double delta = spec.step;
  const double t_hi = std::min(spec.t_hi, game.horizon - delta);

  ConditionResult f1{"F1", true, 0.0, "", 0};
  ConditionResult f2{"F2", true, 0.0, "", 0};
  ConditionResult f3{"F3", true, 0.0, "", 0};
  ConditionResult f4{"F4", true, 0.0, "", 0};

  auto describe = [](double t, const Vec& x) {
    std::string s = "t=" + format_double(t) + " x=(";
    for (std::size_t i = 0; i < x.size(); ++i)
      s += (i ? "," : "") + format_double(x[i]);
    return s + ")";
  };

  for (int it = 0; it < spec.samples; ++it) {
    {
      const Vec x = sample_x();
      const double gap1 = std::abs(candidate.c1(game.horizon, x) - game.sigma1(x));
      const double gap2 = std::abs(candidate.c2(game.horizon, x) - game.sigma2(x));
      const double gap = std::max(gap1, gap2);
      ++f1.samples;
      if (gap > f1.worst) {
        f1.worst = gap;
        f1.witness = describe(game.horizon, x);
      }
    }

    const double t = uniform(spec.t_lo, t_hi);
    const Vec x = sample_x();
    const double base1 = candidate.c1(t, x);
    const double base2 = candidate.c2(t, x);

    // F2: player II can keep c1 from rising whatever u is frozen at.
    for (const Vec& u : game.control_grid_p) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec& v : game.control_grid_q) {
        Vec y = x;
        axpy(delta, rhs(game, t, x, u, v), y);
        best = std::min(best, candidate.c1(t + delta, y) - base1);
      }
      ++f2.samples;
      if (best > f2.worst) {
        f2.worst = best;
        f2.witness = describe(t, x) + " u=(" + format_double(u[0]) + ")";
      }
    }
    // F3: player I can keep c2 from rising whatever v is frozen at.
    for (const Vec& v : game.control_grid_q) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec& u : game.control_grid_p) {
        Vec y = x;
        axpy(delta, rhs(game, t, x, u, v), y);
        best = std::min(best, candidate.c2(t + delta, y) - base2);
      }
      ++f3.samples;
      if (best > f3.worst) {
        f3.worst = best;
        f3.witness = describe(t, x) + " v=(" + format_double(v[0]) + ")";
      }
    }
    // F4: some joint control conserves both components.
    {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec& u : game.control_grid_p)
        for (const Vec& v : game.control_grid_q) {
          Vec y = x;
          axpy(delta, rhs(game, t, x, u, v), y);
          best = std::min(best, std::abs(candidate.c1(t + delta, y) - base1) +
                                    std::abs(candidate.c2(t + delta, y) - base2));
        }
      ++f4.samples;
      if (best > f4.worst) {
        f4.worst = best;
        f4.witness = describe(t, x);
      }
    }
  }

  f1.pass = f1.worst <= spec.tolerance;
  f2.pass = f2.worst <= spec.tolerance;
  f3.pass = f3.worst <= spec.tolerance;
  f4.pass = f4.worst <= spec.tolerance;

  ConditionReport report;
  report.conditions = {f1, f2, f3, f4};
  report.params["candidate"] = candidate.name;
  report.params["game"] = game.name;
  report.params["step"] = format_double(spec.step);
  report.params["tolerance"] = format_double(spec.tolerance);
  report.params["samples"] = std::to_string(spec.samples);
  report.params["seed"] = std::to_string(spec.seed);
  return report;
}

double modulus_derivative(const CandidateValueFunction& candidate, double t, const Vec& x,
                          const Vec& w, const std::vector<double>& deltas) {
  if (deltas.empty()) throw ConfigError("modulus_derivative needs at least one step");
  double best = std::numeric_limits<double>::infinity();
  const double base1 = candidate.c1(t, x);
  const double base2 = candidate.c2(t, x);
  for (double d : deltas) {
    if (!(d > 0.0)) throw ConfigError("modulus_derivative steps must be positive");
    Vec y = x;
    axpy(d, w, y);
    const double quotient =
        (std::abs(candidate.c1(t + d, y) - base1) + std::abs(candidate.c2(t + d, y) - base2)) / d;
    best = std::min(best, quotient);
  }
  return best;
}

ConditionReport check_S(const ValueTable& table, long samples, unsigned seed) {
  const GameDefinition& game = table.game();
  const std::size_t nodes = table.grid().node_count();
  const int layer_count = table.layers();
  const double eps = table.eps_payoff();

  ConditionResult s1{"S1", true, 0.0, "", 0};
  ConditionResult s2{"S2", true, 0.0, "", 0};
  ConditionResult s3{"S3", true, 0.0, "", 0};
  ConditionResult s4{"S4", true, 0.0, "", 0};

  // S1 is cheap and exact: sweep every node.
  for (std::size_t node = 0; node < nodes; ++node) {
    const Vec z = table.grid().coords(node);
    const auto& set = table.at(layer_count, node);
    ++s1.samples;
    const bool ok = set.size() == 1 && set.pairs[0].j1 == game.sigma1(z) &&
                    set.pairs[0].j2 == game.sigma2(z);
    if (!ok) {
      s1.pass = false;
      s1.worst = std::max(s1.worst, 1.0);
      if (s1.witness.empty()) s1.witness = "node " + std::to_string(node);
      continue;
    }
  }

  std::uint64_t interior_pairs = 0;
  for (int k = 0; k < layer_count; ++k)
    for (std::size_t node = 0; node < nodes; ++node) interior_pairs += table.at(k, node).size();
  const bool exhaustive =
      samples >= static_cast<long>(interior_pairs) || samples <= 0;

  auto check_one = [&](int k, std::size_t node, const PayoffPair& pair,
                       const Vec& fixed_u, const Vec& fixed_v) {
    {
      const auto pm = table.punish_move(k, node, FixedRole::player1_fixed, fixed_u);
      const double excess = pm.pair.j1 - pair.j1;
      ++s2.samples;
      if (excess > s2.worst) {
        s2.worst = excess;
        s2.witness = "k=" + std::to_string(k) + " node=" + std::to_string(node);
      }
    }
    {
      const auto pm = table.punish_move(k, node, FixedRole::player2_fixed, fixed_v);
      const double excess = pm.pair.j2 - pair.j2;
      ++s3.samples;
      if (excess > s3.worst) {
        s3.worst = excess;
        s3.witness = "k=" + std::to_string(k) + " node=" + std::to_string(node);
      }
    }
    {
      ++s4.samples;
      try {
        table.consistent_move(k, node, pair);
      } catch (const NoWitnessError&) {
        s4.pass = false;
        s4.worst = std::max(s4.worst, 1.0);
        if (s4.witness.empty())
          s4.witness = "NoWitness at k=" + std::to_string(k) +
                       " node=" + std::to_string(node) + " pair=(" +
                       format_double(pair.j1) + "," + format_double(pair.j2) + ")";
      }
    }
  };

  if (exhaustive) {
    for (int k = 0; k < layer_count; ++k)
      for (std::size_t node = 0; node < nodes; ++node)
        for (const auto& pair : table.at(k, node).pairs)
          for (const Vec& u : game.control_grid_p)
            for (const Vec& v : game.control_grid_q) check_one(k, node, pair, u, v);
  } else {
    std::mt19937_64 rng(seed);
    for (long it = 0; it < samples; ++it) {
      const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(layer_count));
      const std::size_t node = rng() % nodes;
      const auto& set = table.at(k, node);
      const PayoffPair pair = set.pairs[rng() % set.size()];
      const Vec& u = game.control_grid_p[rng() % game.control_grid_p.size()];
      const Vec& v = game.control_grid_q[rng() % game.control_grid_q.size()];
      check_one(k, node, pair, u, v);
    }
  }

  s2.pass = s2.worst <= eps;
  s3.pass = s3.worst <= eps;

  ConditionReport report;
  report.conditions = {s1, s2, s3, s4};
  report.params["game"] = game.name;
  report.params["layers"] = std::to_string(layer_count);
  report.params["eps"] = format_double(eps);
  report.params["mode"] = exhaustive ? "exhaustive" : "sampled";
  report.params["seed"] = std::to_string(seed);
  return report;
}

}  // namespace cwg
