#include "cwg/value_table.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "cwg/parallel.hpp"
#include "cwg/text.hpp"

namespace cwg {

// ---------------------------------------------------------------------------
// PayoffSet
// ---------------------------------------------------------------------------

double PayoffSet::min_j2() const {
  double m = pairs.front().j2;
  for (const auto& p : pairs) m = std::min(m, p.j2);
  return m;
}

std::optional<std::size_t> PayoffSet::nearest_within(const PayoffPair& p, double tol) const {
  // Sorted by (j1, j2): only the j1-band [p.j1 - tol, p.j1 + tol] can match.
  const PayoffPair lo{p.j1 - tol, -std::numeric_limits<double>::infinity()};
  auto it = std::lower_bound(pairs.begin(), pairs.end(), lo);
  std::optional<std::size_t> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (; it != pairs.end() && it->j1 <= p.j1 + tol; ++it) {
    const double d = it->max_norm_to(p);
    if (d <= tol && d < best_dist) {
      best_dist = d;
      best = static_cast<std::size_t>(it - pairs.begin());
    }
  }
  return best;
}

double hausdorff(const PayoffSet& a, const PayoffSet& b) {
  auto one_sided = [](const PayoffSet& from, const PayoffSet& to) {
    double worst = 0.0;
    for (const auto& p : from.pairs) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& q : to.pairs) nearest = std::min(nearest, p.max_norm_to(q));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

// ---------------------------------------------------------------------------
// StateGrid
// ---------------------------------------------------------------------------

StateGrid StateGrid::make(const Vec& lo, const Vec& hi, const Vec& step) {
  if (lo.size() != hi.size() || lo.size() != step.size() || lo.empty())
    throw ConfigError("grid spec dimensions disagree");
  StateGrid g;
  g.lo = lo;
  g.step = step;
  g.count.resize(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i])) throw ConfigError("grid needs lo < hi");
    if (!(step[i] > 0.0)) throw ConfigError("grid needs step > 0");
    // round up so the requested box stays covered when step does not
    // divide the span exactly
    g.count[i] = static_cast<int>(std::ceil((hi[i] - lo[i]) / step[i] - 1e-9)) + 1;
    if (g.count[i] < 2) throw ConfigError("grid needs at least two nodes per axis");
  }
  return g;
}

StateGrid StateGrid::make_uniform(double lo, double hi, double step, int dim) {
  return make(Vec(dim, lo), Vec(dim, hi), Vec(dim, step));
}

std::size_t StateGrid::node_count() const {
  std::size_t n = 1;
  for (int c : count) n *= static_cast<std::size_t>(c);
  return n;
}

Vec StateGrid::coords(std::size_t node) const {
  Vec x(dim());
  for (std::size_t ax = dim(); ax-- > 0;) {
    const std::size_t c = static_cast<std::size_t>(count[ax]);
    x[ax] = lo[ax] + step[ax] * static_cast<double>(node % c);
    node /= c;
  }
  return x;
}

std::size_t StateGrid::snap(std::span<const double> x, bool* clamped) const {
  if (clamped) *clamped = false;
  std::size_t flat = 0;
  for (std::size_t ax = 0; ax < dim(); ++ax) {
    long idx = std::lround((x[ax] - lo[ax]) / step[ax]);
    if (idx < 0) {
      idx = 0;
      if (clamped) *clamped = true;
    }
    if (idx >= count[ax]) {
      idx = count[ax] - 1;
      if (clamped) *clamped = true;
    }
    flat = flat * static_cast<std::size_t>(count[ax]) + static_cast<std::size_t>(idx);
  }
  return flat;
}

bool StateGrid::covers(const Box& box) const {
  if (box.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i)
    if (lo[i] > box.lo[i] + 1e-12 || hi(i) < box.hi[i] - 1e-12) return false;
  return true;
}

SelectorRule selector_rule_from(const std::string& name) {
  if (name == "max_sum") return SelectorRule::max_sum;
  if (name == "max_J1" || name == "max_j1") return SelectorRule::max_j1;
  if (name == "max_J2" || name == "max_j2") return SelectorRule::max_j2;
  if (name == "min_J2" || name == "min_j2") return SelectorRule::min_j2;
  throw ConfigError("unknown selector rule '" + name + "'");
}

std::string to_string(SelectorRule rule) {
  switch (rule) {
    case SelectorRule::max_sum: return "max_sum";
    case SelectorRule::max_j1: return "max_J1";
    case SelectorRule::max_j2: return "max_J2";
    case SelectorRule::min_j2: return "min_J2";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Build
// ---------------------------------------------------------------------------

namespace {

inline PayoffPair round_to_lattice(const PayoffPair& p, double eps) {
  return PayoffPair{eps * static_cast<double>(std::llround(p.j1 / eps)),
                    eps * static_cast<double>(std::llround(p.j2 / eps))};
}

/// First index of the grid pair (u,v) attaining the outer max of the
/// player-1 floor (and symmetric for player 2); used by the nonemptiness
/// fallback.
struct FloorWitness {
  std::size_t iu = 0;
  std::size_t iv = 0;
};

}  // namespace

std::size_t ValueTable::snap_successor(int k, const Vec& z, const Vec& u, const Vec& v) const {
  const double t = layer_time(k);
  Vec x = z;
  const Vec dx = rhs(*game_, t, z, u, v);
  axpy(time_step(), dx, x);
  return grid_.snap(x);
}

ValueTable build_value_table(GameDefinition game, const ShiftConstants& constants,
                             StateGrid grid, int layer_count, double eps_payoff,
                             const BuildOptions& options) {
  if (layer_count < 1) throw ConfigError("layer count must be >= 1");
  if (!(eps_payoff > 0.0)) throw ConfigError("eps_payoff must be positive");
  if (static_cast<int>(grid.dim()) != game.state_dim)
    throw ConfigError("grid dimension does not match the game");
  if (!grid.covers(constants.bounding_box))
    throw ConfigError("grid does not cover the working box");

  ValueTable table;
  table.game_ = std::make_shared<GameDefinition>(std::move(game));
  table.grid_ = grid;
  table.layer_count_ = layer_count;
  table.eps_payoff_ = eps_payoff;
  table.layers_.resize(layer_count + 1);

  const GameDefinition& g = *table.game_;
  const std::size_t nodes = grid.node_count();
  const std::size_t nu = g.control_grid_p.size();
  const std::size_t nv = g.control_grid_q.size();
  const double eps = eps_payoff;

  // Terminal layer: exactly the payoff pair at each node, unrounded.
  auto& terminal = table.layers_[layer_count];
  terminal.resize(nodes);
  parallel_for(
      nodes,
      [&](std::size_t node) {
        const Vec z = grid.coords(node);
        terminal[node].pairs = {PayoffPair{g.sigma1(z), g.sigma2(z)}};
      },
      options.workers);

  std::vector<double> sig1(nodes), sig2(nodes);
  std::atomic<std::uint64_t> total{nodes};

  for (int k = layer_count - 1; k >= 0; --k) {
    const auto& next = table.layers_[k + 1];
    parallel_for(
        nodes,
        [&](std::size_t node) {
          sig1[node] = next[node].min_j1();
          sig2[node] = next[node].min_j2();
        },
        options.workers);

    auto& layer = table.layers_[k];
    layer.resize(nodes);
    parallel_for(
        nodes,
        [&](std::size_t node) {
          const Vec z = grid.coords(node);

          // successor node for every control pair, row-major in (u, v)
          std::vector<std::size_t> succ(nu * nv);
          for (std::size_t iu = 0; iu < nu; ++iu)
            for (std::size_t iv = 0; iv < nv; ++iv)
              succ[iu * nv + iv] = table.snap_successor(
                  k, z, g.control_grid_p[iu], g.control_grid_q[iv]);

          double rho1 = -std::numeric_limits<double>::infinity();
          FloorWitness w1;
          for (std::size_t iu = 0; iu < nu; ++iu) {
            double inner = std::numeric_limits<double>::infinity();
            for (std::size_t iv = 0; iv < nv; ++iv)
              inner = std::min(inner, sig1[succ[iu * nv + iv]]);
            if (inner > rho1) {
              rho1 = inner;
              w1.iu = iu;
            }
          }
          double rho2 = -std::numeric_limits<double>::infinity();
          FloorWitness w2;
          for (std::size_t iv = 0; iv < nv; ++iv) {
            double inner = std::numeric_limits<double>::infinity();
            for (std::size_t iu = 0; iu < nu; ++iu)
              inner = std::min(inner, sig2[succ[iu * nv + iv]]);
            if (inner > rho2) {
              rho2 = inner;
              w2.iv = iv;
            }
          }

          std::vector<std::size_t> uniq(succ);
          std::sort(uniq.begin(), uniq.end());
          uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

          auto& out = layer[node].pairs;
          std::size_t budget = 0;
          for (std::size_t s : uniq) budget += next[s].size();
          out.reserve(budget);
          for (std::size_t s : uniq)
            for (const auto& p : next[s].pairs)
              if (p.j1 >= rho1 - eps && p.j2 >= rho2 - eps)
                out.push_back(round_to_lattice(p, eps));
          std::sort(out.begin(), out.end());
          out.erase(std::unique(out.begin(), out.end()), out.end());
          // rounding can drop a marginal member below the floor
          std::erase_if(out, [&](const PayoffPair& p) {
            return p.j1 < rho1 - eps || p.j2 < rho2 - eps;
          });

          if (out.empty()) {
            // Nonemptiness fallback: any pair of the successor reached by
            // the two floor maximizers clears both floors.
            const std::size_t s = succ[w1.iu * nv + w2.iv];
            out.push_back(round_to_lattice(next[s].pairs.front(), eps));
          }
          out.shrink_to_fit();
          total.fetch_add(out.size(), std::memory_order_relaxed);
        },
        options.workers);

    if (total.load() > options.max_total_pairs)
      throw std::runtime_error("value table exceeds the pair budget (" +
                               std::to_string(options.max_total_pairs) + ")");
  }
  return table;
}

// ---------------------------------------------------------------------------
// Queries and moves
// ---------------------------------------------------------------------------

int ValueTable::layer_of(double t) const {
  const double delta = time_step();
  const long k = std::lround(t / delta);
  if (k < 0 || k > layer_count_ || std::abs(t - delta * static_cast<double>(k)) > 1e-12)
    throw ConfigError("time " + format_double(t) + " is not on the table's time grid");
  return static_cast<int>(k);
}

double ValueTable::sigma_min(int k, std::size_t node, int player) const {
  return layers_[k][node].min_component(player);
}

double ValueTable::rho(int k, std::size_t node, int player) const {
  const GameDefinition& g = *game_;
  const Vec z = grid_.coords(node);
  const std::size_t nu = g.control_grid_p.size();
  const std::size_t nv = g.control_grid_q.size();
  double best = -std::numeric_limits<double>::infinity();
  if (player == 1) {
    for (std::size_t iu = 0; iu < nu; ++iu) {
      double inner = std::numeric_limits<double>::infinity();
      for (std::size_t iv = 0; iv < nv; ++iv) {
        const std::size_t s = snap_successor(k, z, g.control_grid_p[iu], g.control_grid_q[iv]);
        inner = std::min(inner, layers_[k + 1][s].min_j1());
      }
      best = std::max(best, inner);
    }
  } else {
    for (std::size_t iv = 0; iv < nv; ++iv) {
      double inner = std::numeric_limits<double>::infinity();
      for (std::size_t iu = 0; iu < nu; ++iu) {
        const std::size_t s = snap_successor(k, z, g.control_grid_p[iu], g.control_grid_q[iv]);
        inner = std::min(inner, layers_[k + 1][s].min_j2());
      }
      best = std::max(best, inner);
    }
  }
  return best;
}

ValueTable::QueryResult ValueTable::query(double t, const Vec& x) const {
  const double horizon = game_->horizon;
  if (t < -1e-12 || t > horizon + 1e-12)
    throw ConfigError("query time outside [0, T]");
  QueryResult result;
  const std::size_t node = grid_.snap(x, &result.clamped);

  const double delta = time_step();
  const long nearest = std::lround(t / delta);
  const bool on_grid =
      nearest >= 0 && nearest <= layer_count_ &&
      std::abs(t - delta * static_cast<double>(nearest)) <= 1e-12;

  if (on_grid && nearest == layer_count_) {
    result.set = layers_[layer_count_][node];
    return result;
  }
  if (on_grid) {
    // union of the two adjacent layers, deduplicated at the eps lattice,
    // earlier layer wins a collision
    const int k = static_cast<int>(nearest);
    std::vector<PayoffPair> merged = layers_[k][node].pairs;
    for (const auto& p : layers_[k + 1][node].pairs) {
      bool dup = false;
      for (const auto& q : merged) {
        if (std::llround(p.j1 / eps_payoff_) == std::llround(q.j1 / eps_payoff_) &&
            std::llround(p.j2 / eps_payoff_) == std::llround(q.j2 / eps_payoff_)) {
          dup = true;
          break;
        }
      }
      if (!dup) merged.push_back(p);
    }
    std::sort(merged.begin(), merged.end());
    result.set.pairs = std::move(merged);
    return result;
  }
  // strictly between grid times: the later layer
  int k = static_cast<int>(std::floor(t / delta)) + 1;
  k = std::clamp(k, 0, layer_count_);
  result.set = layers_[k][node];
  return result;
}

PayoffPair ValueTable::select(double t, const Vec& x, SelectorRule rule) const {
  const PayoffSet set = query(t, x).set;
  auto score = [rule](const PayoffPair& p) {
    switch (rule) {
      case SelectorRule::max_sum: return p.j1 + p.j2;
      case SelectorRule::max_j1: return p.j1;
      case SelectorRule::max_j2: return p.j2;
      case SelectorRule::min_j2: return -p.j2;
    }
    return 0.0;
  };
  const PayoffPair* best = &set.pairs.front();
  for (const auto& p : set.pairs) {
    const double sp = score(p), sb = score(*best);
    if (sp > sb || (sp == sb && (p.j1 > best->j1 || (p.j1 == best->j1 && p.j2 > best->j2))))
      best = &p;
  }
  return *best;
}

ValueTable::ConsistentMove ValueTable::consistent_move(int k, std::size_t node,
                                                       const PayoffPair& pair) const {
  if (k < 0 || k >= layer_count_)
    throw NoWitnessError("consistent_move: no successor layer beyond k = " +
                         std::to_string(k));
  const GameDefinition& g = *game_;
  const Vec z = grid_.coords(node);
  const double tol = 2.0 * eps_payoff_;

  ConsistentMove best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const Vec& u : g.control_grid_p)
    for (const Vec& v : g.control_grid_q) {
      const std::size_t s = snap_successor(k, z, u, v);
      const auto hit = layers_[k + 1][s].nearest_within(pair, tol);
      if (!hit) continue;
      const PayoffPair& match = layers_[k + 1][s].pairs[*hit];
      const double d = match.max_norm_to(pair);
      if (d < best_dist) {
        best_dist = d;
        best = ConsistentMove{u, v, s, match};
      }
    }
  if (!std::isfinite(best_dist))
    throw NoWitnessError("consistent_move: no successor carries the pair (" +
                         format_double(pair.j1) + ", " + format_double(pair.j2) +
                         ") at layer " + std::to_string(k));
  return best;
}

ValueTable::PunishMove ValueTable::punish_move(int k, std::size_t node, FixedRole fixed,
                                               const Vec& fixed_control) const {
  if (k < 0 || k >= layer_count_)
    throw ConfigError("punish_move needs k < N");
  const GameDefinition& g = *game_;
  const Vec z = grid_.coords(node);

  const bool u_fixed = fixed == FixedRole::player1_fixed;
  const auto& responses = u_fixed ? g.control_grid_q : g.control_grid_p;
  const int component = u_fixed ? 1 : 2;

  PunishMove best;
  double best_value = std::numeric_limits<double>::infinity();
  for (const Vec& r : responses) {
    const std::size_t s = u_fixed ? snap_successor(k, z, fixed_control, r)
                                  : snap_successor(k, z, r, fixed_control);
    const double value = layers_[k + 1][s].min_component(component);
    if (value < best_value) {
      best_value = value;
      best.response = r;
      best.next_node = s;
    }
  }
  const auto& set = layers_[k + 1][best.next_node];
  for (const auto& p : set.pairs) {
    const double c = component == 1 ? p.j1 : p.j2;
    if (c == best_value) {
      best.pair = p;
      break;
    }
  }
  return best;
}

std::uint64_t ValueTable::total_pairs() const {
  std::uint64_t n = 0;
  for (const auto& layer : layers_)
    for (const auto& set : layer) n += set.size();
  return n;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

void ValueTable::validate(int workers) const {
  const GameDefinition& g = *game_;
  const std::size_t nodes = grid_.node_count();
  const std::size_t nu = g.control_grid_p.size();
  const std::size_t nv = g.control_grid_q.size();
  const double eps = eps_payoff_;

  parallel_for(
      nodes,
      [&](std::size_t node) {
        const Vec z = grid_.coords(node);
        const auto& set = layers_[layer_count_][node];
        if (set.size() != 1 || set.pairs[0].j1 != g.sigma1(z) ||
            set.pairs[0].j2 != g.sigma2(z))
          throw std::runtime_error("terminal layer differs from the payoff map");
      },
      workers);

  std::vector<double> sig1(nodes), sig2(nodes);
  for (int k = 0; k <= layer_count_; ++k) {
    const auto& layer = layers_[k];
    for (std::size_t node = 0; node < nodes; ++node) {
      const auto& set = layer[node];
      if (set.empty()) throw std::runtime_error("empty payoff set in layer " + std::to_string(k));
      for (std::size_t i = 0; i + 1 < set.size(); ++i) {
        if (!(set.pairs[i] < set.pairs[i + 1]))
          throw std::runtime_error("payoff set not sorted/deduplicated");
        for (std::size_t j = i + 1;
             j < set.size() && set.pairs[j].j1 - set.pairs[i].j1 < eps / 2; ++j)
          if (set.pairs[i].max_norm_to(set.pairs[j]) < eps / 2)
            throw std::runtime_error("payoff set members closer than eps/2");
      }
    }
  }

  for (int k = layer_count_ - 1; k >= 0; --k) {
    const auto& next = layers_[k + 1];
    parallel_for(
        nodes,
        [&](std::size_t node) {
          sig1[node] = next[node].min_j1();
          sig2[node] = next[node].min_j2();
        },
        workers);
    parallel_for(
        nodes,
        [&](std::size_t node) {
          const Vec z = grid_.coords(node);
          std::vector<std::size_t> succ(nu * nv);
          for (std::size_t iu = 0; iu < nu; ++iu)
            for (std::size_t iv = 0; iv < nv; ++iv)
              succ[iu * nv + iv] =
                  snap_successor(k, z, g.control_grid_p[iu], g.control_grid_q[iv]);
          double rho1 = -std::numeric_limits<double>::infinity();
          for (std::size_t iu = 0; iu < nu; ++iu) {
            double inner = std::numeric_limits<double>::infinity();
            for (std::size_t iv = 0; iv < nv; ++iv)
              inner = std::min(inner, sig1[succ[iu * nv + iv]]);
            rho1 = std::max(rho1, inner);
          }
          double rho2 = -std::numeric_limits<double>::infinity();
          for (std::size_t iv = 0; iv < nv; ++iv) {
            double inner = std::numeric_limits<double>::infinity();
            for (std::size_t iu = 0; iu < nu; ++iu)
              inner = std::min(inner, sig2[succ[iu * nv + iv]]);
            rho2 = std::max(rho2, inner);
          }

          for (const auto& p : layers_[k][node].pairs) {
            if (p.j1 < rho1 - eps || p.j2 < rho2 - eps)
              throw std::runtime_error("stored pair below the floor filter");
            bool contained = false;
            for (std::size_t s : succ) {
              if (next[s].nearest_within(p, eps)) {
                contained = true;
                break;
              }
            }
            if (!contained)
              throw std::runtime_error("stored pair not in the successor union");
            consistent_move(k, node, p);  // throws NoWitnessError on failure
          }
        },
        workers);
  }
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

void ValueTable::export_text(std::ostream& out) const {
  out << "cwg-table v1\n";
  out << "game " << game_->name << "\n";
  out << "state_dim " << game_->state_dim << "\n";
  out << "horizon " << format_double(game_->horizon) << "\n";
  out << "layers " << layer_count_ << "\n";
  out << "eps " << format_double(eps_payoff_) << "\n";
  out << "grid_dim " << grid_.dim() << "\n";
  for (std::size_t ax = 0; ax < grid_.dim(); ++ax)
    out << "axis " << format_double(grid_.lo[ax]) << " " << format_double(grid_.step[ax])
        << " " << grid_.count[ax] << "\n";
  auto write_controls = [&](const char* tag, const std::vector<Vec>& grid) {
    out << tag << " " << grid.size() << " " << grid.front().size();
    for (const Vec& c : grid)
      for (double e : c) out << " " << format_double(e);
    out << "\n";
  };
  write_controls("controls_p", game_->control_grid_p);
  write_controls("controls_q", game_->control_grid_q);
  for (int k = 0; k <= layer_count_; ++k) {
    const auto& layer = layers_[k];
    for (std::size_t node = 0; node < layer.size(); ++node) {
      const auto& set = layer[node];
      out << "L " << k << " " << node << " " << set.size();
      for (const auto& p : set.pairs)
        out << " " << format_double(p.j1) << " " << format_double(p.j2);
      out << "\n";
    }
  }
  out << "end\n";
}

ValueTable ValueTable::import_text(std::istream& in, GameDefinition game) {
  std::string line;
  auto next_line = [&]() -> std::string {
    if (!std::getline(in, line)) throw ConfigError("table file truncated");
    return line;
  };
  if (next_line() != "cwg-table v1") throw ConfigError("not a cwg-table v1 file");

  auto field = [&](const std::string& key) {
    const std::string l = next_line();
    if (l.rfind(key + " ", 0) != 0) throw ConfigError("expected '" + key + "' line");
    return l.substr(key.size() + 1);
  };

  const std::string name = field("game");
  if (name != game.name)
    throw ConfigError("table was built for game '" + name + "', not '" + game.name + "'");
  const int state_dim = std::stoi(field("state_dim"));
  if (state_dim != game.state_dim) throw ConfigError("state dimension mismatch");
  const double horizon = parse_number(field("horizon"));
  if (horizon != game.horizon) throw ConfigError("horizon mismatch");

  ValueTable table;
  table.layer_count_ = std::stoi(field("layers"));
  table.eps_payoff_ = parse_number(field("eps"));
  const int gdim = std::stoi(field("grid_dim"));
  table.grid_.lo.resize(gdim);
  table.grid_.step.resize(gdim);
  table.grid_.count.resize(gdim);
  for (int ax = 0; ax < gdim; ++ax) {
    std::istringstream axis(field("axis"));
    std::string a, b;
    int c;
    axis >> a >> b >> c;
    if (!axis) throw ConfigError("bad axis line");
    table.grid_.lo[ax] = parse_number(a);
    table.grid_.step[ax] = parse_number(b);
    table.grid_.count[ax] = c;
  }
  // the stored sets are only meaningful against the control grids the
  // build enumerated
  auto check_controls = [&](const char* tag, const std::vector<Vec>& grid) {
    std::istringstream rec(field(tag));
    std::size_t count, dim;
    rec >> count >> dim;
    if (!rec || count != grid.size() || grid.empty() || dim != grid.front().size())
      throw ConfigError(std::string("table was built with different ") + tag);
    for (const Vec& c : grid)
      for (double e : c) {
        std::string token;
        rec >> token;
        if (!rec || parse_number(token) != e)
          throw ConfigError(std::string("table was built with different ") + tag);
      }
  };
  check_controls("controls_p", game.control_grid_p);
  check_controls("controls_q", game.control_grid_q);
  table.game_ = std::make_shared<GameDefinition>(std::move(game));
  const std::size_t nodes = table.grid_.node_count();
  table.layers_.assign(table.layer_count_ + 1, std::vector<PayoffSet>(nodes));

  while (true) {
    const std::string l = next_line();
    if (l == "end") break;
    std::istringstream rec(l);
    std::string tag;
    int k;
    std::size_t node, count;
    rec >> tag >> k >> node >> count;
    if (!rec || tag != "L") throw ConfigError("bad layer record: " + l);
    if (k < 0 || k > table.layer_count_ || node >= nodes)
      throw ConfigError("layer record out of range: " + l);
    auto& set = table.layers_[k][node];
    set.pairs.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      std::string a, b;
      rec >> a >> b;
      if (!rec) throw ConfigError("bad pair record: " + l);
      set.pairs[i] = PayoffPair{parse_number(a), parse_number(b)};
    }
  }
  for (int k = 0; k <= table.layer_count_; ++k)
    for (std::size_t node = 0; node < nodes; ++node)
      if (table.layers_[k][node].empty())
        throw ConfigError("imported table has an empty payoff set");
  return table;
}

void ValueTable::export_csv(std::ostream& out) const {
  out << "t";
  for (std::size_t ax = 0; ax < grid_.dim(); ++ax) out << ",x" << ax + 1;
  out << ",J1,J2,set_size\n";
  for (int k = 0; k <= layer_count_; ++k) {
    const double t = layer_time(k);
    for (std::size_t node = 0; node < grid_.node_count(); ++node) {
      const Vec x = grid_.coords(node);
      const auto& set = layers_[k][node];
      for (const auto& p : set.pairs) {
        out << format_double(t);
        for (double e : x) out << "," << format_double(e);
        out << "," << format_double(p.j1) << "," << format_double(p.j2) << ","
            << set.size() << "\n";
      }
    }
  }
}

}  // namespace cwg
