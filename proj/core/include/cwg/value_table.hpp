#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cwg/game.hpp"
#include "cwg/types.hpp"

namespace cwg {

struct PayoffPair {
  double j1 = 0.0;
  double j2 = 0.0;

  friend bool operator==(const PayoffPair&, const PayoffPair&) = default;
  friend bool operator<(const PayoffPair& a, const PayoffPair& b) {
    return a.j1 != b.j1 ? a.j1 < b.j1 : a.j2 < b.j2;
  }
  double max_norm_to(const PayoffPair& o) const {
    const double d1 = j1 > o.j1 ? j1 - o.j1 : o.j1 - j1;
    const double d2 = j2 > o.j2 ? j2 - o.j2 : o.j2 - j2;
    return d1 > d2 ? d1 : d2;
  }
};

/// Finite nonempty payoff-pair set, kept sorted by (j1, j2).
struct PayoffSet {
  std::vector<PayoffPair> pairs;

  bool empty() const { return pairs.empty(); }
  std::size_t size() const { return pairs.size(); }
  double min_j1() const { return pairs.front().j1; }
  double min_j2() const;
  double min_component(int player) const { return player == 1 ? min_j1() : min_j2(); }

  /// Index of a member within `tol` (max-norm) of `p` minimizing the
  /// distance, if any.
  std::optional<std::size_t> nearest_within(const PayoffPair& p, double tol) const;
};

/// Hausdorff distance between two payoff sets in the max-norm.
double hausdorff(const PayoffSet& a, const PayoffSet& b);

/// Uniform rectangular node lattice covering the working box.
struct StateGrid {
  Vec lo;
  Vec step;
  std::vector<int> count;  ///< nodes per dimension

  static StateGrid make(const Vec& lo, const Vec& hi, const Vec& step);
  static StateGrid make_uniform(double lo, double hi, double step, int dim);

  std::size_t dim() const { return lo.size(); }
  std::size_t node_count() const;
  double hi(std::size_t axis) const { return lo[axis] + step[axis] * (count[axis] - 1); }
  Vec coords(std::size_t node) const;

  /// Nearest node, clamped to the grid bounds. Exact half-way points round
  /// away from the lower edge (lround semantics).
  std::size_t snap(std::span<const double> x, bool* clamped = nullptr) const;

  bool covers(const Box& box) const;
};

enum class SelectorRule { max_sum, max_j1, max_j2, min_j2 };
SelectorRule selector_rule_from(const std::string& name);
std::string to_string(SelectorRule rule);

/// Which player's control is held fixed in a punishment lookup.
enum class FixedRole { player1_fixed, player2_fixed };

struct BuildOptions {
  std::uint64_t max_total_pairs = 64 * 1000 * 1000;
  int workers = 0;  ///< 0 = CWG_WORKERS env or hardware
};

/// Multivalued value function on the uniform time grid t_k = k*T/N,
/// built by inverse induction over snapped Euler successors. Layer N holds
/// exactly {(sigma1(z), sigma2(z))} per node; every earlier layer keeps the
/// successor-union members that survive the max-min floor filter.
class ValueTable {
 public:
  const GameDefinition& game() const { return *game_; }
  std::shared_ptr<const GameDefinition> game_ptr() const { return game_; }
  const StateGrid& grid() const { return grid_; }
  int layers() const { return layer_count_; }  ///< N
  double time_step() const { return game_->horizon / layer_count_; }
  double eps_payoff() const { return eps_payoff_; }
  double layer_time(int k) const { return time_step() * k; }

  /// Layer index for an on-grid time (within 1e-12); throws otherwise.
  int layer_of(double t) const;

  const PayoffSet& at(int k, std::size_t node) const { return layers_[k][node]; }

  /// Min of component `player` over the stored set (sigma of the proofs).
  double sigma_min(int k, std::size_t node, int player) const;

  /// Max-min floor: player 1 maximizes over P of the min over Q of
  /// sigma_min at the snapped successor (roles swapped for player 2).
  double rho(int k, std::size_t node, int player) const;

  struct QueryResult {
    PayoffSet set;
    bool clamped = false;
  };

  /// Time rule: t strictly inside (t_{k-1}, t_k) reads layer k; t equal to
  /// a grid time t_k < T reads the union of layers k and k+1; t = T reads
  /// layer N. x snaps to the nearest node.
  QueryResult query(double t, const Vec& x) const;

  /// Extremal pair of query(t,x) under the rule; ties broken by larger j1,
  /// then larger j2.
  PayoffPair select(double t, const Vec& x, SelectorRule rule) const;

  struct ConsistentMove {
    Vec u, v;
    std::size_t next_node = 0;
    PayoffPair pair;  ///< successor member matched to the requested pair
  };

  /// Control pair whose snapped successor carries `pair` within
  /// 2*eps_payoff (max-norm); minimizes the match distance, ties by
  /// enumeration order. Throws NoWitnessError if nothing matches.
  ConsistentMove consistent_move(int k, std::size_t node, const PayoffPair& pair) const;

  struct PunishMove {
    Vec response;
    std::size_t next_node = 0;
    PayoffPair pair;  ///< successor member attaining the minimized component
  };

  /// With player 1's control fixed: the response v minimizing sigma_min of
  /// the successor in component 1 (and the pair attaining it). With player
  /// 2's fixed: response u minimizing component 2. Ties by enumeration order.
  PunishMove punish_move(int k, std::size_t node, FixedRole fixed,
                         const Vec& fixed_control) const;

  std::uint64_t total_pairs() const;

  /// Structural and dynamic-programming invariants; throws on violation.
  /// Checks: terminal layer exactness, nonemptiness, floor filter
  /// soundness, containment in the recomputed successor union, and
  /// consistent_move success for every stored pair.
  void validate(int workers = 0) const;

  /// Text export; import round-trips bit-exactly.
  void export_text(std::ostream& out) const;
  static ValueTable import_text(std::istream& in, GameDefinition game);

  /// CSV rows t,x...,J1,J2,set_size for plotting.
  void export_csv(std::ostream& out) const;

  friend ValueTable build_value_table(GameDefinition game, const ShiftConstants& constants,
                                      StateGrid grid, int layer_count, double eps_payoff,
                                      const BuildOptions& options);

 private:
  ValueTable() = default;

  std::size_t snap_successor(int k, const Vec& z, const Vec& u, const Vec& v) const;

  std::shared_ptr<const GameDefinition> game_;
  StateGrid grid_;
  int layer_count_ = 0;
  double eps_payoff_ = 0.0;
  std::vector<std::vector<PayoffSet>> layers_;  ///< [k][node]
};

/// Inverse induction build. The grid must cover the constants' working box.
ValueTable build_value_table(GameDefinition game, const ShiftConstants& constants,
                             StateGrid grid, int layer_count, double eps_payoff,
                             const BuildOptions& options = {});

}  // namespace cwg
