// Command-line front end: builds value tables, runs control-with-guide
// simulations and deviation sweeps, and checks the viability conditions.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage/config error.

#include <array>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cwg/conditions.hpp"
#include "cwg/guide.hpp"
#include "cwg/harness.hpp"
#include "cwg/text.hpp"
#include "cwg/value_table.hpp"

namespace fs = std::filesystem;
using namespace cwg;

namespace {

GameDefinition resolve_game(const std::string& spec, int control_points) {
  if (spec == "example1") return example1_game(control_points);
  if (spec == "example2") return example2_game(control_points);
  if (fs::exists(spec)) return load_game_file(spec, control_points);
  throw ConfigError("unknown game '" + spec + "' (not a built-in name or a config file)");
}

std::vector<double> split(const std::string& text, char sep) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, sep)) out.push_back(parse_number(token));
  return out;
}

/// "lo:hi[,lo:hi...]", broadcast to `dim` when one group is given.
Box parse_box(const std::string& spec, int dim) {
  std::vector<std::pair<double, double>> groups;
  std::string group;
  std::istringstream in(spec);
  while (std::getline(in, group, ',')) {
    const auto parts = split(group, ':');
    if (parts.size() != 2) throw ConfigError("box group must be lo:hi");
    groups.emplace_back(parts[0], parts[1]);
  }
  if (groups.size() == 1) groups.assign(dim, groups.front());
  if (static_cast<int>(groups.size()) != dim)
    throw ConfigError("box spec has the wrong dimension");
  Box box;
  for (auto [lo, hi] : groups) {
    box.lo.push_back(lo);
    box.hi.push_back(hi);
  }
  return box;
}

/// "lo:hi:step[,lo:hi:step...]", broadcast like parse_box.
StateGrid parse_grid(const std::string& spec, int dim) {
  std::vector<std::array<double, 3>> groups;
  std::string group;
  std::istringstream in(spec);
  while (std::getline(in, group, ',')) {
    const auto parts = split(group, ':');
    if (parts.size() != 3) throw ConfigError("grid group must be lo:hi:step");
    groups.push_back({parts[0], parts[1], parts[2]});
  }
  if (groups.size() == 1) groups.assign(dim, groups.front());
  if (static_cast<int>(groups.size()) != dim)
    throw ConfigError("grid spec has the wrong dimension");
  Vec lo, hi, step;
  for (const auto& g : groups) {
    lo.push_back(g[0]);
    hi.push_back(g[1]);
    step.push_back(g[2]);
  }
  return StateGrid::make(lo, hi, step);
}

/// "1/32..1/256" halves from the first to the last; a comma list is taken
/// literally.
std::vector<double> parse_deltas(const std::string& spec) {
  const auto dots = spec.find("..");
  if (dots == std::string::npos) {
    auto out = split(spec, ',');
    if (out.empty()) throw ConfigError("empty delta list");
    return out;
  }
  const double first = parse_number(spec.substr(0, dots));
  const double last = parse_number(spec.substr(dots + 2));
  if (!(last <= first)) throw ConfigError("delta range must decrease");
  std::vector<double> out;
  for (double d = first; d > last * (1.0 + 1e-9); d /= 2.0) out.push_back(d);
  out.push_back(last);
  return out;
}

struct DevSpec {
  int constants = 0;
  int bang = 0;
  int bang_switches = 8;
  int random = 0;
};

/// "bang8:50,const:10,rand:5"
DevSpec parse_devs(const std::string& spec) {
  DevSpec d;
  std::string group;
  std::istringstream in(spec);
  while (std::getline(in, group, ',')) {
    const auto colon = group.find(':');
    if (colon == std::string::npos) throw ConfigError("deviation spec must be kind:count");
    const std::string kind = group.substr(0, colon);
    const int count = static_cast<int>(parse_number(group.substr(colon + 1)));
    if (kind == "const") {
      d.constants = count;
    } else if (kind.rfind("bang", 0) == 0) {
      d.bang = count;
      if (kind.size() > 4) d.bang_switches = std::stoi(kind.substr(4));
    } else if (kind == "rand") {
      d.random = count;
    } else {
      throw ConfigError("unknown deviation kind '" + kind + "'");
    }
  }
  return d;
}

Box grid_box(const StateGrid& grid) {
  Box box;
  box.lo = grid.lo;
  for (std::size_t ax = 0; ax < grid.dim(); ++ax) box.hi.push_back(grid.hi(ax));
  return box;
}

void ensure_dir(const std::string& out) {
  if (!out.empty()) fs::create_directories(out);
}

void write_text(const std::string& dir, const std::string& name, const std::string& body) {
  if (dir.empty()) return;
  write_file_atomic((fs::path(dir) / name).string(), body);
}

int report_exit(const ConditionReport& report, const std::string& out,
                const std::string& name) {
  if (!out.empty()) write_text(out, name, report.to_json());
  for (const auto& c : report.conditions)
    std::cout << (c.pass ? "pass" : "FAIL") << "  " << c.id << "  worst="
              << format_double(c.worst) << "  samples=" << c.samples
              << (c.witness.empty() ? "" : "  [" + c.witness + "]") << "\n";
  return report.all_pass() ? 0 : 1;
}

ValueTable build_or_load_table(const std::string& table_path, const GameDefinition& game,
                               int layers, const std::string& grid_spec, double eps,
                               int samples, unsigned seed) {
  if (!table_path.empty()) {
    std::ifstream in(table_path);
    if (!in) throw ConfigError("cannot open table file: " + table_path);
    return ValueTable::import_text(in, game);
  }
  if (layers <= 0 || grid_spec.empty())
    throw ConfigError("either --table or both --n and --grid are required");
  const StateGrid grid = parse_grid(grid_spec, game.state_dim);
  const ShiftConstants constants =
      estimate_constants_on_box(game, grid_box(grid), samples, seed);
  return build_value_table(game, constants, grid, layers, eps);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"control-with-guide equilibrium toolkit"};
  app.require_subcommand(1);

  std::string game_spec, grid_spec, table_path, out_dir, candidate_spec;
  std::string mode = "closed-form", selector = "max_sum", x0_spec = "0", box_spec;
  std::string deltas_spec = "1/32..1/256", devs_spec = "bang8:50,const:10", tol_spec = "auto";
  std::string delta_spec = "1/256";
  int layers = 0, control_points = 5, samples = 20000, substeps = 64, trials = 1000;
  int check_samples = 500;
  unsigned seed = 1;
  double eps = 1e-3, step = 0.01, tolerance = 0.02, residual_tol = 1e-9;
  bool no_checks = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--game", game_spec, "built-in name or config file")->required();
    cmd->add_option("--control-points", control_points, "grid points per control axis");
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--samples", samples, "constant-estimation sample budget");
  };

  CLI::App* solve = app.add_subcommand("solve", "build and persist a value table");
  add_common(solve);
  solve->add_option("--n", layers, "time layers")->required();
  solve->add_option("--grid", grid_spec, "state grid lo:hi:step per dim")->required();
  solve->add_option("--eps", eps, "payoff dedup resolution");

  CLI::App* simulate = app.add_subcommand("simulate", "run a consistent guide-vs-guide game");
  add_common(simulate);
  simulate->add_option("--mode", mode, "closed-form | multivalued");
  simulate->add_option("--delta", delta_spec, "correction step (closed-form mode)");
  simulate->add_option("--x0", x0_spec, "start state, comma separated");
  simulate->add_option("--selector", selector, "max_sum | max_J1 | max_J2 | min_J2");
  simulate->add_option("--table", table_path, "value table file (multivalued mode)");
  simulate->add_option("--n", layers, "time layers when building a table");
  simulate->add_option("--grid", grid_spec, "state grid when building a table");
  simulate->add_option("--eps", eps, "payoff dedup resolution");
  simulate->add_option("--box", box_spec, "working box for the shift constants");
  simulate->add_option("--substeps", substeps, "integration substeps per interval");
  simulate->add_flag("--no-checks", no_checks, "skip the per-step stability assertions");

  CLI::App* deviate = app.add_subcommand("deviate", "deviation sweep / equilibrium report");
  add_common(deviate);
  deviate->add_option("--mode", mode, "closed-form | multivalued");
  deviate->add_option("--deltas", deltas_spec, "decreasing diameters, a..b halving or list");
  deviate->add_option("--devs", devs_spec, "deviation families, e.g. bang8:50,const:10,rand:5");
  deviate->add_option("--x0", x0_spec, "start state(s); ; separates multiple starts");
  deviate->add_option("--selector", selector, "selector rule (multivalued mode)");
  deviate->add_option("--table", table_path, "value table file (multivalued mode)");
  deviate->add_option("--n", layers, "time layers when building a table");
  deviate->add_option("--grid", grid_spec, "state grid when building a table");
  deviate->add_option("--eps", eps, "payoff dedup resolution");
  deviate->add_option("--box", box_spec, "working box for the shift constants");
  deviate->add_option("--substeps", substeps, "integration substeps per interval");
  deviate->add_option("--tol", tol_spec, "tolerance: a number or 'auto'");
  deviate->add_flag("--no-checks", no_checks, "skip the per-step stability assertions");

  CLI::App* check_f = app.add_subcommand("check-f", "sampled viability conditions F1-F4");
  add_common(check_f);
  check_f->add_option("--candidate", candidate_spec, "registered candidate name")->required();
  check_f->add_option("--delta", step, "one-step surrogate step");
  check_f->add_option("--eps", tolerance, "condition tolerance");
  check_f->add_option("--positions", check_samples, "sampled positions");
  check_f->add_option("--box", box_spec, "state sampling box");

  CLI::App* check_s = app.add_subcommand("check-s", "table-side conditions S1-S4");
  add_common(check_s);
  check_s->add_option("--table", table_path, "value table file");
  check_s->add_option("--n", layers, "time layers when building a table");
  check_s->add_option("--grid", grid_spec, "state grid when building a table");
  check_s->add_option("--eps", eps, "payoff dedup resolution");
  check_s->add_option("--positions", check_samples, "sample budget (0 = exhaustive)");

  CLI::App* hj = app.add_subcommand("hj-residual", "Hamilton-Jacobi system residuals");
  add_common(hj);
  hj->add_option("--candidate", candidate_spec, "registered candidate name")->required();
  hj->add_option("--positions", check_samples, "sampled positions");
  hj->add_option("--tol", residual_tol, "pass threshold on |r|");
  hj->add_option("--box", box_spec, "state sampling box");

  CLI::App* lemma1 = app.add_subcommand("lemma1", "extremal-shift gap estimate suite");
  add_common(lemma1);
  lemma1->add_option("--trials", trials, "randomized trials per case");
  lemma1->add_option("--box", box_spec, "working box for the shift constants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    ensure_dir(out_dir);

    if (solve->parsed()) {
      const GameDefinition game = resolve_game(game_spec, control_points);
      const auto start = std::chrono::steady_clock::now();
      const StateGrid grid = parse_grid(grid_spec, game.state_dim);
      const ShiftConstants constants =
          estimate_constants_on_box(game, grid_box(grid), samples, seed);
      const ValueTable table = build_value_table(game, constants, grid, layers, eps);
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
      std::ostringstream text, csv;
      table.export_text(text);
      table.export_csv(csv);
      const std::string dir = out_dir.empty() ? "." : out_dir;
      ensure_dir(dir);
      write_text(dir, "table.txt", text.str());
      write_text(dir, "table.csv", csv.str());
      std::cout << "table: layers=" << table.layers() << " nodes=" << grid.node_count()
                << " pairs=" << table.total_pairs() << " K=" << format_double(constants.speed_bound)
                << " L=" << format_double(constants.lip_x) << " built in " << ms << " ms\n"
                << "wrote " << dir << "/table.txt\n";
      return 0;
    }

    if (simulate->parsed() || deviate->parsed()) {
      const GameDefinition game = resolve_game(game_spec, control_points);

      std::vector<Vec> starts;
      {
        std::string group;
        std::istringstream in(x0_spec);
        while (std::getline(in, group, ';')) starts.push_back(split(group, ','));
      }
      for (const auto& s : starts)
        if (static_cast<int>(s.size()) != game.state_dim)
          throw ConfigError("--x0 has the wrong dimension");

      RunOptions options;
      options.substeps = substeps;
      options.check_stability = !no_checks;
      options.check_kappa = !no_checks;

      StrategyHandle s1, s2;
      std::shared_ptr<const ValueTable> table;
      if (mode == "closed-form") {
        auto shared_game = std::make_shared<const GameDefinition>(game);
        const Box box = box_spec.empty() ? parse_box("-1:1", game.state_dim)
                                         : parse_box(box_spec, game.state_dim);
        const ShiftConstants constants = estimate_constants(game, box, samples, seed);
        const ClosedFormValue value = example1_closed_form(shared_game, substeps);
        s1 = make_closed_form_strategy(Role::player1, shared_game, value, constants);
        s2 = make_closed_form_strategy(Role::player2, shared_game, value, constants);
      } else if (mode == "multivalued") {
        table = std::make_shared<const ValueTable>(
            build_or_load_table(table_path, game, layers, grid_spec, eps, samples, seed));
        const ShiftConstants constants = estimate_constants_on_box(
            game, grid_box(table->grid()), samples, seed);
        const SelectorRule rule = selector_rule_from(selector);
        s1 = make_table_strategy(Role::player1, table, rule, constants);
        s2 = make_table_strategy(Role::player2, table, rule, constants);
      } else {
        throw ConfigError("unknown mode '" + mode + "'");
      }

      if (simulate->parsed()) {
        Partition partition =
            mode == "multivalued"
                ? Partition::uniform(0.0, game.horizon, table->layers())
                : Partition::uniform(
                      0.0, game.horizon,
                      std::max(1, static_cast<int>(std::lround(
                                      game.horizon / parse_number(delta_spec)))));
        const RunResult run =
            run_consistent(game, s1, s2, starts.front(), partition, options);
        std::ostringstream trace;
        run.write_trace_csv(trace);
        write_text(out_dir, "trace.csv", trace.str());
        std::ostringstream traj;
        run.trajectory.write_csv(traj);
        write_text(out_dir, "trajectory.csv", traj.str());
        std::cout << "payoff: (" << format_double(run.payoff.j1) << ", "
                  << format_double(run.payoff.j2) << ")  max_anchor_gap="
                  << format_double(run.max_anchor_gap)
                  << "  kappa=" << format_double(run.kappa_bound) << "\n";
        return 0;
      }

      const DevSpec devs = parse_devs(devs_spec);
      // multivalued sweeps are locked to the table's correction grid
      const std::vector<double> deltas =
          mode == "multivalued" ? std::vector<double>{game.horizon / table->layers()}
                                : parse_deltas(deltas_spec);
      ToleranceRule rule;
      if (tol_spec == "auto") {
        rule = default_tolerance_rule(game, s1.constants);
      } else {
        const double fixed = parse_number(tol_spec);
        rule = [fixed](double) { return fixed; };
      }
      const EquilibriumReport report = equilibrium_report(
          game, s1, s2, starts, deltas, devs.constants, devs.bang, devs.random, rule, seed,
          options);
      std::ostringstream json, csv;
      report.write_json(json);
      report.write_csv(csv);
      write_text(out_dir, "report.json", json.str());
      write_text(out_dir, "report.csv", csv.str());
      std::cout << csv.str();
      std::cout << (report.all_pass() ? "all rows pass\n" : "some rows FAIL\n");
      return report.all_pass() ? 0 : 1;
    }

    if (check_f->parsed()) {
      const GameDefinition game = resolve_game(game_spec, control_points);
      const CandidateValueFunction candidate = candidate_for(game, candidate_spec);
      SampleSpec spec;
      spec.positions = box_spec.empty() ? parse_box("-1:1", game.state_dim)
                                        : parse_box(box_spec, game.state_dim);
      spec.t_lo = 0.0;
      spec.t_hi = game.horizon;
      spec.samples = check_samples;
      spec.step = step;
      spec.tolerance = tolerance;
      spec.seed = seed;
      return report_exit(check_F(candidate, game, spec), out_dir, "check_f.json");
    }

    if (check_s->parsed()) {
      const GameDefinition game = resolve_game(game_spec, control_points);
      const ValueTable table =
          build_or_load_table(table_path, game, layers, grid_spec, eps, samples, seed);
      return report_exit(check_S(table, check_samples, seed), out_dir, "check_s.json");
    }

    if (hj->parsed()) {
      const GameDefinition game = resolve_game(game_spec, control_points);
      const CandidateValueFunction candidate = candidate_for(game, candidate_spec);
      const Box box = box_spec.empty() ? parse_box("-1:1", game.state_dim)
                                       : parse_box(box_spec, game.state_dim);
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      double worst1 = 0.0, worst2 = 0.0;
      HjResidual last;
      for (int i = 0; i < check_samples; ++i) {
        const double t = unit(rng) * game.horizon * 0.999;
        Vec x(box.dim());
        for (std::size_t j = 0; j < x.size(); ++j)
          x[j] = box.lo[j] + (box.hi[j] - box.lo[j]) * unit(rng);
        if (!candidate.smooth_at(t, x)) continue;
        last = hj_residual(candidate, game, t, x);
        worst1 = std::max(worst1, std::abs(last.r1));
        worst2 = std::max(worst2, std::abs(last.r2));
      }
      std::cout << "max |r1| = " << format_double(worst1)
                << ", max |r2| = " << format_double(worst2) << "  (u_hat=";
      for (double e : last.u_hat) std::cout << format_double(e) << " ";
      std::cout << ", v_hat=";
      for (double e : last.v_hat) std::cout << format_double(e) << " ";
      std::cout << ")\n";
      const bool pass = worst1 <= residual_tol && worst2 <= residual_tol;
      std::cout << (pass ? "residuals vanish\n" : "residuals do NOT vanish\n");
      return pass ? 0 : 1;
    }

    if (lemma1->parsed()) {
      const GameDefinition game = resolve_game(game_spec, control_points);
      const Box box = box_spec.empty() ? parse_box("-1:1", game.state_dim)
                                       : parse_box(box_spec, game.state_dim);
      const ShiftConstants constants = estimate_constants(game, box, samples, seed);
      return report_exit(lemma1_check(game, constants, trials, seed), out_dir,
                         "lemma1.json");
    }

    std::cerr << "no subcommand\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  }
}
