#include "cwg/game.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cwg/text.hpp"

namespace cwg {

Vec rhs(const GameDefinition& game, double t, const Vec& x, const Vec& u, const Vec& v) {
  Vec f = game.f_eval(t, x, u);
  const Vec g = game.g_eval(t, x, v);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] += g[i];
  return f;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (lo == hi) return {lo};
  if (count < 2)
    throw ConfigError("control grid resolution < 2 on a non-degenerate axis");
  std::vector<double> pts(count);
  for (int i = 0; i < count; ++i)
    pts[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  pts.front() = lo;
  pts.back() = hi;
  return pts;
}

std::vector<Vec> product_grid(const std::vector<std::vector<double>>& axes) {
  std::vector<Vec> out;
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  out.reserve(total);
  Vec point(axes.size());
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (std::size_t ax = axes.size(); ax-- > 0;) {
      point[ax] = axes[ax][rest % axes[ax].size()];
      rest /= axes[ax].size();
    }
    out.push_back(point);
  }
  return out;
}

GameDefinition example1_game(int control_points) {
  GameDefinition g;
  g.name = "example1";
  g.state_dim = 2;
  g.horizon = 1.0;
  const auto pts = linspace(-1.0, 1.0, control_points);
  g.control_grid_p = product_grid({pts});
  g.control_grid_q = product_grid({pts});
  g.f_eval = [](double, const Vec&, const Vec& u) { return Vec{0.0, 2.0 * u[0]}; };
  g.g_eval = [](double, const Vec&, const Vec& v) { return Vec{-v[0], v[0]}; };
  g.sigma1 = [](const Vec& x) { return x[0]; };
  g.sigma2 = [](const Vec& x) { return x[1]; };
  return g;
}

GameDefinition example2_game(int control_points) {
  GameDefinition g;
  g.name = "example2";
  g.state_dim = 1;
  g.horizon = 1.0;
  g.control_grid_p = product_grid({linspace(-1.0, 1.0, control_points)});
  g.control_grid_q = {Vec{0.0}};  // fictitious player
  g.f_eval = [](double, const Vec&, const Vec& u) { return Vec{u[0]}; };
  g.g_eval = [](double, const Vec&, const Vec&) { return Vec{0.0}; };
  g.sigma1 = [](const Vec& x) { return std::abs(x[0]); };
  g.sigma2 = [](const Vec& x) { return x[0]; };
  return g;
}

namespace {

struct Matrix {
  int rows = 0, cols = 0;
  std::vector<double> a;  // row-major
  Vec mul(const Vec& x) const {
    Vec y(rows, 0.0);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) y[i] += a[i * cols + j] * x[j];
    return y;
  }
};

Matrix parse_matrix(const IniSection& sec, const std::string& key, int rows, int cols) {
  const auto values = parse_number_list(sec.get(key));
  if (static_cast<int>(values.size()) != rows * cols)
    throw ConfigError("matrix '" + key + "' must have " + std::to_string(rows * cols) +
                      " entries, got " + std::to_string(values.size()));
  return Matrix{rows, cols, values};
}

std::vector<Vec> parse_control_box(const IniSection& sec, const std::string& box_key,
                                   const std::string& points_key, int default_points) {
  const auto bounds = parse_number_list(sec.get(box_key));
  if (bounds.empty() || bounds.size() % 2 != 0)
    throw ConfigError("'" + box_key + "' must list lo hi pairs");
  int points = default_points;
  if (sec.has(points_key)) points = static_cast<int>(parse_number(sec.get(points_key)));
  std::vector<std::vector<double>> axes;
  for (std::size_t i = 0; i < bounds.size(); i += 2) {
    if (bounds[i] > bounds[i + 1])
      throw ConfigError("'" + box_key + "' has lo > hi");
    axes.push_back(linspace(bounds[i], bounds[i + 1], points));
  }
  return product_grid(axes);
}

std::function<double(const Vec&)> parse_payoff(const IniSection& sec,
                                               const std::string& section_name, int n) {
  reject_unknown_keys(section_name, sec, {"kind", "c", "d"});
  const std::string kind = sec.get("kind");
  Vec c = parse_number_list(sec.get("c"));
  if (static_cast<int>(c.size()) != n)
    throw ConfigError("[" + section_name + "] c must have " + std::to_string(n) + " entries");
  const double d = sec.has("d") ? parse_number(sec.get("d")) : 0.0;
  if (kind == "linear")
    return [c, d](const Vec& x) { return dot(c, x) + d; };
  if (kind == "abs_linear")
    return [c, d](const Vec& x) { return std::abs(dot(c, x)) + d; };
  throw ConfigError("[" + section_name + "] unknown payoff kind '" + kind + "'");
}

}  // namespace

GameDefinition load_game(const std::string& config_text, int default_control_points) {
  const auto doc = parse_ini(config_text);
  const auto game_it = doc.find("game");
  if (game_it == doc.end()) throw ConfigError("missing [game] section");
  const IniSection& game_sec = game_it->second;

  if (game_sec.has("name") && !game_sec.has("kind")) {
    reject_unknown_keys("game", game_sec, {"name", "control_points"});
    if (doc.size() != 1) throw ConfigError("built-in game config allows only [game]");
    const std::string name = game_sec.get("name");
    int points = default_control_points;
    if (game_sec.has("control_points"))
      points = static_cast<int>(parse_number(game_sec.get("control_points")));
    if (name == "example1") return example1_game(points);
    if (name == "example2") return example2_game(points);
    throw ConfigError("unknown game name '" + name + "'");
  }

  reject_unknown_keys("game", game_sec, {"name", "kind", "T", "n"});
  if (game_sec.get("kind") != "affine")
    throw ConfigError("unknown game kind '" + game_sec.get("kind") + "'");
  for (const auto& [section, _] : doc)
    if (section != "game" && section != "dynamics" && section != "payoff1" &&
        section != "payoff2")
      throw ConfigError("unknown section [" + section + "]");

  GameDefinition g;
  g.name = game_sec.get_or("name", "affine");
  g.horizon = parse_number(game_sec.get("T"));
  if (!(g.horizon > 0.0)) throw ConfigError("horizon T must be positive");
  g.state_dim = static_cast<int>(parse_number(game_sec.get("n")));
  if (g.state_dim < 1) throw ConfigError("state dimension n must be >= 1");
  const int n = g.state_dim;

  const auto dyn_it = doc.find("dynamics");
  if (dyn_it == doc.end()) throw ConfigError("missing [dynamics] section");
  const IniSection& dyn = dyn_it->second;
  reject_unknown_keys("dynamics", dyn,
                      {"A", "b", "B", "C", "u_box", "v_box", "u_points", "v_points"});

  g.control_grid_p = parse_control_box(dyn, "u_box", "u_points", default_control_points);
  g.control_grid_q = parse_control_box(dyn, "v_box", "v_points", default_control_points);
  const int m = static_cast<int>(g.control_grid_p.front().size());
  const int q = static_cast<int>(g.control_grid_q.front().size());

  const Matrix A = parse_matrix(dyn, "A", n, n);
  const Matrix B = parse_matrix(dyn, "B", n, m);
  const Matrix C = parse_matrix(dyn, "C", n, q);
  Vec b = parse_number_list(dyn.get("b"));
  if (static_cast<int>(b.size()) != n) throw ConfigError("b must have n entries");

  g.f_eval = [A, B, b](double, const Vec& x, const Vec& u) {
    Vec y = A.mul(x);
    const Vec bu = B.mul(u);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += b[i] + bu[i];
    return y;
  };
  g.g_eval = [C](double, const Vec&, const Vec& v) { return C.mul(v); };

  const auto p1 = doc.find("payoff1");
  const auto p2 = doc.find("payoff2");
  if (p1 == doc.end() || p2 == doc.end())
    throw ConfigError("affine game needs [payoff1] and [payoff2]");
  g.sigma1 = parse_payoff(p1->second, "payoff1", n);
  g.sigma2 = parse_payoff(p2->second, "payoff2", n);
  return g;
}

GameDefinition load_game_file(const std::string& path, int default_control_points) {
  return load_game(read_file(path), default_control_points);
}

GameDefinition random_affine_game(int state_dim, unsigned seed, int control_points) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int n = state_dim;

  Matrix A{n, n, std::vector<double>(static_cast<std::size_t>(n) * n)};
  for (auto& a : A.a) a = 0.8 * unit(rng) / n;
  Vec b(n);
  for (auto& e : b) e = 0.5 * unit(rng);
  Matrix B{n, 1, std::vector<double>(n)};
  for (auto& e : B.a) e = unit(rng);
  Matrix C{n, 1, std::vector<double>(n)};
  for (auto& e : C.a) e = unit(rng);

  GameDefinition g;
  g.name = "random_affine_" + std::to_string(seed);
  g.state_dim = n;
  g.horizon = 1.0;
  const auto pts = linspace(-1.0, 1.0, control_points);
  g.control_grid_p = product_grid({pts});
  g.control_grid_q = product_grid({pts});
  g.f_eval = [A, B, b](double, const Vec& x, const Vec& u) {
    Vec y = A.mul(x);
    const Vec bu = B.mul(u);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += b[i] + bu[i];
    return y;
  };
  g.g_eval = [C](double, const Vec&, const Vec& v) { return C.mul(v); };
  Vec c1(n, 0.0), c2(n, 0.0);
  c1[0] = 1.0;
  c2[n - 1] = 1.0;
  g.sigma1 = [c1](const Vec& x) { return dot(c1, x); };
  g.sigma2 = [c2](const Vec& x) { return dot(c2, x); };
  return g;
}

// ---------------------------------------------------------------------------
// Constants estimation
// ---------------------------------------------------------------------------

double ShiftConstants::phi_star(double delta) const {
  if (delta <= 0.0 || phi_star_tab.empty()) return 0.0;
  const auto it = std::lower_bound(delta_knots.begin(), delta_knots.end(), delta);
  const std::size_t idx =
      it == delta_knots.end() ? delta_knots.size() - 1 : static_cast<std::size_t>(it - delta_knots.begin());
  return phi_star_tab[idx];
}

double ShiftConstants::phi_prime(double delta) const {
  if (delta <= 0.0 || phi_prime_tab.empty()) return 0.0;
  const auto it = std::lower_bound(delta_knots.begin(), delta_knots.end(), delta);
  const std::size_t idx =
      it == delta_knots.end() ? delta_knots.size() - 1 : static_cast<std::size_t>(it - delta_knots.begin());
  return phi_prime_tab[idx];
}

double ShiftConstants::phi(double delta) const {
  return 4.0 * phi_star(delta) * diameter + 4.0 * speed_bound * speed_bound * delta;
}

double ShiftConstants::kappa(double delta, double elapsed) const {
  return std::sqrt((1.0 + elapsed) * phi(delta) * std::exp(beta * elapsed));
}

namespace {

struct Sampler {
  const GameDefinition& game;
  std::mt19937_64 rng;

  explicit Sampler(const GameDefinition& g, unsigned seed) : game(g), rng(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }

  Vec point_in(const Box& box) {
    Vec x(box.dim());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = uniform(box.lo[i], box.hi[i]);
    return x;
  }

  const Vec& any_u() {
    return game.control_grid_p[rng() % game.control_grid_p.size()];
  }
  const Vec& any_v() {
    return game.control_grid_q[rng() % game.control_grid_q.size()];
  }
};

void check_finite(const Vec& y) {
  for (double e : y)
    if (!std::isfinite(e)) throw std::runtime_error("non-finite dynamics sample");
}

/// Corner points of a box (2^n of them; n is small here).
std::vector<Vec> corners(const Box& box) {
  const std::size_t n = box.dim();
  std::vector<Vec> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1 ? box.hi[i] : box.lo[i];
    out.push_back(std::move(x));
  }
  return out;
}

/// Max speed ||f+g|| over deterministic corners plus random samples.
double max_speed(const GameDefinition& game, const Box& box, int samples, Sampler& s) {
  double best = 0.0;
  const std::vector<double> times = {0.0, 0.5 * game.horizon, game.horizon};
  for (const Vec& x : corners(box))
    for (double t : times)
      for (const Vec& u : game.control_grid_p)
        for (const Vec& v : game.control_grid_q) {
          const Vec y = rhs(game, t, x, u, v);
          check_finite(y);
          best = std::max(best, norm(y));
        }
  for (int i = 0; i < samples; ++i) {
    const Vec x = s.point_in(box);
    const double t = s.uniform(0.0, game.horizon);
    const Vec y = rhs(game, t, x, s.any_u(), s.any_v());
    check_finite(y);
    best = std::max(best, norm(y));
  }
  return best;
}

ShiftConstants estimate_on(const GameDefinition& game, const Box& working_box,
                           int sample_count, Sampler& s) {
  ShiftConstants c;
  c.bounding_box = working_box;
  c.diameter = working_box.diameter();

  const int samples = std::max(sample_count, 1);
  c.speed_bound = 1.05 * max_speed(game, working_box, samples, s);
  c.speed_bound_euler = c.speed_bound;

  // Lipschitz constant in x: difference quotients along coordinate axes at
  // corners plus random chords.
  double lip = 0.0;
  auto probe = [&](double t, const Vec& xa, const Vec& xb, const Vec& u, const Vec& v) {
    const double gap = dist(xa, xb);
    if (gap <= 0.0) return;
    const Vec ya = rhs(game, t, xa, u, v);
    const Vec yb = rhs(game, t, xb, u, v);
    lip = std::max(lip, dist(ya, yb) / gap);
  };
  for (const Vec& x : corners(working_box))
    for (std::size_t i = 0; i < working_box.dim(); ++i) {
      if (working_box.hi[i] == working_box.lo[i]) continue;
      Vec xb = x;
      xb[i] = x[i] == working_box.lo[i] ? working_box.hi[i] : working_box.lo[i];
      for (const Vec& u : game.control_grid_p)
        for (const Vec& v : game.control_grid_q) probe(0.0, x, xb, u, v);
    }
  for (int i = 0; i < samples; ++i) {
    const Vec xa = s.point_in(working_box);
    const Vec xb = s.point_in(working_box);
    probe(s.uniform(0.0, game.horizon), xa, xb, s.any_u(), s.any_v());
  }
  c.lip_x = 1.05 * lip;
  c.lip_x_euler = c.lip_x;
  c.beta = 2.0 * c.lip_x;

  // Moduli tabulated on a uniform knot grid over [0, T].
  const int knots = 32;
  c.delta_knots.resize(knots + 1);
  c.phi_star_tab.assign(knots + 1, 0.0);
  c.phi_prime_tab.assign(knots + 1, 0.0);
  for (int j = 0; j <= knots; ++j)
    c.delta_knots[j] = game.horizon * static_cast<double>(j) / knots;

  const int per_knot = std::max(8, samples / (4 * knots));
  for (int j = 1; j <= knots; ++j) {
    const double delta = c.delta_knots[j];
    double star = 0.0, prime = 0.0;
    for (int i = 0; i < per_knot; ++i) {
      const Vec x = s.point_in(working_box);
      const Vec& u = s.any_u();
      const Vec& v = s.any_v();
      const double t1 = s.uniform(0.0, game.horizon);
      const double t2 =
          std::clamp(t1 + s.uniform(-delta, delta), 0.0, game.horizon);
      // time-only variation for phi_star
      const Vec y1 = rhs(game, t1, x, u, v);
      const Vec y2 = rhs(game, t2, x, u, v);
      star = std::max(star, dist(y1, y2));
      // joint time/state variation for phi_prime, ||dx|| <= K' * delta
      Vec x2 = x;
      const double radius = s.uniform(0.0, c.speed_bound_euler * delta);
      Vec dir(x.size());
      double dn = 0.0;
      for (auto& e : dir) {
        e = s.uniform(-1.0, 1.0);
        dn += e * e;
      }
      dn = std::sqrt(dn);
      if (dn > 0.0)
        for (std::size_t k = 0; k < x2.size(); ++k) {
          x2[k] = std::clamp(x[k] + radius * dir[k] / dn, working_box.lo[k],
                             working_box.hi[k]);
        }
      const Vec fa = game.f_eval(t1, x, u);
      const Vec fb = game.f_eval(t2, x2, u);
      const Vec ga = game.g_eval(t1, x, v);
      const Vec gb = game.g_eval(t2, x2, v);
      prime = std::max(prime, dist(fa, fb) + dist(ga, gb));
    }
    c.phi_star_tab[j] = std::max(c.phi_star_tab[j - 1], 1.05 * star);
    c.phi_prime_tab[j] = std::max(c.phi_prime_tab[j - 1], 1.05 * prime);
  }
  return c;
}

}  // namespace

ShiftConstants estimate_constants(const GameDefinition& game, const Box& initial_box,
                                  int sample_count, unsigned seed) {
  if (initial_box.empty()) throw ConfigError("empty initial box");
  if (static_cast<int>(initial_box.dim()) != game.state_dim)
    throw ConfigError("initial box dimension mismatch");
  Sampler s(game, seed);
  const int pass_samples = std::max(sample_count, 1);

  // First-pass speed bound on the initial box, then one iteration on the
  // inflated box; only an upper bound on the reachable set is needed.
  const double khat1 = 1.1 * max_speed(game, initial_box, pass_samples, s);
  const Box once = initial_box.inflated(khat1 * game.horizon);
  const double khat2 = 1.1 * max_speed(game, once, pass_samples, s);
  const Box working = initial_box.inflated(khat2 * game.horizon);

  return estimate_on(game, working, sample_count, s);
}

ShiftConstants estimate_constants_on_box(const GameDefinition& game, const Box& working_box,
                                         int sample_count, unsigned seed) {
  if (working_box.empty()) throw ConfigError("empty working box");
  if (static_cast<int>(working_box.dim()) != game.state_dim)
    throw ConfigError("working box dimension mismatch");
  Sampler s(game, seed);
  return estimate_on(game, working_box, sample_count, s);
}

}  // namespace cwg
