#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cwg/conditions.hpp"
#include "cwg/text.hpp"

using namespace cwg;

namespace {

ShiftConstants box_constants(const StateGrid& grid) {
  ShiftConstants c;
  c.bounding_box.lo = grid.lo;
  for (std::size_t ax = 0; ax < grid.dim(); ++ax)
    c.bounding_box.hi.push_back(grid.hi(ax));
  c.diameter = c.bounding_box.diameter();
  return c;
}

}  // namespace

TEST_CASE("hamiltonians of example1 match the closed forms") {
  const GameDefinition g = example1_game();
  // H1 = 2|s2| - |s2 - s1|, H2 = -2|s2| + |s2 - s1| on [-1,1] controls
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const Vec s{unit(rng), unit(rng)};
    const double expected1 = 2.0 * std::abs(s[1]) - std::abs(s[1] - s[0]);
    const double expected2 = -2.0 * std::abs(s[1]) + std::abs(s[1] - s[0]);
    CHECK(hamiltonian(g, 0.3, Vec{0.1, -0.2}, s, 1) ==
          doctest::Approx(expected1).epsilon(1e-12));
    CHECK(hamiltonian(g, 0.3, Vec{0.1, -0.2}, s, 2) ==
          doctest::Approx(expected2).epsilon(1e-12));
  }
  CHECK(hamiltonian(g, 0.0, Vec{0.0, 0.0}, Vec{1.0, 0.0}, 1) == -1.0);
  CHECK(hamiltonian(g, 0.0, Vec{0.0, 0.0}, Vec{1.0, 0.0}, 2) == 1.0);
  CHECK(hamiltonian(g, 0.0, Vec{0.0, 0.0}, Vec{0.0, 0.0}, 1) == 0.0);
}

TEST_CASE("separated dynamics: max-min equals min-max over the grids") {
  for (unsigned seed : {11u, 12u, 13u}) {
    const GameDefinition g = random_affine_game(2, seed);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.5, 1.5);
    for (int i = 0; i < 50; ++i) {
      const Vec x{unit(rng), unit(rng)};
      const Vec s{unit(rng), unit(rng)};
      const double maxmin = hamiltonian(g, 0.2, x, s, 1);
      // min over Q of max over P, computed directly
      double minmax = std::numeric_limits<double>::infinity();
      for (const Vec& v : g.control_grid_q) {
        double inner = -std::numeric_limits<double>::infinity();
        for (const Vec& u : g.control_grid_p)
          inner = std::max(inner, dot(s, rhs(g, 0.2, x, u, v)));
        minmax = std::min(minmax, inner);
      }
      CHECK(maxmin == doctest::Approx(minmax).epsilon(1e-12));
    }
  }
}

TEST_CASE("example2 scalar Hamiltonian is |s|") {
  const GameDefinition g = example2_game(3);
  for (double s : {-1.5, -0.3, 0.0, 0.7, 2.0})
    CHECK(hamiltonian(g, 0.1, Vec{0.2}, Vec{s}, 1) ==
          doctest::Approx(std::abs(s)).epsilon(1e-12));
}

TEST_CASE("hj residuals of the solution family vanish") {
  const GameDefinition g = example1_game();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  // alpha on a 9-point grid of [-1, 1], 100 random positions each
  for (int ia = 0; ia <= 8; ++ia) {
    const double alpha = -1.0 + 0.25 * ia;
    const CandidateValueFunction cand =
        candidate_for(g, "phi_alpha:" + std::to_string(alpha));
    for (int i = 0; i < 100; ++i) {
      const double t = 0.5 * (unit(rng) + 1.0) * 0.99;
      const Vec x{unit(rng), unit(rng)};
      const HjResidual r = hj_residual(cand, g, t, x);
      CHECK(std::abs(r.r1) <= 1e-9);
      CHECK(std::abs(r.r2) <= 1e-9);
      CHECK(r.v_hat == Vec{1.0});
    }
  }
}

TEST_CASE("the conserving pair is not a system solution: r1 = -2") {
  const GameDefinition g = example1_game();
  const CandidateValueFunction cand = candidate_for(g, "conserved");
  const HjResidual r = hj_residual(cand, g, 0.25, Vec{0.4, -0.3});
  CHECK(r.r1 == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(r.v_hat == Vec{1.0});  // forced by grad c2
  CHECK(r.u_hat == Vec{-1.0});  // degenerate argmax, lowest index
}

TEST_CASE("zero state gradient reduces the residual to the time slope") {
  const GameDefinition g = example1_game();
  CandidateValueFunction flat;
  flat.name = "flat";
  flat.c1 = [](double t, const Vec&) { return 3.0 * t; };
  flat.c2 = [](double t, const Vec&) { return -0.5 * t; };
  const HjResidual r = hj_residual(flat, g, 0.5, Vec{0.2, 0.2});
  CHECK(r.r1 == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(r.r2 == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("finite differences agree with registered gradients") {
  const GameDefinition g = example1_game();
  const CandidateValueFunction analytic = candidate_for(g, "conserved");
  CandidateValueFunction numeric = analytic;
  numeric.grad1 = nullptr;
  numeric.grad2 = nullptr;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double t = 0.4 * (unit(rng) + 1.0);
    const Vec x{unit(rng), unit(rng)};
    for (int which : {1, 2}) {
      const Vec a = analytic.gradient(which, t, x);
      const Vec b = numeric.gradient(which, t, x);
      for (std::size_t j = 0; j < a.size(); ++j)
        CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-6));
    }
  }
}

TEST_CASE("check_F accepts the conserving pair and rejects the perturbed one") {
  const GameDefinition g = example1_game();
  SampleSpec spec;
  spec.positions = Box{Vec{-1.0, -1.0}, Vec{1.0, 1.0}};
  spec.t_hi = 1.0;
  spec.samples = 200;
  spec.step = 0.01;
  spec.tolerance = 0.02;
  spec.seed = 5;

  const ConditionReport good = check_F(candidate_for(g, "conserved"), g, spec);
  CHECK(good.all_pass());
  CHECK(good.find("F1").worst == 0.0);

  SampleSpec strict = spec;
  strict.tolerance = 0.005;
  const ConditionReport bad = check_F(candidate_for(g, "conserved_perturbed"), g, strict);
  CHECK_FALSE(bad.find("F2").pass);
  // the failing one-step increment is (2 - max_v v) * step = step
  CHECK(bad.find("F2").worst == doctest::Approx(0.01).epsilon(1e-9));
  CHECK(bad.find("F1").pass);
}

TEST_CASE("modulus derivative on the conserving pair") {
  const GameDefinition g = example1_game();
  const CandidateValueFunction cand = candidate_for(g, "conserved");
  const std::vector<double> deltas{0.1, 0.01, 0.001};
  // along w = (1,1): both increments vanish
  CHECK(modulus_derivative(cand, 0.3, Vec{0.1, 0.2}, Vec{1.0, 1.0}, deltas) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // w = 0: |dc1/dt| + |dc2/dt| = 2
  CHECK(modulus_derivative(cand, 0.3, Vec{0.1, 0.2}, Vec{0.0, 0.0}, deltas) ==
        doctest::Approx(2.0).epsilon(1e-12));
  // smooth candidates: the quotient matches the chain rule along w
  const Vec w{0.5, -1.0};
  const double analytic = std::abs(-1.0 + 0.5) + std::abs(-1.0 - 1.0);
  CHECK(modulus_derivative(cand, 0.2, Vec{0.0, 0.0}, w, deltas) ==
        doctest::Approx(analytic).epsilon(1e-12));
}

TEST_CASE("the F4 surrogate and the modulus derivative agree") {
  const GameDefinition g = example1_game();
  const CandidateValueFunction cand = candidate_for(g, "conserved");
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double step = 0.01;
  for (int i = 0; i < 50; ++i) {
    const double t = 0.45 * (unit(rng) + 1.0);
    const Vec x{unit(rng), unit(rng)};
    double direct = std::numeric_limits<double>::infinity();
    double through_modulus = std::numeric_limits<double>::infinity();
    for (const Vec& u : g.control_grid_p)
      for (const Vec& v : g.control_grid_q) {
        const Vec w = rhs(g, t, x, u, v);
        Vec y = x;
        axpy(step, w, y);
        direct = std::min(direct, std::abs(cand.c1(t + step, y) - cand.c1(t, x)) +
                                      std::abs(cand.c2(t + step, y) - cand.c2(t, x)));
        through_modulus =
            std::min(through_modulus, modulus_derivative(cand, t, x, w, {step}) * step);
      }
    CHECK(direct == doctest::Approx(through_modulus).epsilon(1e-12));
  }
}

TEST_CASE("check_S passes on a fresh table and reports the terminal check exactly") {
  const GameDefinition g = example2_game(3);
  const StateGrid grid = StateGrid::make_uniform(-2.0, 2.0, 1.0 / 16, 1);
  const ValueTable table = build_value_table(g, box_constants(grid), grid, 16, 1e-3);
  const ConditionReport report = check_S(table, 0, 1);  // exhaustive
  CHECK(report.all_pass());
  CHECK(report.find("S1").worst == 0.0);
  CHECK(report.find("S2").worst <= table.eps_payoff());
  CHECK(report.find("S3").worst <= table.eps_payoff());

  const ConditionReport sampled = check_S(table, 60, 9);
  CHECK(sampled.all_pass());
  CHECK(sampled.params.at("mode") == "sampled");
  CHECK(sampled.find("S4").samples == 60);
}

TEST_CASE("deleting a witness pair breaks S4 with a recorded witness") {
  // example1 on a coarse exact-lattice grid: the (1,1) chain from the
  // origin has a unique witness successor per layer
  const GameDefinition g = example1_game(3);
  const StateGrid grid = StateGrid::make_uniform(-2.0, 2.0, 0.5, 2);
  const ValueTable table = build_value_table(g, box_constants(grid), grid, 2, 1e-3);

  std::ostringstream exported;
  table.export_text(exported);
  std::string text = exported.str();

  // drop the pair (1, 1) from the layer-1 record of node (0.5, 0.5)
  const std::size_t node_half = grid.snap(Vec{0.5, 0.5});
  const std::string needle = "L 1 " + std::to_string(node_half) + " ";
  const auto line_begin = text.find(needle);
  REQUIRE(line_begin != std::string::npos);
  const auto line_end = text.find('\n', line_begin);
  std::string line = text.substr(line_begin, line_end - line_begin);
  std::istringstream fields(line);
  std::string tag;
  int k;
  std::size_t node, count;
  fields >> tag >> k >> node >> count;
  std::vector<std::pair<double, double>> pairs(count);
  for (auto& [a, b] : pairs) fields >> a >> b;
  const std::size_t before = pairs.size();
  std::erase_if(pairs, [](const auto& p) { return p.first == 1.0 && p.second == 1.0; });
  REQUIRE(pairs.size() == before - 1);
  std::ostringstream rebuilt;
  rebuilt << "L 1 " << node << " " << pairs.size();
  for (const auto& [a, b] : pairs) rebuilt << " " << format_double(a) << " " << format_double(b);
  text.replace(line_begin, line_end - line_begin, rebuilt.str());

  std::istringstream in(text);
  const ValueTable corrupted = ValueTable::import_text(in, example1_game(3));
  const ConditionReport report = check_S(corrupted, 0, 1);
  CHECK_FALSE(report.find("S4").pass);
  CHECK(report.find("S4").witness.find("NoWitness") != std::string::npos);
  CHECK_THROWS_AS(corrupted.validate(), std::exception);
}

TEST_CASE("hj_residual refuses kinks and bad hints") {
  const GameDefinition g2 = example2_game(3);
  const CandidateValueFunction kinked = candidate_for(g2, "abs_branch");
  CHECK_THROWS_AS(hj_residual(kinked, g2, 0.5, Vec{0.0}), ConfigError);
  // away from the kink the branch is smooth
  const HjResidual r = hj_residual(kinked, g2, 0.5, Vec{0.5});
  CHECK(std::abs(r.r1) <= 1e-6);

  const GameDefinition g1 = example1_game();
  CandidateValueFunction bad = candidate_for(g1, "conserved");
  bad.v_hat_hint = Vec{-1.0};  // not a maximizer of <grad c2, g>
  CHECK_THROWS_AS(hj_residual(bad, g1, 0.2, Vec{0.0, 0.0}), ConfigError);
}

TEST_CASE("report serialization is structured") {
  const GameDefinition g = example1_game();
  SampleSpec spec;
  spec.positions = Box{Vec{-1.0, -1.0}, Vec{1.0, 1.0}};
  spec.samples = 10;
  const ConditionReport report = check_F(candidate_for(g, "conserved"), g, spec);
  const std::string json = report.to_json();
  CHECK(json.find("\"id\": \"F1\"") != std::string::npos);
  CHECK(json.find("\"params\"") != std::string::npos);
}
