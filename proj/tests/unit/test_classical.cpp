// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <fstream>

#include "json.hpp"
#include "restaurant/cstrategy.hpp"
#include "restaurant/error.hpp"
#include "restaurant/simplex.hpp"
#include "support/oracles.hpp"

using namespace restaurant;

TEST_CASE("simplex: small textbook programs") {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6  ->  min -(x+y) = -2.8 at (1.6, 1.2)
  LpProblem lp;
  lp.c = {-1, -1};
  lp.a_ub = {1, 2, 3, 1};
  lp.b_ub = {4, 6};
  const LpSolution s = simplex_min(lp);
  CHECK(s.value == doctest::Approx(-2.8));
  CHECK(s.x[0] == doctest::Approx(1.6));
  CHECK(s.x[1] == doctest::Approx(1.2));

  // Equality plus a shifted lower bound: min x + y, x + y = 3, x >= 1, y >= 0.5
  LpProblem eq;
  eq.c = {1, 1};
  eq.a_eq = {1, 1};
  eq.b_eq = {3};
  eq.lower = {1.0, 0.5};
  CHECK(simplex_min(eq).value == doctest::Approx(3.0));
}

TEST_CASE("simplex: infeasible and unbounded are reported") {
  LpProblem inf;
  inf.c = {1};
  inf.a_ub = {1};
  inf.b_ub = {-1};
  try {
    simplex_min(inf);
    FAIL("expected Infeasible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Infeasible);
  }
  LpProblem unb;
  unb.c = {-1};
  unb.a_ub = {-1};
  unb.b_ub = {0};
  try {
    simplex_min(unb);
    FAIL("expected Unbounded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unbounded);
  }
  LpProblem bad;
  bad.c = {1, 2};
  bad.a_ub = {1};
  bad.b_ub = {1};
  CHECK_THROWS_AS(simplex_min(bad), Error);
}

TEST_CASE("inner LP equals the vertex-enumeration minimum") {
  oracle::Rng rng(21);
  for (int i = 0; i < 60; ++i) {
    const Prob3 g = rng.simplex();
    SenderTable s;
    for (auto& row : s) {
      const double a = rng.uniform();
      row = {a, 1.0 - a};
    }
    const InnerLpResult r = inner_lp(s, GameSpec::make(g));
    const double exact = oracle::receiver_vertex_min(s, g);
    CHECK(r.eps == doctest::Approx(exact).epsilon(1e-9));
    // The receiver really attains it.
    oracle::Table p{};
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y) p[x][y] = s[x][0] * r.receiver[0][y] + s[x][1] * r.receiver[1][y];
    CHECK(oracle::quality(p, g) == doctest::Approx(r.eps).epsilon(1e-12));
  }
}

TEST_CASE("inner LP is never beaten by a receiver grid") {
  oracle::Rng rng(22);
  for (int i = 0; i < 5; ++i) {
    const Prob3 g = rng.simplex();
    const SenderTable s{{{0.2, 0.8}, {0.9, 0.1}, {0.5, 0.5}}};
    CHECK(inner_lp(s, GameSpec::make(g)).eps <= oracle::receiver_grid_min(s, g, 24) + 1e-12);
  }
}

TEST_CASE("boundary games are won exactly") {
  for (const Prob3& g : {Prob3{2.0 / 3, 1.0 / 3, 0.0}, Prob3{0.5, 0.5, 0.0}, Prob3{0.1, 2.0 / 3, 1.0 - 0.1 - 2.0 / 3},
                         Prob3{0.0, 0.25, 0.75 - 0.0}}) {
    if (!is_valid_game(g)) continue;
    const ClassicalStrategy cs = exact_winning_strategy(g);
    cs.validate();
    CHECK(quality_index(visit_matrix(cs), GameSpec::make(g)) < 1e-12);
    CHECK(optimize(GameSpec::make(g), {0.05, 3, 1}).eps_c < 1e-9);
  }
  try {
    exact_winning_strategy(kUniform);
    FAIL("expected NotWinnable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotWinnable);
  }
}

TEST_CASE("uniform game matches the frozen oracle value") {
  std::ifstream f(std::string(RESTAURANT_TEST_DATA) + "/golden/classical_uniform.json");
  REQUIRE(f.good());
  const auto golden = nlohmann::json::parse(f);
  const double expect = golden["eps_c"].get<double>();
  const ClassicalOptimum opt = optimize(GameSpec::make(kUniform));
  CHECK(opt.eps_c == doctest::Approx(expect).epsilon(1e-9));
  // Reported strategy reproduces the reported value.
  CHECK(quality_index(visit_matrix(opt.strategy), GameSpec::make(kUniform)) == doctest::Approx(opt.eps_c));
}

TEST_CASE("optimizer is label-equivariant and thread-independent") {
  const Prob3 g{0.5, 0.3, 0.2};
  const double a = optimize(GameSpec::make(g), {0.05, 3, 1}).eps_c;
  const double b = optimize(GameSpec::make({g[2], g[0], g[1]}), {0.05, 3, 1}).eps_c;
  const double c = optimize(GameSpec::make(g), {0.05, 3, 3}).eps_c;
  CHECK(a == doctest::Approx(b).epsilon(1e-6));
  CHECK(a == c);
}

TEST_CASE("optimizer is at least as good as an oracle sender grid") {
  const Prob3 g{0.45, 0.35, 0.2};
  double grid_best = 1e9;
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j)
      for (int k = 0; k <= 10; ++k) {
        const SenderTable s{{{i / 10.0, 1 - i / 10.0}, {j / 10.0, 1 - j / 10.0}, {k / 10.0, 1 - k / 10.0}}};
        grid_best = std::min(grid_best, oracle::receiver_vertex_min(s, g));
      }
  const double eps = optimize(GameSpec::make(g)).eps_c;
  CHECK(eps <= grid_best + 1e-12);
  CHECK(eps >= grid_best - 5e-3);
}

TEST_CASE("optimizer options are validated") {
  CHECK_THROWS_AS(optimize(GameSpec::make(kUniform), {0.0, 1, 1}), Error);
  CHECK_THROWS_AS(optimize(GameSpec::make(kUniform), {0.1, -1, 1}), Error);
}
