// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "restaurant/error.hpp"
#include "restaurant/game.hpp"
#include "support/oracles.hpp"

using namespace restaurant;

namespace {

oracle::Table table(const VisitMatrix& v) {
  oracle::Table t{};
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) t[x][y] = v(x, y);
  return t;
}

VisitMatrix random_visit(oracle::Rng& rng) {
  Eigen::Matrix3d m;
  for (int x = 0; x < 3; ++x) {
    const auto r = rng.simplex();
    for (int y = 0; y < 3; ++y) m(x, y) = r[y];
  }
  return VisitMatrix(m);
}

}  // namespace

TEST_CASE("quality index agrees with the direct computation") {
  oracle::Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const VisitMatrix v = random_visit(rng);
    const Prob3 g = rng.simplex();
    const Prob3 prior = rng.simplex();
    const double k1 = rng.uniform(0.1, 2.0), k2 = rng.uniform(0.1, 2.0);
    const GameSpec spec = GameSpec::make(g, k1, k2, prior);
    CHECK(quality_index(v, spec) == doctest::Approx(oracle::quality(table(v), g, k1, k2, prior)).epsilon(1e-14));
  }
}

TEST_CASE("hand-worked index") {
  // Always visit the next restaurant: p = (1/3, 1/3, 1/3), no collisions.
  Eigen::Matrix3d m;
  m << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  const GameSpec spec = GameSpec::make({0.5, 0.25, 0.25});
  CHECK(quality_index(VisitMatrix(m), spec) == doctest::Approx(0.5 - 1.0 / 3.0));
  // Always visit restaurant 1: one collision out of three.
  Eigen::Matrix3d n = Eigen::Matrix3d::Zero();
  n.col(0).setOnes();
  CHECK(quality_index(VisitMatrix(n), GameSpec::make(kUniform)) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("visit matrices are validated") {
  Eigen::Matrix3d m = Eigen::Matrix3d::Constant(1.0 / 3.0);
  CHECK_NOTHROW(VisitMatrix{m});
  m(0, 0) += 1e-6;
  CHECK_THROWS_AS(VisitMatrix{m}, Error);
  m(0, 0) = -0.1;
  m(0, 1) += 0.1 + 1.0 / 3.0 - 1e-6;
  CHECK_THROWS_AS(VisitMatrix{m}, Error);
}

TEST_CASE("game spec validation") {
  CHECK_THROWS_AS(GameSpec::make({0.5, 0.5, 0.5}), Error);
  CHECK_THROWS_AS(GameSpec::make(kUniform, 0.0, 1.0), Error);
  CHECK_THROWS_AS(GameSpec::make(kUniform, 1.0, 1.0, {1.0, 1.0, 0.0}), Error);
  std::string warning;
  const Prob3 g = normalize_user_probabilities({0.333333, 0.333333, 0.333334}, &warning);
  CHECK(g[0] + g[1] + g[2] == doctest::Approx(1.0).epsilon(1e-15));
  const Prob3 h = normalize_user_probabilities({0.2, 0.3, 0.5000005}, &warning);
  CHECK_FALSE(warning.empty());
  CHECK(h[0] + h[1] + h[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(normalize_user_probabilities({0.2, 0.3, 0.6}), Error);
  CHECK_THROWS_AS(normalize_user_probabilities({-0.1, 0.5, 0.6}), Error);
}

TEST_CASE("hexagon membership and winnability") {
  CHECK(is_valid_game({2.0 / 3.0, 1.0 / 3.0, 0.0}));
  CHECK_FALSE(is_valid_game({0.7, 0.2, 0.1}));
  CHECK(classically_winnable({2.0 / 3.0, 1.0 / 3.0, 0.0}, 1e-9));
  CHECK(classically_winnable({0.5, 0.5, 0.0}, 1e-9));
  CHECK_FALSE(classically_winnable(kUniform, 1e-9));
}

TEST_CASE("the extreme deterministic strategies are the hexagon vertices") {
  const auto mats = extreme_visit_matrices();
  for (const auto& m : mats)
    for (int x = 0; x < 3; ++x) CHECK(m(x, x) == 0.0);
  const auto gs = extreme_gammas();
  int at_two_thirds = 0;
  for (const auto& g : gs) {
    CHECK(is_valid_game(g));
    for (double v : g) at_two_thirds += std::abs(v - 2.0 / 3.0) < 1e-12;
  }
  CHECK(at_two_thirds == 6);
  // The two cyclic ones give the centre.
  for (int k = 6; k < 8; ++k)
    for (double v : visiting_probs(mats[k])) CHECK(v == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("statistical overlap") {
  CHECK(statistical_overlap(kUniform, kUniform) == doctest::Approx(1.0));
  CHECK(statistical_overlap({1, 0, 0}, {0, 1, 0}) == doctest::Approx(0.0));
  const Prob3 a{0.5, 0.3, 0.2}, b{0.4, 0.4, 0.2};
  const double s = std::sqrt(0.2) + std::sqrt(0.12) + 0.2;
  CHECK(statistical_overlap(a, b) == doctest::Approx(s * s));
}

TEST_CASE("curve endpoints, symmetry and inversion") {
  const Prob3 c = curve_gamma(CurveParam(0.0));
  for (double v : c) CHECK(v == 1.0 / 3.0);
  const Prob3 e = curve_gamma(CurveParam(-1.0));
  CHECK(std::abs(e[0] - 1.0 / 9.0) < 1e-12);
  CHECK(std::abs(e[1] - 2.0 / 9.0) < 1e-12);
  CHECK(std::abs(e[2] - 2.0 / 3.0) < 1e-12);
  for (int i = 0; i <= 100; ++i) {
    const double a = -1.0 + 0.02 * i;
    const Prob3 g = curve_gamma(CurveParam(a));
    const Prob3 m = curve_gamma(CurveParam(-a));
    for (int k = 0; k < 3; ++k) CHECK(std::abs(g[k] - m[2 - k]) < 1e-12);
    CHECK(g[0] + g[1] + g[2] == doctest::Approx(1.0));
    CHECK(curve_invert(g, 1e-9).value() == doctest::Approx(a).epsilon(1e-7));
  }
  CHECK_THROWS_AS(CurveParam(1.5), Error);
  CHECK_THROWS_AS(curve_invert({0.5, 0.5, 0.0}, 1e-4), Error);
}

TEST_CASE("permuting labels permutes the visit matrix consistently") {
  oracle::Rng rng(2);
  const std::array<int, 3> perm{2, 0, 1};
  for (int i = 0; i < 20; ++i) {
    const VisitMatrix v = random_visit(rng);
    const Prob3 g = rng.simplex();
    const double a = quality_index(v, GameSpec::make(g));
    const double b = quality_index(permute(v, perm), GameSpec::make(permute(g, perm)));
    CHECK(a == doctest::Approx(b).epsilon(1e-14));
  }
}
