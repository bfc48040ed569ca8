// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "restaurant/error.hpp"
#include "restaurant/qstrategy.hpp"
#include "support/oracles.hpp"

using namespace restaurant;

namespace {

oracle::Table oracle_born(const QuantumStrategy& s) {
  std::array<Eigen::Vector3d, 3> n;
  for (int x = 0; x < 3; ++x) n[x] = oracle::bloch_of(s.encodings[x].vector());
  return oracle::born(n, n, s.weights);
}

Prob3 random_interior_game(oracle::Rng& rng) {
  for (;;) {
    const Prob3 g = rng.simplex();
    if (std::max({g[0], g[1], g[2]}) < 2.0 / 3.0 - 1e-3 && std::min({g[0], g[1], g[2]}) > 1e-3) return g;
  }
}

}  // namespace

TEST_CASE("Born probabilities agree with the density-matrix oracle") {
  const SynthesisAngles ang(2.3, 2.1);
  const QuantumStrategy s = strategy_from_angles(ang);
  const Eigen::Matrix3d p = born_probabilities(s);
  const oracle::Table t = oracle_born(s);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) CHECK(p(x, y) == doctest::Approx(t[x][y]).epsilon(1e-13));
  // Anti-distinguishing: never the closed restaurant.
  for (int x = 0; x < 3; ++x) CHECK(std::abs(p(x, x)) < 1e-14);
}

TEST_CASE("closed form for gamma1 matches the Born rule") {
  oracle::Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const double t2 = rng.uniform(0.05, oracle::kPi - 0.05);
    const double lo = oracle::kPi - t2 + 0.05;
    if (lo >= oracle::kPi - 0.05) continue;
    const double t3 = rng.uniform(lo, oracle::kPi - 0.05);
    const SynthesisAngles ang(t2, t3);
    CHECK(gamma1_closed_form(ang) == doctest::Approx(gamma_from_angles(ang)[0]).epsilon(1e-11));
    const QuantumStrategy s = strategy_from_angles(ang);
    CHECK_NOTHROW(s.validate());
    const auto w = alphas_from_angles(ang);
    CHECK(w[0] + w[1] + w[2] == doctest::Approx(2.0));
  }
}

TEST_CASE("angle preconditions") {
  CHECK_THROWS_AS(SynthesisAngles(0.0, 3.0), Error);
  CHECK_THROWS_AS(SynthesisAngles(1.0, 1.0), Error);
  CHECK_THROWS_AS(SynthesisAngles(2.0, 3.2), Error);
}

TEST_CASE("trine for the uniform game") {
  const QuantumStrategy s = synthesize(kUniform);
  for (double w : s.weights) CHECK(w == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) CHECK(bloch_angle_deg(s.bloch(a), s.bloch(b)) == doctest::Approx(120.0).epsilon(1e-7));
}

TEST_CASE("synthesized strategies are perfect on random interior games") {
  oracle::Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const Prob3 g = random_interior_game(rng);
    const QuantumStrategy s = synthesize(g);
    const oracle::Table t = oracle_born(s);
    CHECK(oracle::quality(t, g) <= 1e-9);
    const VerifyReport r = verify(s, g);
    CHECK(r.pass);
  }
}

TEST_CASE("boundary games and invalid games") {
  for (const Prob3& g : {Prob3{2.0 / 3, 1.0 / 3, 0.0}, Prob3{0.5, 0.5, 0.0}, Prob3{2.0 / 3, 1.0 / 6, 1.0 / 6}}) {
    const QuantumStrategy s = synthesize(g);
    CHECK(oracle::quality(oracle_born(s), g) <= 1e-6);
  }
  try {
    synthesize({0.7, 0.2, 0.1});
    FAIL("expected InvalidGame");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidGame);
  }
  try {
    synthesize({0.5, 0.6, 0.1});
    FAIL("expected InvalidInput");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
  }
}

TEST_CASE("relabelling the game relabels the strategy") {
  const Prob3 g{0.5, 0.3, 0.2};
  const Prob3 h{0.2, 0.5, 0.3};  // cyclic shift
  const Eigen::Matrix3d a = born_visit_matrix(synthesize(g)).matrix();
  const Eigen::Matrix3d b = born_visit_matrix(synthesize(h)).matrix();
  // b(x, y) = a(x-1, y-1) for the shift sending label k to k+1.
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) CHECK(b((x + 1) % 3, (y + 1) % 3) == doctest::Approx(a(x, y)).epsilon(1e-8));
}

TEST_CASE("verify flags a broken strategy") {
  QuantumStrategy s = synthesize({0.4, 0.35, 0.25});
  const VerifyReport ok = verify(s, {0.4, 0.35, 0.25});
  CHECK(ok.pass);
  CHECK_FALSE(ok.summary().empty());
  const VerifyReport wrong_game = verify(s, {0.45, 0.3, 0.25});
  CHECK_FALSE(wrong_game.pass);
  s.weights[0] += 1e-3;
  CHECK_FALSE(verify(s, {0.4, 0.35, 0.25}).pass);
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("from_bloch normalizes directions and keeps weights") {
  const std::array<Eigen::Vector3d, 3> v{Eigen::Vector3d(0, 0, 2), Eigen::Vector3d(3, 0, 0), Eigen::Vector3d(0, 0.5, 0)};
  const QuantumStrategy s = QuantumStrategy::from_bloch(v, {1.0, 0.5, 0.5});
  CHECK((s.bloch(0) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-12);
  CHECK((s.bloch(1) - Eigen::Vector3d(1, 0, 0)).norm() < 1e-12);
  CHECK(s.weights[1] == 0.5);
  CHECK_THROWS_AS(QuantumStrategy::from_bloch({Eigen::Vector3d::Zero(), v[1], v[2]}, {1, 0.5, 0.5}), Error);
}
