// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "restaurant/certify.hpp"
#include "restaurant/error.hpp"
#include "restaurant/experiment.hpp"
#include "support/oracles.hpp"

using namespace restaurant;

namespace {

// Random POVM with three elements (not necessarily rank one).
std::array<ComplexMat2, 3> random_povm(oracle::Rng& rng) {
  std::array<ComplexMat2, 3> a;
  ComplexMat2 s = ComplexMat2::Zero();
  for (auto& m : a) {
    const ComplexMat2 g = rng.su2() * rng.uniform(0.1, 1.0);
    m = g * g.adjoint();
    s += m;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMat2> es(s);
  const ComplexMat2 isq = es.operatorInverseSqrt();
  for (auto& m : a) m = isq * m * isq;
  return a;
}

ComplexMat2 diag_in(const ComplexMat2& basis, double a, double b) {
  ComplexMat2 d = ComplexMat2::Zero();
  d(0, 0) = a;
  d(1, 1) = b;
  return basis * d * basis.adjoint();
}

oracle::Table direct(const PrepareMeasure& pm) {
  oracle::Table t{};
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) t[x][y] = (pm.effects[y] * pm.states[x]).trace().real();
  return t;
}

}  // namespace

TEST_CASE("classical simulation of orthogonal encodings reproduces the statistics") {
  oracle::Rng rng(51);
  for (int i = 0; i < 50; ++i) {
    PrepareMeasure pm;
    pm.basis = rng.su2();
    for (auto& st : pm.states) {
      const double a = rng.uniform();
      st = diag_in(pm.basis, a, 1.0 - a);
    }
    pm.effects = random_povm(rng);
    const ClassicalStrategy cs = classical_simulation_oracle(SimulationKind::OrthogonalEncoding, pm);
    cs.validate();
    const VisitMatrix v = visit_matrix(cs);
    const oracle::Table t = direct(pm);
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y) CHECK(std::abs(v(x, y) - t[x][y]) < 1e-12);
  }
}

TEST_CASE("classical simulation of projective decoding reproduces the statistics") {
  oracle::Rng rng(52);
  for (int i = 0; i < 50; ++i) {
    PrepareMeasure pm;
    pm.basis = rng.su2();
    for (auto& st : pm.states) st = oracle::density(rng.unit() * rng.uniform());
    // Each basis projector goes wholly to one outcome.
    const int a = static_cast<int>(rng.uniform(0, 3)), b = static_cast<int>(rng.uniform(0, 3));
    for (auto& e : pm.effects) e = ComplexMat2::Zero();
    pm.effects[a] += diag_in(pm.basis, 1.0, 0.0);
    pm.effects[b] += diag_in(pm.basis, 0.0, 1.0);
    const VisitMatrix v = visit_matrix(classical_simulation_oracle(SimulationKind::ProjectiveDecoding, pm));
    const oracle::Table t = direct(pm);
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y) CHECK(std::abs(v(x, y) - t[x][y]) < 1e-12);
  }
}

TEST_CASE("simulation refuses coherent resources") {
  PrepareMeasure pm;
  pm.states = {oracle::density({1, 0, 0}), oracle::density({0, 0, 1}), oracle::density({0, 0, -1})};
  pm.effects = {ComplexMat2::Identity() / 3.0, ComplexMat2::Identity() / 3.0, ComplexMat2::Identity() / 3.0};
  try {
    classical_simulation_oracle(SimulationKind::OrthogonalEncoding, pm);
    FAIL("expected NotApplicable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotApplicable);
  }
  pm.effects = {oracle::density({1, 0, 0}), oracle::density({-1, 0, 0}), ComplexMat2::Zero()};
  CHECK_THROWS_AS(classical_simulation_oracle(SimulationKind::ProjectiveDecoding, pm), Error);
  pm.basis << 1, 1, 1, -1;
  pm.basis /= std::sqrt(2.0);
  CHECK_NOTHROW(classical_simulation_oracle(SimulationKind::ProjectiveDecoding, pm));  // diagonal in |+>, |->
  pm.basis = ComplexMat2::Identity();
  pm.effects = {oracle::density({0, 0, 1}) * (2.0 / 3), oracle::density({0, 0, 1}) / 3.0, oracle::density({0, 0, -1})};
  CHECK_NOTHROW(classical_simulation_oracle(SimulationKind::ProjectiveDecoding, pm));  // diagonal, coarse-grained
}

TEST_CASE("certificate verdict follows the margin rule") {
  const Prob3 g{0.45, 0.35, 0.2};
  const GameSpec spec = GameSpec::make(g);
  ClassicalOptimum copt = optimize(spec, {0.05, 3, 1});
  ExperimentConfig cfg;
  cfg.shots = 48000;
  cfg.bootstrap_resamples = 0;
  const ExperimentResult r = simulate(spec, synthesize(g), NoiseModel{}, cfg);
  CertifyOptions opt;
  opt.bootstrap_resamples = 300;
  const Certificate c = certify(r.counts, spec, copt, opt);
  CHECK(c.pass);
  CHECK(c.margin == doctest::Approx(c.eps_c - c.eps_v));
  CHECK(c.sigmas == doctest::Approx(c.margin / c.eps_v_stderr));
  CHECK(c.pass == (c.eps_v + c.z * c.eps_v_stderr < c.eps_c));

  // Counts drawn from the classical optimum itself must not certify.
  const VisitMatrix cv = visit_matrix(copt.strategy);
  Counts cc{};
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) cc[x][y] = static_cast<std::uint64_t>(std::llround(cv(x, y) * 16000));
  CHECK_FALSE(certify(cc, spec, copt, opt).pass);
}

TEST_CASE("empty rows cannot be certified") {
  const Counts c{{{0, 10, 10}, {0, 0, 0}, {10, 10, 0}}};
  try {
    certify(c, GameSpec::make(kUniform), ClassicalOptimum{}, CertifyOptions{});
    FAIL("expected EmptyRow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyRow);
  }
}
