// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "restaurant/error.hpp"
#include "restaurant/qmath.hpp"
#include "support/oracles.hpp"

using namespace restaurant;

TEST_CASE("pauli matrices match their textbook entries") {
  for (int k = 1; k <= 3; ++k) {
    const ComplexMat2& p = k == 1 ? pauli_x() : k == 2 ? pauli_y() : pauli_z();
    CHECK((p - oracle::pauli(k)).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("wave plates agree with the retarder formula") {
  for (double t : {0.0, 12.5, 45.0, 90.0, 133.0, 271.0}) {
    CHECK((hwp(t) - oracle::retarder(t, oracle::kPi)).norm() < 1e-12);
    CHECK((qwp(t) - oracle::retarder(t, oracle::kPi / 2)).norm() < 1e-12);
  }
  // The listed bit flip.
  const ComplexMat2 flip = waveplates_to_unitary({0.0, 45.0, 0.0});
  CHECK(oracle::phase_distance(flip, oracle::pauli(1)) < 1e-12);
}

TEST_CASE("wave-plate stack order is q2 * h * q1") {
  const WavePlateTriple w{17.0, 63.0, 101.0};
  const oracle::M2 expect =
      oracle::retarder(101.0, oracle::kPi / 2) * oracle::retarder(63.0, oracle::kPi) * oracle::retarder(17.0, oracle::kPi / 2);
  CHECK((waveplates_to_unitary(w) - expect).norm() < 1e-12);
}

TEST_CASE("random SU(2) decompositions round trip up to global phase") {
  oracle::Rng rng(11);
  double worst = 0.0;
  for (int i = 0; i < 300; ++i) {
    const ComplexMat2 u = rng.su2();
    const WavePlateTriple w = unitary_to_waveplates(u);
    for (double a : w.angles()) {
      CHECK(a >= 0.0);
      CHECK(a < 360.0);
    }
    worst = std::max(worst, oracle::phase_distance(waveplates_to_unitary(w), u));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("non-unitary input is rejected") {
  ComplexMat2 m = ComplexMat2::Identity();
  m(0, 0) = 2.0;
  CHECK_THROWS_AS(unitary_to_waveplates(m), Error);
}

TEST_CASE("Bloch vectors of states match the direct formula") {
  oracle::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d r = rng.unit();
    const PureState psi = bloch_to_state(BlochVector::from(r));
    CHECK((state_to_bloch(psi).vec() - r).norm() < 1e-12);
    CHECK((oracle::bloch_of(psi.vector()) - r).norm() < 1e-12);
    CHECK((projector(psi) - oracle::density(r)).norm() < 1e-12);
    // Orthogonal partner is antipodal.
    CHECK((state_to_bloch(orthogonal_state(psi)).vec() + r).norm() < 1e-12);
  }
}

TEST_CASE("pure-state gauge: first nonzero amplitude real and non-negative") {
  const PureState a = PureState::from_amplitudes(cplx(0, 1), cplx(0, 1));
  CHECK(a.c0().imag() == doctest::Approx(0.0));
  CHECK(a.c0().real() > 0.0);
  const PureState b = PureState::from_amplitudes(0.0, cplx(-1, 0));
  CHECK(b.c1().real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(PureState::from_amplitudes(0.0, 0.0), Error);
}

TEST_CASE("density matrices round trip and reject invalid input") {
  oracle::Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d r = rng.unit() * rng.uniform();
    const DensityMat d = bloch_to_density(BlochVector::from(r));
    CHECK((density_to_bloch(d).vec() - r).norm() < 1e-12);
  }
  CHECK_THROWS_AS(DensityMat(oracle::density({0, 0, 1.5})), Error);
  CHECK_THROWS_AS(DensityMat(2.0 * oracle::density({0, 0, 0})), Error);
}

TEST_CASE("bloch_rotation is the adjoint action") {
  oracle::Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const ComplexMat2 u = rng.su2();
    const Eigen::Matrix3d r = bloch_rotation(u);
    CHECK((r * r.transpose() - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(r.determinant() == doctest::Approx(1.0));
    const Eigen::Vector3d n = rng.unit();
    const PureState psi = bloch_to_state(BlochVector::from(n));
    CHECK((oracle::bloch_of(u * psi.vector()) - r * n).norm() < 1e-12);
  }
}

TEST_CASE("unitary_from_zero maps |0> onto the state") {
  oracle::Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    const PureState psi = bloch_to_state(BlochVector::from(rng.unit()));
    const ComplexMat2 u = unitary_from_zero(psi);
    CHECK(is_unitary(u, 1e-12));
    CHECK(overlap(apply_unitary(u, PureState()), psi) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("distances and angles") {
  const ComplexMat2 a = oracle::pauli(1);
  CHECK(operator_distance(a, cplx(0, 1) * a) < 1e-12);
  CHECK(frobenius_distance(a, -a) == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(bloch_angle_deg({0, 0, 1}, {1, 0, 0}) == doctest::Approx(90.0));
  CHECK(bloch_angle_deg({0, 0, 1}, {0, 0, -1}) == doctest::Approx(180.0));
}
