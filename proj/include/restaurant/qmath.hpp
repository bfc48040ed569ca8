// SPDX-License-Identifier: Apache-2.0
//
// Small-dimension complex linear algebra for a single polarization qubit:
// pure states, Bloch vectors, density matrices and Jones calculus for
// quarter- and half-wave plates.
//
// Jones conventions used throughout the project (basis |H> = |0>, |V> = |1>):
//
//   HWP(t) = [[cos 2t,  sin 2t],
//             [sin 2t, -cos 2t]]
//   QWP(t) = R(t) diag(1, i) R(-t),   R(t) = [[cos t, -sin t], [sin t, cos t]]
//
// A QWP-HWP-QWP stack (t_q1, t_h, t_q2) traversed in that optical order acts
// as QWP(t_q2) * HWP(t_h) * QWP(t_q1). Angles are in degrees.
//
// On the Bloch sphere (bz = |c0|^2 - |c1|^2) a retarder with fast axis t
// rotates about n(t) = (sin 2t, 0, cos 2t) by its retardance.
#pragma once

#include <Eigen/Core>

#include <array>
#include <complex>

namespace restaurant {

using cplx = std::complex<double>;
using ComplexMat2 = Eigen::Matrix2cd;
using ComplexVec2 = Eigen::Vector2cd;

bool is_finite(const ComplexMat2& m) noexcept;

/// Normalized qubit state in canonical gauge (first nonzero amplitude real
/// and non-negative).
class PureState {
 public:
  /// |0>.
  PureState();

  /// Normalizes and gauge-fixes; throws InvalidInput on a zero or non-finite vector.
  static PureState from_amplitudes(cplx c0, cplx c1);

  cplx c0() const noexcept { return amp_[0]; }
  cplx c1() const noexcept { return amp_[1]; }
  const ComplexVec2& vector() const noexcept { return amp_; }

 private:
  explicit PureState(const ComplexVec2& amp) : amp_(amp) {}
  ComplexVec2 amp_;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Eigen::Vector3d vec() const { return {x, y, z}; }
  static BlochVector from(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }
  double norm() const;
};

/// Hermitian, unit-trace, positive semidefinite 2x2 matrix.
class DensityMat {
 public:
  /// Validates the invariants at 1e-12; throws InvalidInput otherwise.
  explicit DensityMat(const ComplexMat2& m);

  const ComplexMat2& matrix() const noexcept { return m_; }

 private:
  ComplexMat2 m_;
};

/// QWP-HWP-QWP angles in degrees, each reduced into [0, 360).
class WavePlateTriple {
 public:
  WavePlateTriple() = default;
  WavePlateTriple(double quarter_first, double half, double quarter_second);

  double quarter_first() const noexcept { return q1_; }
  double half() const noexcept { return h_; }
  double quarter_second() const noexcept { return q2_; }
  std::array<double, 3> angles() const noexcept { return {q1_, h_, q2_}; }

 private:
  double q1_ = 0.0;
  double h_ = 0.0;
  double q2_ = 0.0;
};

const ComplexMat2& pauli_x();
const ComplexMat2& pauli_y();
const ComplexMat2& pauli_z();

DensityMat bloch_to_density(const BlochVector& b);
BlochVector density_to_bloch(const DensityMat& rho);

BlochVector state_to_bloch(const PureState& psi);
/// Pure state on the sphere pointing along b (b is normalized first).
PureState bloch_to_state(const BlochVector& b);

/// |psi><psi|.
ComplexMat2 projector(const PureState& psi);

PureState orthogonal_state(const PureState& psi);

/// |<a|b>|^2.
double overlap(const PureState& a, const PureState& b);

PureState apply_unitary(const ComplexMat2& u, const PureState& psi);

ComplexMat2 hwp(double theta_deg);
ComplexMat2 qwp(double theta_deg);

ComplexMat2 waveplates_to_unitary(const WavePlateTriple& w);

/// Finds wave-plate angles reproducing u up to a global phase. Throws
/// InvalidInput for a non-unitary argument (tolerance 1e-9) and
/// ConvergenceFailure if the polished residual stays above 1e-10.
WavePlateTriple unitary_to_waveplates(const ComplexMat2& u);

/// min over phi of || a - e^{i phi} b ||_F.
double operator_distance(const ComplexMat2& a, const ComplexMat2& b);

/// Plain Frobenius distance, for operators where phase matters.
double frobenius_distance(const ComplexMat2& a, const ComplexMat2& b);

bool is_unitary(const ComplexMat2& u, double tol);

/// SO(3) matrix R with Bloch(u psi) = R * Bloch(psi).
Eigen::Matrix3d bloch_rotation(const ComplexMat2& u);

/// Unitary taking |0> to psi (columns psi, psi_perp).
ComplexMat2 unitary_from_zero(const PureState& psi);

/// Angle between two Bloch vectors, in degrees.
double bloch_angle_deg(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

}  // namespace restaurant
