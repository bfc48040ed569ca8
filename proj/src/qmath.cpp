// SPDX-License-Identifier: Apache-2.0
#include "restaurant/qmath.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "restaurant/error.hpp"

namespace restaurant {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

double wrap_degrees(double a) {
  double r = std::fmod(a, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;  // fmod of a tiny negative can round up to 360
  return r;
}

ComplexMat2 rotation(double theta_rad) {
  ComplexMat2 r;
  const double c = std::cos(theta_rad);
  const double s = std::sin(theta_rad);
  r << c, -s, s, c;
  return r;
}

// Polar angle of a vector in the Bloch x-z plane, measured from +z towards +x,
// in degrees. n(t) has angle 2t.
double xz_angle_deg(const Eigen::Vector3d& v) { return std::atan2(v.x(), v.z()) / kDeg; }

ComplexMat2 stack_unitary(double q1, double h, double q2) {
  return qwp(q2) * hwp(h) * qwp(q1);
}

// Residual of u against a wave-plate stack after removing the best global
// phase, packed as 8 reals.
Eigen::Matrix<double, 8, 1> stack_residual(const ComplexMat2& u, const Eigen::Vector3d& x) {
  const ComplexMat2 w = stack_unitary(x[0], x[1], x[2]);
  const cplx t = (w.adjoint() * u).trace();
  const cplx phase = std::abs(t) > 0.0 ? t / std::abs(t) : cplx(1.0, 0.0);
  const ComplexMat2 d = u - phase * w;
  Eigen::Matrix<double, 8, 1> r;
  for (int i = 0; i < 4; ++i) {
    r[2 * i] = d(i / 2, i % 2).real();
    r[2 * i + 1] = d(i / 2, i % 2).imag();
  }
  return r;
}

// Levenberg-Marquardt on the 3 angles. Central differences are accurate to
// ~1e-12 here, well inside what the residual needs.
Eigen::Vector3d polish(const ComplexMat2& u, Eigen::Vector3d x) {
  constexpr double step = 1e-6;
  double lambda = 1e-6;
  auto r = stack_residual(u, x);
  double cost = r.squaredNorm();
  for (int iter = 0; iter < 100 && cost > 1e-30; ++iter) {
    Eigen::Matrix<double, 8, 3> jac;
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector3d xp = x, xm = x;
      xp[k] += step;
      xm[k] -= step;
      jac.col(k) = (stack_residual(u, xp) - stack_residual(u, xm)) / (2.0 * step);
    }
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d jtr = jac.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 20; ++tries) {
      Eigen::Matrix3d a = jtj;
      a.diagonal() *= (1.0 + lambda);
      a.diagonal().array() += 1e-14;
      const Eigen::Vector3d dx = a.ldlt().solve(-jtr);
      const Eigen::Vector3d xn = x + dx;
      const auto rn = stack_residual(u, xn);
      const double cn = rn.squaredNorm();
      if (cn < cost) {
        x = xn;
        r = rn;
        cost = cn;
        lambda = std::max(lambda * 0.1, 1e-12);
        improved = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
  }
  return x;
}

// Best half-wave angle h for which e^{i phi} HWP(h) ~ m.
double extract_half_wave(const ComplexMat2& m) {
  const cplx z1 = 0.5 * (m(0, 0) - m(1, 1));
  const cplx z2 = 0.5 * (m(0, 1) + m(1, 0));
  const cplx ref = std::abs(z1) >= std::abs(z2) ? z1 : z2;
  const cplx unphase = std::abs(ref) > 0.0 ? std::conj(ref) / std::abs(ref) : cplx(1.0, 0.0);
  return 0.5 * std::atan2((z2 * unphase).real(), (z1 * unphase).real()) / kDeg;
}

}  // namespace

bool is_finite(const ComplexMat2& m) noexcept {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState() : amp_(cplx(1.0, 0.0), cplx(0.0, 0.0)) {}

PureState PureState::from_amplitudes(cplx c0, cplx c1) {
  const double n = std::sqrt(std::norm(c0) + std::norm(c1));
  if (!std::isfinite(n) || n < 1e-300) {
    throw Error(ErrorKind::InvalidInput, "pure state needs a nonzero finite amplitude vector");
  }
  c0 /= n;
  c1 /= n;
  // Gauge: rotate the global phase so the first non-negligible amplitude is real >= 0.
  const cplx lead = std::abs(c0) > 1e-15 ? c0 : c1;
  const cplx unphase = std::conj(lead) / std::abs(lead);
  c0 *= unphase;
  c1 *= unphase;
  if (std::abs(c0) > 1e-15) c0 = cplx(std::abs(c0), 0.0);
  else c1 = cplx(std::abs(c1), 0.0);
  return PureState(ComplexVec2(c0, c1));
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

// ---------------------------------------------------------------------------
// DensityMat

DensityMat::DensityMat(const ComplexMat2& m) : m_(m) {
  constexpr double tol = 1e-12;
  if (!is_finite(m)) throw Error(ErrorKind::InvalidInput, "density matrix has non-finite entries");
  if ((m - m.adjoint()).norm() > tol) throw Error(ErrorKind::InvalidInput, "density matrix is not Hermitian");
  if (std::abs(m.trace() - cplx(1.0, 0.0)) > tol) throw Error(ErrorKind::InvalidInput, "density matrix trace != 1");
  // For a Hermitian unit-trace 2x2 matrix, PSD <=> det >= 0.
  const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  const double lmin = 0.5 - std::sqrt(std::max(0.0, 0.25 - det));
  if (lmin < -tol) throw Error(ErrorKind::InvalidInput, "density matrix has a negative eigenvalue");
}

// ---------------------------------------------------------------------------
// WavePlateTriple

WavePlateTriple::WavePlateTriple(double quarter_first, double half, double quarter_second) {
  if (!std::isfinite(quarter_first) || !std::isfinite(half) || !std::isfinite(quarter_second)) {
    throw Error(ErrorKind::InvalidInput, "wave-plate angles must be finite");
  }
  q1_ = wrap_degrees(quarter_first);
  h_ = wrap_degrees(half);
  q2_ = wrap_degrees(quarter_second);
}

// ---------------------------------------------------------------------------

const ComplexMat2& pauli_x() {
  static const ComplexMat2 m = (ComplexMat2() << 0, 1, 1, 0).finished();
  return m;
}
const ComplexMat2& pauli_y() {
  static const ComplexMat2 m = (ComplexMat2() << 0, cplx(0, -1), cplx(0, 1), 0).finished();
  return m;
}
const ComplexMat2& pauli_z() {
  static const ComplexMat2 m = (ComplexMat2() << 1, 0, 0, -1).finished();
  return m;
}

DensityMat bloch_to_density(const BlochVector& b) {
  if (!std::isfinite(b.norm()) || b.norm() > 1.0 + 1e-9) {
    throw Error(ErrorKind::InvalidInput, "Bloch vector lies outside the unit ball");
  }
  ComplexMat2 m = ComplexMat2::Identity();
  m += b.x * pauli_x() + b.y * pauli_y() + b.z * pauli_z();
  return DensityMat(0.5 * m);
}

BlochVector density_to_bloch(const DensityMat& rho) {
  const auto& m = rho.matrix();
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

BlochVector state_to_bloch(const PureState& psi) {
  const cplx cross = std::conj(psi.c0()) * psi.c1();
  return {2.0 * cross.real(), 2.0 * cross.imag(), std::norm(psi.c0()) - std::norm(psi.c1())};
}

PureState bloch_to_state(const BlochVector& b) {
  const double n = b.norm();
  if (!std::isfinite(n) || n < 1e-300) {
    throw Error(ErrorKind::InvalidInput, "Bloch direction must be nonzero");
  }
  const double z = std::clamp(b.z / n, -1.0, 1.0);
  const double theta = std::acos(z);
  const double phi = std::atan2(b.y, b.x);
  return PureState::from_amplitudes(std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi));
}

ComplexMat2 projector(const PureState& psi) { return psi.vector() * psi.vector().adjoint(); }

PureState orthogonal_state(const PureState& psi) {
  return PureState::from_amplitudes(-std::conj(psi.c1()), std::conj(psi.c0()));
}

double overlap(const PureState& a, const PureState& b) {
  return std::norm(a.vector().dot(b.vector()));
}

PureState apply_unitary(const ComplexMat2& u, const PureState& psi) {
  const ComplexVec2 out = u * psi.vector();
  return PureState::from_amplitudes(out[0], out[1]);
}

ComplexMat2 hwp(double theta_deg) {
  const double t = 2.0 * theta_deg * kDeg;
  ComplexMat2 m;
  m << std::cos(t), std::sin(t), std::sin(t), -std::cos(t);
  return m;
}

ComplexMat2 qwp(double theta_deg) {
  const double t = theta_deg * kDeg;
  ComplexMat2 d = ComplexMat2::Zero();
  d(0, 0) = 1.0;
  d(1, 1) = cplx(0.0, 1.0);
  return rotation(t) * d * rotation(-t);
}

ComplexMat2 waveplates_to_unitary(const WavePlateTriple& w) {
  return stack_unitary(w.quarter_first(), w.half(), w.quarter_second());
}

WavePlateTriple unitary_to_waveplates(const ComplexMat2& u) {
  if (!is_finite(u) || !is_unitary(u, 1e-9)) {
    throw Error(ErrorKind::InvalidInput, "wave-plate decomposition needs a unitary matrix");
  }
  // The HWP in the middle must flip the circular axis (+y) to -y. With
  // Rq1^-1 (+y) = b and -Rq2 (+y) = u b both lying in the x-z plane, b must be
  // a direction in that plane that the target rotation keeps in that plane.
  const Eigen::Matrix3d rot = bloch_rotation(u);
  const Eigen::Vector3d ry = rot.row(1).transpose();
  Eigen::Vector3d b(ry.z(), 0.0, -ry.x());
  if (b.norm() < 1e-9) b = Eigen::Vector3d(0.0, 0.0, 1.0);  // rotation preserves the plane
  b.normalize();
  const Eigen::Vector3d rb = rot * b;
  // b has x-z angle 2 q1 + 90 degrees and rb has x-z angle 2 q2 + 90 degrees.
  const double q1 = 0.5 * (xz_angle_deg(b) - 90.0);
  const double q2 = 0.5 * (xz_angle_deg(rb) - 90.0);
  const ComplexMat2 middle = qwp(q2).adjoint() * u * qwp(q1).adjoint();
  const double h = extract_half_wave(middle);

  Eigen::Vector3d x(q1, h, q2);
  if (operator_distance(u, stack_unitary(q1, h, q2)) > 1e-12) x = polish(u, x);
  if (operator_distance(u, stack_unitary(x[0], x[1], x[2])) > 1e-10) {
    throw Error(ErrorKind::ConvergenceFailure, "wave-plate decomposition did not converge");
  }
  return WavePlateTriple(x[0], x[1], x[2]);
}

double operator_distance(const ComplexMat2& a, const ComplexMat2& b) {
  const cplx t = (b.adjoint() * a).trace();
  const cplx phase = std::abs(t) > 0.0 ? t / std::abs(t) : cplx(1.0, 0.0);
  return (a - phase * b).norm();
}

double frobenius_distance(const ComplexMat2& a, const ComplexMat2& b) { return (a - b).norm(); }

bool is_unitary(const ComplexMat2& u, double tol) {
  return (u.adjoint() * u - ComplexMat2::Identity()).norm() <= tol;
}

Eigen::Matrix3d bloch_rotation(const ComplexMat2& u) {
  const std::array<const ComplexMat2*, 3> s = {&pauli_x(), &pauli_y(), &pauli_z()};
  Eigen::Matrix3d r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r(i, j) = 0.5 * ((*s[i]) * u * (*s[j]) * u.adjoint()).trace().real();
  return r;
}

ComplexMat2 unitary_from_zero(const PureState& psi) {
  ComplexMat2 u;
  u << psi.c0(), -std::conj(psi.c1()), psi.c1(), std::conj(psi.c0());
  return u;
}

double bloch_angle_deg(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double c = a.dot(b) / (a.norm() * b.norm());
  return std::acos(std::clamp(c, -1.0, 1.0)) / kDeg;
}

}  // namespace restaurant
