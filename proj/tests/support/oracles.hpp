// SPDX-License-Identifier: Apache-2.0
//
// Test-side reference implementations. Nothing here calls into the library
// under test except for plain data types; every quantity is recomputed from
// first principles with the most direct method available.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using M2 = Eigen::Matrix2cd;
using V2 = Eigen::Vector2cd;
using P3 = std::array<double, 3>;
using Table = std::array<std::array<double, 3>, 3>;  // [closed][visited]

inline constexpr double kPi = std::numbers::pi;

inline M2 pauli(int k) {
  M2 m;
  if (k == 1) m << 0, 1, 1, 0;
  if (k == 2) m << 0, C(0, -1), C(0, 1), 0;
  if (k == 3) m << 1, 0, 0, -1;
  return m;
}

/// (I + r.sigma) / 2 written out entry by entry.
inline M2 density(const Eigen::Vector3d& r) {
  M2 m;
  m << (1.0 + r.z()) / 2.0, C(r.x(), -r.y()) / 2.0, C(r.x(), r.y()) / 2.0, (1.0 - r.z()) / 2.0;
  return m;
}

inline Eigen::Vector3d bloch_of(const V2& psi) {
  const V2 v = psi.normalized();
  const C c01 = std::conj(v(0)) * v(1);
  return {2.0 * c01.real(), 2.0 * c01.imag(), std::norm(v(0)) - std::norm(v(1))};
}

/// Retarder with fast axis at theta and retardance delta (Jones, no global phase fixing).
inline M2 retarder(double theta_deg, double delta) {
  const double t = theta_deg * kPi / 180.0;
  const double c = std::cos(t), s = std::sin(t);
  const C e = std::exp(C(0, delta));
  M2 m;
  m << c * c + e * s * s, (1.0 - e) * c * s, (1.0 - e) * c * s, s * s + e * c * c;
  return m;
}

/// Equality up to a global phase.
inline double phase_distance(const M2& a, const M2& b) {
  const C ip = (b.adjoint() * a).trace();
  const C ph = std::abs(ip) > 1e-300 ? ip / std::abs(ip) : C(1, 0);
  return (a - ph * b).cwiseAbs().maxCoeff();
}

inline double quality(const Table& p, const P3& gamma, double k1 = 1.0 / 3.0, double k2 = 1.0,
                      const P3& prior = {1.0 / 3, 1.0 / 3, 1.0 / 3}) {
  double diag = 0.0;
  for (int x = 0; x < 3; ++x) diag += p[x][x];
  double dev = 0.0;
  for (int y = 0; y < 3; ++y) {
    double py = 0.0;
    for (int x = 0; x < 3; ++x) py += prior[x] * p[x][y];
    dev = std::max(dev, std::fabs(py - gamma[y]));
  }
  return std::max(k1 * diag, k2 * dev);
}

/// Qubit prepare-and-measure: Tr[(w_y/2)(I - m_y.sigma) rho_x] from matrices.
inline Table born(const std::array<Eigen::Vector3d, 3>& states, const std::array<Eigen::Vector3d, 3>& anti_dirs,
                  const P3& weights) {
  Table t{};
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      const M2 effect = weights[y] * density(-anti_dirs[y].normalized());
      t[x][y] = (effect * density(states[x].normalized())).trace().real();
    }
  return t;
}

/// Minimum over a receiver grid (rows on the simplex with step 1/n) of the
/// index for a fixed sender; brute force, no LP.
inline double receiver_grid_min(const std::array<std::array<double, 2>, 3>& sender, const P3& gamma, int n) {
  std::vector<P3> rows;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) rows.push_back({double(i) / n, double(j) / n, double(n - i - j) / n});
  double best = 1e9;
  for (const P3& r0 : rows)
    for (const P3& r1 : rows) {
      Table p{};
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) p[x][y] = sender[x][0] * r0[y] + sender[x][1] * r1[y];
      best = std::min(best, quality(p, gamma));
    }
  return best;
}

/// Exact minimum of the index over receivers for a fixed sender by vertex
/// enumeration of the epigraph polyhedron in (r00, r01, r10, r11, t).
inline double receiver_vertex_min(const std::array<std::array<double, 2>, 3>& sender, const P3& gamma,
                                  double k1 = 1.0 / 3.0, double k2 = 1.0,
                                  const P3& prior = {1.0 / 3, 1.0 / 3, 1.0 / 3}) {
  using Row = Eigen::Matrix<double, 1, 5>;
  // p(x, y) as an affine function coef . z + off of the free variables.
  auto p_coef = [&](int x, int y, Row& coef, double& off) {
    coef.setZero();
    off = 0.0;
    for (int m = 0; m < 2; ++m) {
      const double s = sender[x][m];
      if (y < 2) {
        coef(2 * m + y) += s;
      } else {
        coef(2 * m) -= s;
        coef(2 * m + 1) -= s;
        off += s;
      }
    }
  };
  std::vector<Row> a;
  std::vector<double> b;
  Row coef;
  double off;
  // k1 sum_x p(x|x) <= t
  Row diag = Row::Zero();
  double diag_off = 0.0;
  for (int x = 0; x < 3; ++x) {
    p_coef(x, x, coef, off);
    diag += coef;
    diag_off += off;
  }
  Row r = k1 * diag;
  r(4) = -1.0;
  a.push_back(r);
  b.push_back(-k1 * diag_off);
  // +-k2 (gamma_y - p_y) <= t
  for (int y = 0; y < 3; ++y) {
    Row py = Row::Zero();
    double py_off = 0.0;
    for (int x = 0; x < 3; ++x) {
      p_coef(x, y, coef, off);
      py += prior[x] * coef;
      py_off += prior[x] * off;
    }
    for (int sign : {1, -1}) {
      Row q = -sign * k2 * py;
      q(4) = -1.0;
      a.push_back(q);
      b.push_back(-sign * k2 * (gamma[y] - py_off));
    }
  }
  // receiver entries non-negative
  for (int m = 0; m < 2; ++m) {
    for (int y = 0; y < 2; ++y) {
      Row q = Row::Zero();
      q(2 * m + y) = -1.0;
      a.push_back(q);
      b.push_back(0.0);
    }
    Row q = Row::Zero();
    q(2 * m) = 1.0;
    q(2 * m + 1) = 1.0;
    a.push_back(q);
    b.push_back(1.0);
  }
  const int n = static_cast<int>(a.size());
  double best = 1e9;
  int idx[5];
  for (idx[0] = 0; idx[0] < n; ++idx[0])
    for (idx[1] = idx[0] + 1; idx[1] < n; ++idx[1])
      for (idx[2] = idx[1] + 1; idx[2] < n; ++idx[2])
        for (idx[3] = idx[2] + 1; idx[3] < n; ++idx[3])
          for (idx[4] = idx[3] + 1; idx[4] < n; ++idx[4]) {
            Eigen::Matrix<double, 5, 5> m;
            Eigen::Matrix<double, 5, 1> rhs;
            for (int k = 0; k < 5; ++k) {
              m.row(k) = a[idx[k]];
              rhs(k) = b[idx[k]];
            }
            const auto lu = m.fullPivLu();
            if (lu.rank() < 5) continue;
            const Eigen::Matrix<double, 5, 1> z = lu.solve(rhs);
            bool ok = z(4) < best;
            for (int k = 0; ok && k < n; ++k) ok = a[k].dot(z) <= b[k] + 1e-10;
            if (ok) best = z(4);
          }
  return best;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double a = 0.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(gen); }
  double normal() { return std::normal_distribution<double>()(gen); }
  Eigen::Vector3d unit() {
    Eigen::Vector3d v(normal(), normal(), normal());
    return v.normalized();
  }
  /// Haar-ish random SU(2).
  M2 su2() {
    Eigen::Vector4d q(normal(), normal(), normal(), normal());
    q.normalize();
    M2 u;
    u << C(q(0), q(1)), C(q(2), q(3)), C(-q(2), q(3)), C(q(0), -q(1));
    return u;
  }
  /// Uniform point on the probability simplex.
  P3 simplex() {
    std::exponential_distribution<double> e(1.0);
    const double a = e(gen), b = e(gen), c = e(gen), s = a + b + c;
    return {a / s, b / s, c / s};
  }
};

}  // namespace oracle
