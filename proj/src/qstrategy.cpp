// SPDX-License-Identifier: Apache-2.0
#include "restaurant/qstrategy.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "restaurant/error.hpp"

namespace restaurant {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-9;

bool angles_feasible(double t2, double t3) {
  return t2 > 0.0 && t2 < kPi && t3 > 0.0 && t3 < kPi && t2 + t3 > kPi + 1e-9;
}

double denominator(double t2, double t3) { return std::sin(t2 + t3) - std::sin(t2) - std::sin(t3); }

// Same Born-rule quantity as gamma_from_angles, written out on Bloch vectors
// for the inner solver loop: p(y|x) = alpha_y (1 - n_y . n_x) / 2.
Prob3 fast_gamma(double t2, double t3) {
  const double d = denominator(t2, t3);
  const std::array<double, 3> a = {2.0 * std::sin(t2 + t3) / d, -2.0 * std::sin(t3) / d, -2.0 * std::sin(t2) / d};
  const std::array<Eigen::Vector3d, 3> n = {Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(-std::sin(t2), 0, std::cos(t2)),
                                            Eigen::Vector3d(std::sin(t3), 0, std::cos(t3))};
  Prob3 g{};
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x)
      if (x != y) g[y] += a[y] * (1.0 - n[y].dot(n[x])) / 6.0;
  return g;
}

Eigen::Vector2d residual(double t2, double t3, const Prob3& target) {
  const Prob3 g = fast_gamma(t2, t3);
  return {g[0] - target[0], g[1] - target[1]};
}

struct Solve {
  double t2 = 0.0;
  double t3 = 0.0;
  double res = std::numeric_limits<double>::infinity();
};

// Damped Newton with a central-difference Jacobian; steps are halved until
// they stay inside the feasible triangle and reduce the residual.
Solve newton(double t2, double t3, const Prob3& target) {
  Eigen::Vector2d r = residual(t2, t3, target);
  double rn = r.lpNorm<Eigen::Infinity>();
  for (int iter = 0; iter < 100 && rn > 1e-15; ++iter) {
    constexpr double h = 1e-7;
    Eigen::Matrix2d j;
    const double h2 = std::min({h, t2 * 0.5, (kPi - t2) * 0.5, (t2 + t3 - kPi) * 0.25});
    const double h3 = std::min({h, t3 * 0.5, (kPi - t3) * 0.5, (t2 + t3 - kPi) * 0.25});
    j.col(0) = (residual(t2 + h2, t3, target) - residual(t2 - h2, t3, target)) / (2 * h2);
    j.col(1) = (residual(t2, t3 + h3, target) - residual(t2, t3 - h3, target)) / (2 * h3);
    const Eigen::Vector2d step = j.fullPivLu().solve(-r);
    if (!step.allFinite()) break;
    double t = 1.0;
    bool moved = false;
    for (int k = 0; k < 40; ++k, t *= 0.5) {
      const double n2 = t2 + t * step.x();
      const double n3 = t3 + t * step.y();
      if (!angles_feasible(n2, n3)) continue;
      const Eigen::Vector2d nr = residual(n2, n3, target);
      const double nn = nr.lpNorm<Eigen::Infinity>();
      if (nn < rn) {
        t2 = n2;
        t3 = n3;
        r = nr;
        rn = nn;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return {t2, t3, rn};
}

Solve solve_angles(const Prob3& gamma) {
  struct Start {
    double res;
    double t2;
    double t3;
  };
  constexpr int kGrid = 200;
  std::vector<Start> starts;
  for (int i = 0; i < kGrid; ++i) {
    for (int k = 0; k < kGrid; ++k) {
      const double t2 = (i + 0.5) * kPi / kGrid;
      const double t3 = (k + 0.5) * kPi / kGrid;
      if (!angles_feasible(t2, t3)) continue;
      starts.push_back({residual(t2, t3, gamma).lpNorm<Eigen::Infinity>(), t2, t3});
    }
  }
  const std::size_t tries = std::min<std::size_t>(8, starts.size());
  std::partial_sort(starts.begin(), starts.begin() + tries, starts.end(), [](const Start& a, const Start& b) {
    return a.res < b.res || (a.res == b.res && (a.t2 < b.t2 || (a.t2 == b.t2 && a.t3 < b.t3)));
  });
  Solve best;
  for (std::size_t s = 0; s < tries; ++s) {
    const Solve sol = newton(starts[s].t2, starts[s].t3, gamma);
    if (sol.res < best.res) best = sol;
    if (best.res <= 1e-13) break;
  }
  return best;
}

double operator_norm_hermitian(const ComplexMat2& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMat2> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

ComplexMat2 completeness_defect(const QuantumStrategy& s) {
  ComplexMat2 sum = ComplexMat2::Zero();
  for (int y = 0; y < 3; ++y) sum += s.effect(y);
  return sum - ComplexMat2::Identity();
}

double triple_product(const QuantumStrategy& s) { return std::abs(s.bloch(0).dot(s.bloch(1).cross(s.bloch(2)))); }

Prob3 check_game(const Prob3& gamma) {
  for (double g : gamma)
    if (!std::isfinite(g)) throw Error(ErrorKind::InvalidInput, "gamma must be finite");
  if (!is_probability(gamma, kTol)) throw Error(ErrorKind::InvalidInput, "gamma must be a probability vector");
  if (!is_valid_game(gamma)) throw Error(ErrorKind::InvalidGame, "gamma lies outside the valid hexagon (max > 2/3)");
  return gamma;
}

}  // namespace

QuantumStrategy QuantumStrategy::from_bloch(const std::array<Eigen::Vector3d, 3>& encodings,
                                            const std::array<double, 3>& weights) {
  QuantumStrategy s;
  for (int i = 0; i < 3; ++i) {
    const double n = encodings[i].norm();
    if (!std::isfinite(n) || n < 1e-12) throw Error(ErrorKind::InvalidInput, "encoding Bloch vector must be nonzero");
    s.encodings[i] = bloch_to_state(BlochVector::from(encodings[i] / n));
    if (!std::isfinite(weights[i])) throw Error(ErrorKind::InvalidInput, "weights must be finite");
  }
  s.weights = weights;
  return s;
}

ComplexMat2 QuantumStrategy::effect(int y) const { return weights[y] * projector(orthogonal_state(encodings[y])); }

void QuantumStrategy::validate() const {
  for (double w : weights)
    if (!(w > 0.0)) throw Error(ErrorKind::InvalidInput, "effect weights must be positive");
  if (std::abs(weights[0] + weights[1] + weights[2] - 2.0) > kTol) {
    throw Error(ErrorKind::InvalidInput, "effect weights must sum to 2");
  }
  if (operator_norm_hermitian(completeness_defect(*this)) > kTol) {
    throw Error(ErrorKind::InvalidInput, "decoding effects do not sum to the identity");
  }
  if (triple_product(*this) > kTol) throw Error(ErrorKind::InvalidInput, "encodings are not coplanar");
}

SynthesisAngles::SynthesisAngles(double theta2, double theta3) : t2_(theta2), t3_(theta3) {
  if (!std::isfinite(theta2) || !std::isfinite(theta3) || theta2 <= 0.0 || theta2 >= kPi || theta3 <= 0.0 ||
      theta3 >= kPi || theta2 + theta3 <= kPi) {
    throw Error(ErrorKind::InvalidInput, "angles need theta2, theta3 in (0, pi) with theta2 + theta3 > pi");
  }
}

std::array<double, 3> alphas_from_angles(const SynthesisAngles& ang) {
  const double t2 = ang.theta2();
  const double t3 = ang.theta3();
  const double d = denominator(t2, t3);
  if (t2 + t3 - kPi <= 1e-9 || std::abs(d) < 1e-12) {
    throw Error(ErrorKind::DegenerateGeometry, "encodings are collinear; effect weights are undefined");
  }
  return {2.0 * std::sin(t2 + t3) / d, -2.0 * std::sin(t3) / d, -2.0 * std::sin(t2) / d};
}

QuantumStrategy strategy_from_angles(const SynthesisAngles& ang) {
  const double t2 = ang.theta2();
  const double t3 = ang.theta3();
  QuantumStrategy s;
  s.weights = alphas_from_angles(ang);
  s.encodings[0] = PureState();
  s.encodings[1] = bloch_to_state({-std::sin(t2), 0.0, std::cos(t2)});
  s.encodings[2] = bloch_to_state({std::sin(t3), 0.0, std::cos(t3)});
  return s;
}

Prob3 gamma_from_angles(const SynthesisAngles& ang) {
  const Eigen::Matrix3d p = born_probabilities(strategy_from_angles(ang));
  Prob3 g{};
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x)
      if (x != y) g[y] += p(x, y) / 3.0;
  return g;
}

double gamma1_closed_form(const SynthesisAngles& ang) {
  const double t2 = ang.theta2();
  const double t3 = ang.theta3();
  const double d = denominator(t2, t3);
  if (t2 + t3 - kPi <= 1e-9 || std::abs(d) < 1e-12) {
    throw Error(ErrorKind::DegenerateGeometry, "encodings are collinear; effect weights are undefined");
  }
  return std::sin(t2 + t3) * (2.0 - std::cos(t2) - std::cos(t3)) / (3.0 * d);
}

Eigen::Matrix3d born_probabilities(const QuantumStrategy& s) {
  Eigen::Matrix3d p;
  for (int y = 0; y < 3; ++y) {
    const ComplexMat2 e = s.effect(y);
    for (int x = 0; x < 3; ++x) {
      const ComplexVec2& v = s.encodings[x].vector();
      p(x, y) = (v.adjoint() * e * v)(0, 0).real();
    }
  }
  return p;
}

VisitMatrix born_visit_matrix(const QuantumStrategy& s) {
  Eigen::Matrix3d p = born_probabilities(s);
  // Clear rounding-level negatives so the result is exactly stochastic-valid.
  for (int i = 0; i < 9; ++i)
    if (p.data()[i] < 0.0 && p.data()[i] > -1e-12) p.data()[i] = 0.0;
  return VisitMatrix(p);
}

SynthesisAngles synthesis_angles(const Prob3& gamma) {
  check_game(gamma);
  const Solve sol = solve_angles(gamma);
  const bool boundary = classically_winnable(gamma, kTol);
  if (boundary) {
    if (!(sol.res <= 1e-6)) {
      throw Error(ErrorKind::DegenerateGeometry,
                  "boundary game needs a vanishing effect weight the qubit frame cannot reach; "
                  "use a classical exact strategy");
    }
  } else if (!(sol.res <= 1e-10)) {
    throw Error(ErrorKind::ConvergenceFailure, "angle solve stalled at residual " + std::to_string(sol.res));
  }
  return SynthesisAngles(sol.t2, sol.t3);
}

QuantumStrategy synthesize(const Prob3& gamma) {
  const QuantumStrategy s = strategy_from_angles(synthesis_angles(gamma));
  const bool boundary = classically_winnable(gamma, kTol);
  const double eps = quality_index(born_visit_matrix(s), GameSpec::make(gamma));
  if (eps > (boundary ? 1e-6 : 1e-9)) {
    throw Error(boundary ? ErrorKind::DegenerateGeometry : ErrorKind::ConvergenceFailure,
                "synthesized strategy misses the game by " + std::to_string(eps));
  }
  return s;
}

VerifyReport verify(const QuantumStrategy& s, const Prob3& gamma) {
  VerifyReport r;
  r.completeness_residual = operator_norm_hermitian(completeness_defect(s));
  r.weight_sum_residual = std::abs(s.weights[0] + s.weights[1] + s.weights[2] - 2.0);
  r.min_weight = std::min({s.weights[0], s.weights[1], s.weights[2]});
  r.coplanarity_residual = triple_product(s);
  const Eigen::Matrix3d p = born_probabilities(s);
  r.h1_residual = std::abs(p.trace());
  for (int y = 0; y < 3; ++y) {
    const double py = p.col(y).sum() / 3.0;
    r.distribution_residual = std::max(r.distribution_residual, std::abs(py - gamma[y]));
  }
  const double t = r.tolerance;
  r.pass = r.min_weight > 0.0 && r.completeness_residual <= t && r.weight_sum_residual <= t &&
           r.coplanarity_residual <= t && r.h1_residual <= t && r.distribution_residual <= t;
  return r;
}

std::string VerifyReport::summary() const {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific;
  const auto line = [&](const char* name, double v) {
    os << "  " << name << ": " << v << (v <= tolerance ? "  ok" : "  FAIL") << '\n';
  };
  line("completeness", completeness_residual);
  line("weight sum", weight_sum_residual);
  line("coplanarity", coplanarity_residual);
  line("h1", h1_residual);
  line("distribution", distribution_residual);
  os << "  min weight: " << min_weight << (min_weight > 0.0 ? "  ok" : "  FAIL") << '\n';
  os << (pass ? "PASS" : "FAIL") << '\n';
  return os.str();
}

}  // namespace restaurant
