// SPDX-License-Identifier: Apache-2.0
#include "restaurant/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "restaurant/error.hpp"

namespace restaurant {

namespace {

void require_finite(const Prob3& p, const char* what) {
  for (double v : p) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, std::string(what) + " has non-finite entries");
  }
}

}  // namespace

bool is_probability(const Prob3& p, double tol) {
  double s = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < -tol) return false;
    s += v;
  }
  return std::abs(s - 1.0) <= tol;
}

Prob3 normalize_user_probabilities(const Prob3& p, std::string* warning) {
  require_finite(p, "probability vector");
  double s = 0.0;
  for (double v : p) {
    if (v < 0.0) throw Error(ErrorKind::InvalidInput, "probabilities must be non-negative");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-6) {
    std::ostringstream os;
    os << "probabilities sum to " << s << ", expected 1 within 1e-6";
    throw Error(ErrorKind::InvalidInput, os.str());
  }
  if (std::abs(s - 1.0) <= 1e-15) return p;
  if (warning != nullptr) {
    std::ostringstream os;
    os.precision(17);
    os << "renormalized probabilities (sum was " << s << ")";
    *warning = os.str();
  }
  return {p[0] / s, p[1] / s, p[2] / s};
}

void GameSpec::validate() const {
  if (!is_probability(gamma, 1e-12)) throw Error(ErrorKind::InvalidInput, "gamma must be a probability vector");
  if (!is_probability(prior, 1e-12)) throw Error(ErrorKind::InvalidInput, "closure prior must be a probability vector");
  if (!(k1 > 0.0) || !(k2 > 0.0) || !std::isfinite(k1) || !std::isfinite(k2)) {
    throw Error(ErrorKind::InvalidInput, "penalty weights k1, k2 must be positive");
  }
}

GameSpec GameSpec::make(const Prob3& gamma, double k1, double k2, const Prob3& prior) {
  GameSpec s{gamma, k1, k2, prior};
  s.validate();
  return s;
}

VisitMatrix::VisitMatrix() : m_(Eigen::Matrix3d::Constant(1.0 / 3.0)) {}

VisitMatrix::VisitMatrix(const Eigen::Matrix3d& m) : m_(m) {
  constexpr double tol = 1e-9;
  for (int x = 0; x < 3; ++x) {
    double s = 0.0;
    for (int y = 0; y < 3; ++y) {
      const double v = m(x, y);
      if (!std::isfinite(v) || v < -tol || v > 1.0 + tol) {
        throw Error(ErrorKind::InvalidInput, "visit matrix entries must lie in [0, 1]");
      }
      s += v;
    }
    if (std::abs(s - 1.0) > tol) throw Error(ErrorKind::InvalidInput, "visit matrix rows must sum to 1");
  }
}

bool is_valid_game(const Prob3& gamma, double tol) {
  if (!is_probability(gamma, std::max(tol, 1e-12))) return false;
  return *std::max_element(gamma.begin(), gamma.end()) <= 2.0 / 3.0 + tol;
}

bool classically_winnable(const Prob3& gamma, double tol) {
  double best = std::numeric_limits<double>::infinity();
  for (double g : gamma) best = std::min({best, std::abs(g), std::abs(g - 2.0 / 3.0)});
  return best <= tol;
}

Prob3 visiting_probs(const VisitMatrix& v, const Prob3& prior) {
  Prob3 p{};
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x) p[y] += v(x, y) * prior[x];
  return p;
}

double quality_index(const VisitMatrix& v, const GameSpec& spec) {
  const double h1 = spec.k1 * (v(0, 0) + v(1, 1) + v(2, 2));
  const Prob3 p = visiting_probs(v, spec.prior);
  double h2 = 0.0;
  for (int y = 0; y < 3; ++y) h2 = std::max(h2, spec.k2 * std::abs(spec.gamma[y] - p[y]));
  return std::max(h1, h2);
}

double statistical_overlap(const Prob3& gamma, const Prob3& p) {
  double s = 0.0;
  for (int y = 0; y < 3; ++y) s += std::sqrt(std::max(0.0, gamma[y]) * std::max(0.0, p[y]));
  return std::min(1.0, s * s);
}

std::array<VisitMatrix, 8> extreme_visit_matrices() {
  // Column index of the visited restaurant for each closed restaurant.
  constexpr int kTargets[8][3] = {
      {1, 0, 0}, {1, 0, 1}, {1, 2, 1}, {2, 2, 1}, {2, 0, 0}, {2, 2, 0}, {2, 0, 1}, {1, 2, 0},
  };
  std::array<VisitMatrix, 8> out;
  for (int k = 0; k < 8; ++k) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    for (int x = 0; x < 3; ++x) m(x, kTargets[k][x]) = 1.0;
    out[k] = VisitMatrix(m);
  }
  return out;
}

std::array<Prob3, 6> extreme_gammas() {
  const auto mats = extreme_visit_matrices();
  std::array<Prob3, 6> out;
  for (int k = 0; k < 6; ++k) out[k] = visiting_probs(mats[k]);
  return out;
}

CurveParam::CurveParam(double a) : a_(a) {
  if (!std::isfinite(a) || a < -1.0 || a > 1.0) {
    throw Error(ErrorKind::InvalidInput, "curve parameter must lie in [-1, 1]");
  }
}

Prob3 curve_gamma(CurveParam param) {
  const double a = param.value();
  const double a2 = a * a;
  return {(-a2 + a + 4.0) / (12.0 - 6.0 * a), 2.0 * (a2 - 2.0) / (3.0 * (a2 - 4.0)),
          -(a2 + a - 4.0) / (6.0 * (a + 2.0))};
}

CurveParam curve_invert(const Prob3& gamma, double tol) {
  // gamma_1(a) increases from 1/9 to 2/3 on [-1, 1].
  const auto g1 = [](double a) { return curve_gamma(CurveParam(a))[0]; };
  double lo = -1.0;
  double hi = 1.0;
  const double target = gamma[0];
  if (target < g1(lo) - tol || target > g1(hi) + tol) {
    throw Error(ErrorKind::NotOnCurve, "first coordinate is outside the curve's range");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g1(mid) < target) lo = mid;
    else hi = mid;
  }
  const CurveParam a(std::clamp(0.5 * (lo + hi), -1.0, 1.0));
  const Prob3 back = curve_gamma(a);
  for (int i = 0; i < 3; ++i) {
    if (std::abs(back[i] - gamma[i]) > tol) {
      throw Error(ErrorKind::NotOnCurve, "no curve parameter reproduces the requested game");
    }
  }
  return a;
}

Prob3 permute(const Prob3& p, const std::array<int, 3>& perm) {
  Prob3 out{};
  for (int i = 0; i < 3; ++i) out[perm[i]] = p[i];
  return out;
}

VisitMatrix permute(const VisitMatrix& v, const std::array<int, 3>& perm) {
  Eigen::Matrix3d m;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) m(perm[x], perm[y]) = v(x, y);
  return VisitMatrix(m);
}

}  // namespace restaurant
