// SPDX-License-Identifier: Apache-2.0
//
// Three-restaurant games: target visiting distributions, visit matrices and
// the quality index that scores a strategy against a game.
//
// Restaurant labels are 0-based in code (0, 1, 2) and 1-based in every file
// format and CLI message.
#pragma once

#include <Eigen/Core>

#include <array>
#include <string>

namespace restaurant {

using Prob3 = std::array<double, 3>;

inline constexpr Prob3 kUniform = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

/// Checks entries >= -tol and |sum - 1| <= tol.
bool is_probability(const Prob3& p, double tol = 1e-12);

/// Accepts user-supplied probabilities that are off by at most 1e-6 in their
/// sum and renormalizes them; larger deviations or negative entries throw
/// InvalidInput. When renormalization happened and `warning` is non-null it
/// receives a human-readable note.
Prob3 normalize_user_probabilities(const Prob3& p, std::string* warning = nullptr);

struct GameSpec {
  Prob3 gamma = kUniform;
  double k1 = 1.0 / 3.0;
  double k2 = 1.0;
  Prob3 prior = kUniform;

  /// Throws InvalidInput when an invariant fails.
  void validate() const;

  static GameSpec make(const Prob3& gamma, double k1 = 1.0 / 3.0, double k2 = 1.0,
                       const Prob3& prior = kUniform);
};

/// Row-stochastic p(y|x): row = closed restaurant, column = visited one.
class VisitMatrix {
 public:
  VisitMatrix();  // all rows uniform
  /// Throws InvalidInput unless entries are in [0, 1] and rows sum to 1,
  /// both within 1e-9.
  explicit VisitMatrix(const Eigen::Matrix3d& m);

  double operator()(int closed, int visited) const { return m_(closed, visited); }
  const Eigen::Matrix3d& matrix() const noexcept { return m_; }

 private:
  Eigen::Matrix3d m_;
};

bool is_valid_game(const Prob3& gamma, double tol = 1e-9);
bool classically_winnable(const Prob3& gamma, double tol);

Prob3 visiting_probs(const VisitMatrix& v, const Prob3& prior = kUniform);

/// max{ k1 * sum_x p(x|x), k2 * max_y |gamma_y - p_y| }.
double quality_index(const VisitMatrix& v, const GameSpec& spec);

/// (sum_y sqrt(gamma_y p_y))^2.
double statistical_overlap(const Prob3& gamma, const Prob3& p);

/// The eight zero-diagonal deterministic visit matrices, in the published order.
std::array<VisitMatrix, 8> extreme_visit_matrices();

/// Visiting distributions of extreme_visit_matrices()[0..5] under a uniform prior.
std::array<Prob3, 6> extreme_gammas();

/// Parameter of the experiment-selection curve, a in [-1, 1].
class CurveParam {
 public:
  explicit CurveParam(double a);
  double value() const noexcept { return a_; }

 private:
  double a_;
};

Prob3 curve_gamma(CurveParam a);

/// Bisection on the first coordinate of the curve, then a check of the whole
/// triple against tol (max-norm). Throws NotOnCurve otherwise.
CurveParam curve_invert(const Prob3& gamma, double tol);

/// Relabels restaurants: result[perm[i]] = p[i].
Prob3 permute(const Prob3& p, const std::array<int, 3>& perm);
VisitMatrix permute(const VisitMatrix& v, const std::array<int, 3>& perm);

}  // namespace restaurant
