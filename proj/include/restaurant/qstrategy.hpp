// SPDX-License-Identifier: Apache-2.0
//
// Perfect qubit strategies. Alice encodes closed restaurant x as a pure state
// psi_x; Bob measures {lambda_y |psi_y^perp><psi_y^perp|} and visits y on
// outcome y, so restaurant x is never visited when it is closed.
//
// Synthesis works in a fixed frame: psi_1 on the Bloch north pole, psi_2 at
// polar angle theta_2 on the -x side of the x-z great circle and psi_3 at
// polar angle theta_3 on the +x side.
#pragma once

#include <array>
#include <string>

#include <Eigen/Core>

#include "restaurant/game.hpp"
#include "restaurant/qmath.hpp"

namespace restaurant {

struct QuantumStrategy {
  std::array<PureState, 3> encodings;
  std::array<double, 3> weights{};

  /// Builds a strategy from (not necessarily unit) Bloch directions.
  static QuantumStrategy from_bloch(const std::array<Eigen::Vector3d, 3>& encodings,
                                    const std::array<double, 3>& weights);

  /// Decoding effect for restaurant y.
  ComplexMat2 effect(int y) const;
  Eigen::Vector3d bloch(int x) const { return state_to_bloch(encodings[x]).vec(); }

  /// Throws InvalidInput when weights, completeness or coplanarity fail at 1e-9.
  void validate() const;
};

class SynthesisAngles {
 public:
  /// Requires theta_2, theta_3 in (0, pi) and theta_2 + theta_3 > pi.
  SynthesisAngles(double theta2, double theta3);
  double theta2() const noexcept { return t2_; }
  double theta3() const noexcept { return t3_; }

 private:
  double t2_;
  double t3_;
};

/// Effect weights making the canonical-frame states a complete measurement.
/// Throws DegenerateGeometry when theta_2 + theta_3 is within 1e-9 of pi or
/// the common denominator is below 1e-12.
std::array<double, 3> alphas_from_angles(const SynthesisAngles& ang);

/// Canonical-frame strategy for the given angles.
QuantumStrategy strategy_from_angles(const SynthesisAngles& ang);

/// Visiting distribution (uniform closure) by the Born rule.
Prob3 gamma_from_angles(const SynthesisAngles& ang);

/// Closed form for the first coordinate of gamma_from_angles.
double gamma1_closed_form(const SynthesisAngles& ang);

/// Tr[pi_y rho_x] without any validation; rows need not be stochastic.
Eigen::Matrix3d born_probabilities(const QuantumStrategy& s);

VisitMatrix born_visit_matrix(const QuantumStrategy& s);

/// Perfect strategy for any valid game (uniform closure prior). Throws
/// InvalidGame outside the hexagon, DegenerateGeometry for boundary games the
/// qubit frame cannot reach, ConvergenceFailure otherwise.
QuantumStrategy synthesize(const Prob3& gamma);

/// The angles found by synthesize for gamma.
SynthesisAngles synthesis_angles(const Prob3& gamma);

struct VerifyReport {
  double completeness_residual = 0.0;  // operator norm of sum_y pi_y - I
  double weight_sum_residual = 0.0;    // |sum lambda - 2|
  double min_weight = 0.0;
  double coplanarity_residual = 0.0;   // |n1 . (n2 x n3)|
  double h1_residual = 0.0;            // sum_x p(x|x)
  double distribution_residual = 0.0;  // max_y |p_y - gamma_y|
  double tolerance = 1e-9;
  bool pass = false;

  std::string summary() const;
};

VerifyReport verify(const QuantumStrategy& s, const Prob3& gamma);

}  // namespace restaurant
