// SPDX-License-Identifier: Apache-2.0
//
// Seeded Monte-Carlo model of the photonic experiment. Every random draw is a
// pure function of (seed, stream, counter), so results do not depend on
// evaluation order or thread count.
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>

#include <Eigen/Core>

#include "restaurant/game.hpp"
#include "restaurant/polarimeter.hpp"
#include "restaurant/qstrategy.hpp"

namespace restaurant {

struct NoiseModel {
  /// rho -> (1 - eps) rho + eps I/2 on every encoded state.
  double depolarizing = 0.0;
  /// Standard deviation (degrees) of a Gaussian offset drawn once per run
  /// for every wave-plate angle.
  double angle_jitter_deg = 0.0;

  void validate() const;
};

struct ExperimentConfig {
  std::uint64_t shots = 4800;
  std::uint64_t seed = 0;
  Prob3 prior = kUniform;
  int bootstrap_resamples = 1000;

  void validate() const;
};

/// Polarimeter settings together with the encoded states it decodes. The
/// states are prepared by wave-plate triples acting on |H>.
struct OpticalStrategy {
  PolarimeterConfig config;
  std::array<PureState, 3> encodings;

  static OpticalStrategy compile_from(const QuantumStrategy& s);
};

using Strategy = std::variant<QuantumStrategy, OpticalStrategy>;

using Counts = std::array<std::array<std::uint64_t, 3>, 3>;  // [closed][visited]

struct ExperimentResult {
  Counts counts{};
  /// Row-normalized counts; rows that were never sampled are zero.
  Eigen::Matrix3d visit_estimate = Eigen::Matrix3d::Zero();
  Prob3 p_hat{};
  double overlap_f = 0.0;
  double eps_q = 0.0;
  double eps_q_stderr = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;
  NoiseModel noise;
  int bootstrap_resamples = 0;
  /// Probability (per closed restaurant) that a photon hit the light dump
  /// and was discarded; non-zero only with jitter on an optical strategy.
  Prob3 dump_fraction{};
};

/// Visit-matrix estimate from counts: rows normalized, p_hat weighted by the
/// prior renormalized over sampled rows.
struct CountStatistics {
  Eigen::Matrix3d visit_estimate = Eigen::Matrix3d::Zero();
  Prob3 p_hat{};
  double eps = 0.0;
};
CountStatistics count_statistics(const Counts& counts, const GameSpec& spec);

/// Standard deviation of the quality index over multinomial row resamples.
double bootstrap_stderr(const Counts& counts, const GameSpec& spec, int resamples, std::uint64_t seed);

ExperimentResult simulate(const GameSpec& spec, const Strategy& strategy, const NoiseModel& noise,
                          const ExperimentConfig& cfg);

/// Infinite-shot visit matrix under depolarizing noise; jitter must be zero.
VisitMatrix expected_visit_matrix(const Strategy& strategy, const NoiseModel& noise);

double quality_under_depolarizing(const Strategy& strategy, const GameSpec& spec, double eps);

/// sup{eps in [0, 1] : quality_under_depolarizing(eps) < eps_c}, bisected to
/// 1e-7. Throws NoAdvantage when eps_c does not exceed the noiseless index.
double advantage_threshold(const GameSpec& spec, const Strategy& strategy, double eps_c);

/// Closed-form slope max{k1, k2 max_y |lambda_y/2 - gamma_y|} for a perfect strategy.
double depolarizing_slope(const QuantumStrategy& s, const GameSpec& spec);

void write_counts_csv(std::ostream& os, const Counts& counts);
/// Reads "closed,visited,count" rows with 1-based labels; repeated pairs add up.
Counts read_counts_csv(std::istream& is);

namespace rng {
/// Uniform double in [0, 1) determined by (seed, stream, counter).
double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);
/// Standard normal via Box-Muller on two counter draws.
double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);
/// Binomial(n, p) by inversion over outcomes ordered outward from the mode.
std::uint64_t binomial(std::uint64_t n, double p, double u);
}  // namespace rng

}  // namespace restaurant
