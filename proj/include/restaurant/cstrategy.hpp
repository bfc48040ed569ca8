// SPDX-License-Identifier: Apache-2.0
//
// One-bit classical strategies. The sender table holds p(bit | closed
// restaurant), the receiver table p(visited restaurant | bit); composing the
// two gives a visit matrix.
#pragma once

#include <array>
#include <cstddef>

#include "restaurant/game.hpp"
#include "restaurant/simplex.hpp"

namespace restaurant {

using SenderTable = std::array<std::array<double, 2>, 3>;
using ReceiverTable = std::array<std::array<double, 3>, 2>;

struct ClassicalStrategy {
  SenderTable sender{};
  ReceiverTable receiver{};

  /// Throws InvalidInput unless both tables are row-stochastic within 1e-12.
  void validate() const;
};

/// Sender that sends bit 0 with probability zero_prob[i] when restaurant i is closed.
SenderTable sender_from_zero_probs(const std::array<double, 3>& zero_prob);

VisitMatrix visit_matrix(const ClassicalStrategy& cs);

/// Perfect strategy for a game on the hexagon's boundary (some gamma_i equal to
/// 0 or 2/3 within 1e-9). Throws NotWinnable otherwise.
ClassicalStrategy exact_winning_strategy(const Prob3& gamma);

/// Linear program over the receiver table for a fixed sender. Variables are
/// the six receiver entries (row-major by bit) followed by the index bound.
LpProblem build_inner_lp(const SenderTable& sender, const GameSpec& spec);

struct InnerLpResult {
  /// Quality index of the returned receiver composed with the sender.
  double eps = 0.0;
  /// Raw optimal value reported by the simplex.
  double lp_value = 0.0;
  ReceiverTable receiver{};
};

/// Best receiver for a fixed sender. Receiver rows for a bit that is never
/// sent are set to uniform.
InnerLpResult inner_lp(const SenderTable& sender, const GameSpec& spec);

struct OptimizeOptions {
  double grid_step = 0.02;
  int refine_rounds = 3;
  /// Worker threads for the grid scan; the result is independent of this.
  int threads = 1;
};

struct ClassicalOptimum {
  double eps_c = 0.0;
  ClassicalStrategy strategy;
  double grid_step = 0.0;
  int refine_rounds = 0;
  std::size_t lp_solves = 0;
};

/// Minimizes inner_lp over the sender grid {0, step, ..., 1}^3 and then
/// refines around the incumbent with halved steps. Ties go to the
/// lexicographically smallest grid point.
ClassicalOptimum optimize(const GameSpec& spec, const OptimizeOptions& options = {});

}  // namespace restaurant
