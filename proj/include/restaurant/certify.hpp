// SPDX-License-Identifier: Apache-2.0
//
// Nonclassicality certificates from observed counts, and the explicit
// classical simulations of the two restricted quantum families (orthogonal
// encodings, projective decoding) that can never beat the classical optimum.
#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "restaurant/cstrategy.hpp"
#include "restaurant/experiment.hpp"
#include "restaurant/qmath.hpp"

namespace restaurant {

struct CertifyOptions {
  double z = 3.0;
  int bootstrap_resamples = 1000;
  std::uint64_t bootstrap_seed = 0;
  OptimizeOptions optimize;
};

struct Certificate {
  GameSpec game;
  Counts counts{};
  double z = 3.0;
  int bootstrap_resamples = 0;
  std::uint64_t bootstrap_seed = 0;
  double eps_v = 0.0;
  double eps_v_stderr = 0.0;
  double eps_c = 0.0;
  double grid_step = 0.0;
  int refine_rounds = 0;
  double margin = 0.0;  // eps_c - eps_v
  bool pass = false;
  /// Separation in bootstrap standard errors, margin / stderr.
  double sigmas = 0.0;
  std::string confidence_note;
};

/// Throws EmptyRow when a closed restaurant has no counts and InvalidInput
/// for a bad z.
Certificate certify(const Counts& counts, const GameSpec& spec, const CertifyOptions& options = {});

/// Same, against a classical optimum computed elsewhere.
Certificate certify(const Counts& counts, const GameSpec& spec, const ClassicalOptimum& classical,
                    const CertifyOptions& options = {});

/// Three encoded states and a three-outcome decoding measurement.
struct PrepareMeasure {
  std::array<ComplexMat2, 3> states;
  std::array<ComplexMat2, 3> effects;
  /// Columns are the fixed basis {|0>, |1>} of the restricted form.
  ComplexMat2 basis = ComplexMat2::Identity();

  /// p(k|i) = Tr[M_k rho_i]; throws InvalidInput for invalid states or effects.
  VisitMatrix visit_matrix() const;
};

enum class SimulationKind { OrthogonalEncoding, ProjectiveDecoding };

/// Classical one-bit strategy with the same visit matrix: Alice sends j with
/// probability <j|rho_i|j>, Bob visits k with probability <j|M_k|j>. Throws
/// NotApplicable unless the states (orthogonal encoding) or the effects
/// (projective decoding) are diagonal in `basis` within 1e-12.
ClassicalStrategy classical_simulation_oracle(SimulationKind kind, const PrepareMeasure& pm);

}  // namespace restaurant
