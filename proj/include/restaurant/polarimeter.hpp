// SPDX-License-Identifier: Apache-2.0
//
// Variational triangular polarimeter. A photon passes the gate U4, then a
// partially polarizing beam splitter (PPBS) that transmits all of H and a
// fraction f of V. The transmitted arm goes through U2 and a PBS onto
// detectors 0 (H) and 1 (V); the reflected arm goes through U3 and a PBS whose
// H output is detector 2 and whose V output is terminated in a light dump.
//
// With D = diag(1, sqrt f):
//   pi_k  = U4^dag D U2^dag |k><k| U2 D U4,            k = 0, 1
//   pi_2  = (1 - f) |<0|U3|1>|^2 U4^dag |1><1| U4
//   dump  = (1 - f) |<1|U3|1>|^2 U4^dag |1><1| U4
#pragma once

#include <array>
#include <vector>

#include "restaurant/qmath.hpp"
#include "restaurant/qstrategy.hpp"

namespace restaurant {

/// Which reflected-arm PBS output is terminated.
enum class DumpPort { ReflectedV, ReflectedH };

struct PolarimeterConfig {
  double f = 1.0;
  WavePlateTriple u2;
  WavePlateTriple u3{0.0, 45.0, 0.0};  // bit flip: reflected light all reaches detector 2
  WavePlateTriple u4;
  /// routing[d] is the 0-based restaurant reported when detector d clicks.
  std::array<int, 3> routing = {0, 1, 2};
  DumpPort dump = DumpPort::ReflectedV;

  /// Throws InvalidInput for f outside [0, 1] or a non-bijective routing.
  void validate() const;
};

struct OpticalEffects {
  std::array<ComplexMat2, 3> detector;  // indexed by detector
  ComplexMat2 dump;
};

OpticalEffects forward_detector_effects(const PolarimeterConfig& cfg);

/// Effects indexed by restaurant (routing applied).
std::array<ComplexMat2, 3> forward_effects(const PolarimeterConfig& cfg);

struct Rank1Effect {
  double weight = 0.0;
  PureState direction;

  ComplexMat2 op() const { return weight * projector(direction); }
};

/// Three weighted rank-1 effects. Zero weights are allowed so that two-outcome
/// projective measurements can be padded to three outcomes.
class Rank1Povm {
 public:
  /// Throws InvalidPovm unless weights are >= 0, sum to 2 and the effects sum
  /// to the identity, all within 1e-9.
  explicit Rank1Povm(const std::array<Rank1Effect, 3>& effects);

  /// The decoding measurement of a qubit strategy.
  static Rank1Povm from_strategy(const QuantumStrategy& s);

  const Rank1Effect& operator[](int i) const { return effects_[i]; }
  std::array<ComplexMat2, 3> ops() const;

 private:
  std::array<Rank1Effect, 3> effects_;
};

/// Compiles with the minimum-weight effect (lowest index on ties) on the
/// reflected port.
PolarimeterConfig compile(const Rank1Povm& povm);

/// Compiles with effect `reflected` on the reflected port; its weight must not
/// exceed 1. A unit weight gives f = 0, handled by assigning the two
/// transmitted effects directly (they are then parallel); DegenerateSplit if
/// they are not.
PolarimeterConfig compile(const Rank1Povm& povm, int reflected);

struct MixtureEntry {
  double probability = 0.0;
  PolarimeterConfig config;
  /// labels[k] is the index of the input element that restaurant slot k of
  /// this config contributes to. Several slots may share a label.
  std::array<int, 3> labels{};
};

struct GeneralCompilation {
  std::vector<MixtureEntry> entries;

  /// Probability-weighted recombination of every entry's effects per label.
  std::vector<ComplexMat2> recovered(std::size_t elements) const;
};

/// Mixture of rank-1 three-outcome configurations reproducing an arbitrary
/// POVM. Throws InvalidPovm for non-PSD effects or a defective sum, and
/// DegenerateSplit if the pieces need a four-outcome extremal measurement.
GeneralCompilation compile_general(const std::vector<ComplexMat2>& effects);

}  // namespace restaurant
