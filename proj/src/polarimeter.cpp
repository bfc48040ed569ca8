// SPDX-License-Identifier: Apache-2.0
#include "restaurant/polarimeter.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "restaurant/error.hpp"

namespace restaurant {

namespace {

constexpr double kTol = 1e-9;

double hermitian_norm(const ComplexMat2& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMat2> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Rows <e|, <e_perp|.
ComplexMat2 rows_from(const PureState& e) { return unitary_from_zero(e).adjoint(); }

const WavePlateTriple kBitFlip{0.0, 45.0, 0.0};

}  // namespace

void PolarimeterConfig::validate() const {
  if (!std::isfinite(f) || f < 0.0 || f > 1.0) throw Error(ErrorKind::InvalidInput, "split ratio f must lie in [0, 1]");
  std::array<bool, 3> seen{};
  for (int r : routing) {
    if (r < 0 || r > 2 || seen[r]) throw Error(ErrorKind::InvalidInput, "routing must be a bijection onto the restaurants");
    seen[r] = true;
  }
}

OpticalEffects forward_detector_effects(const PolarimeterConfig& cfg) {
  cfg.validate();
  const ComplexMat2 u2 = waveplates_to_unitary(cfg.u2);
  const ComplexMat2 u3 = waveplates_to_unitary(cfg.u3);
  const ComplexMat2 u4 = waveplates_to_unitary(cfg.u4);
  ComplexMat2 d = ComplexMat2::Zero();
  d(0, 0) = 1.0;
  d(1, 1) = std::sqrt(cfg.f);

  OpticalEffects out;
  for (int k = 0; k < 2; ++k) {
    const Eigen::RowVector2cd row = u2.row(k) * d * u4;  // <k| U2 D U4
    out.detector[k] = row.adjoint() * row;
  }
  const Eigen::RowVector2cd v_row = u4.row(1);
  const ComplexMat2 reflected = (1.0 - cfg.f) * (v_row.adjoint() * v_row);
  const double to_h = std::norm(u3(0, 1));
  const double to_v = std::norm(u3(1, 1));
  const bool dump_v = cfg.dump == DumpPort::ReflectedV;
  out.detector[2] = (dump_v ? to_h : to_v) * reflected;
  out.dump = (dump_v ? to_v : to_h) * reflected;
  return out;
}

std::array<ComplexMat2, 3> forward_effects(const PolarimeterConfig& cfg) {
  const OpticalEffects e = forward_detector_effects(cfg);
  std::array<ComplexMat2, 3> out;
  for (int d = 0; d < 3; ++d) out[cfg.routing[d]] = e.detector[d];
  return out;
}

Rank1Povm::Rank1Povm(const std::array<Rank1Effect, 3>& effects) : effects_(effects) {
  double sum = 0.0;
  for (const auto& e : effects_) {
    if (!std::isfinite(e.weight) || e.weight < -kTol) throw Error(ErrorKind::InvalidPovm, "effect weights must be non-negative");
    sum += e.weight;
  }
  if (std::abs(sum - 2.0) > kTol) throw Error(ErrorKind::InvalidPovm, "rank-1 effect weights must sum to 2");
  ComplexMat2 total = -ComplexMat2::Identity();
  for (const auto& e : effects_) total += e.op();
  if (hermitian_norm(total) > kTol) throw Error(ErrorKind::InvalidPovm, "effects do not sum to the identity");
}

Rank1Povm Rank1Povm::from_strategy(const QuantumStrategy& s) {
  std::array<Rank1Effect, 3> e;
  for (int y = 0; y < 3; ++y) e[y] = {s.weights[y], orthogonal_state(s.encodings[y])};
  return Rank1Povm(e);
}

std::array<ComplexMat2, 3> Rank1Povm::ops() const {
  return {effects_[0].op(), effects_[1].op(), effects_[2].op()};
}

PolarimeterConfig compile(const Rank1Povm& povm) {
  int r = 0;
  for (int i = 1; i < 3; ++i)
    if (povm[i].weight < povm[r].weight) r = i;
  return compile(povm, r);
}

PolarimeterConfig compile(const Rank1Povm& povm, int reflected) {
  if (reflected < 0 || reflected > 2) throw Error(ErrorKind::InvalidInput, "reflected effect index must be 0, 1 or 2");
  const int r = reflected;
  const double lambda_r = std::max(0.0, povm[r].weight);
  if (lambda_r > 1.0 + kTol) throw Error(ErrorKind::InvalidInput, "the reflected effect needs weight at most 1");
  const int a = r == 0 ? 1 : 0;
  const int b = 3 - r - a;

  PolarimeterConfig cfg;
  cfg.f = std::clamp(1.0 - lambda_r, 0.0, 1.0);
  cfg.u3 = kBitFlip;
  cfg.routing = {a, b, r};

  // U4 takes the reflected direction to |V>.
  const ComplexMat2 u4 = pauli_x() * unitary_from_zero(povm[r].direction).adjoint();
  cfg.u4 = unitary_to_waveplates(u4);

  const ComplexVec2 wa = u4 * povm[a].direction.vector();
  const ComplexVec2 wb = u4 * povm[b].direction.vector();
  ComplexMat2 u2;
  if (cfg.f > 1e-12) {
    // The transmitted effects sum to D^2 in the rotated frame, so
    // D^-1 U4 Pi_a U4^dag D^-1 is the projector onto D^-1 w_a.
    const double sf = std::sqrt(cfg.f);
    ComplexVec2 ea = wa;
    ea(1) /= sf;
    if (povm[a].weight <= 1e-15 || ea.norm() < 1e-15) {
      ComplexVec2 eb = wb;
      eb(1) /= sf;
      u2 = rows_from(orthogonal_state(PureState::from_amplitudes(eb(0), eb(1))));
    } else {
      u2 = rows_from(PureState::from_amplitudes(ea(0), ea(1)));
    }
  } else {
    // Only H is transmitted: both transmitted effects must be along U4^dag|H>,
    // and U2 splits H between the detectors in the ratio of their weights.
    if (std::norm(wa(1)) * povm[a].weight > kTol || std::norm(wb(1)) * povm[b].weight > kTol) {
      throw Error(ErrorKind::DegenerateSplit, "f = 0 but the transmitted effects are not supported on H");
    }
    const double la = std::max(0.0, povm[a].weight);
    const double lb = std::max(0.0, povm[b].weight);
    const double c = std::sqrt(la / (la + lb));
    const double s = std::sqrt(lb / (la + lb));
    u2 << c, s, -s, c;
  }
  cfg.u2 = unitary_to_waveplates(u2);
  return cfg;
}

std::vector<ComplexMat2> GeneralCompilation::recovered(std::size_t elements) const {
  std::vector<ComplexMat2> out(elements, ComplexMat2::Zero());
  for (const auto& e : entries) {
    const auto eff = forward_effects(e.config);
    for (int k = 0; k < 3; ++k) out.at(static_cast<std::size_t>(e.labels[k])) += e.probability * eff[k];
  }
  return out;
}

namespace {

struct Piece {
  double weight;  // coefficient of I in weight * (I + n.sigma)
  Eigen::Vector3d n;
  int label;
};

struct Subset {
  std::vector<int> idx;
  std::vector<double> coeff;  // barycentric weights putting the origin at their mean
};

// Barycentric coefficients c >= 0, sum 1, sum c_j n_j = 0; empty when none.
std::vector<double> zero_mean(const std::vector<Piece>& pieces, const std::vector<int>& idx) {
  const int k = static_cast<int>(idx.size());
  Eigen::MatrixXd a(4, k);
  for (int j = 0; j < k; ++j) {
    a.block<3, 1>(0, j) = pieces[idx[j]].n;
    a(3, j) = 1.0;
  }
  Eigen::Vector4d rhs(0, 0, 0, 1);
  const Eigen::VectorXd c = a.completeOrthogonalDecomposition().solve(rhs);
  if ((a * c - rhs).norm() > 1e-10) return {};
  for (int j = 0; j < k; ++j)
    if (c(j) < 1e-12) return {};
  return {c.data(), c.data() + k};
}

}  // namespace

GeneralCompilation compile_general(const std::vector<ComplexMat2>& effects) {
  if (effects.empty()) throw Error(ErrorKind::InvalidPovm, "a POVM needs at least one element");
  ComplexMat2 total = -ComplexMat2::Identity();
  std::vector<Piece> pieces;
  for (std::size_t m = 0; m < effects.size(); ++m) {
    const ComplexMat2& e = effects[m];
    if (!is_finite(e) || (e - e.adjoint()).norm() > kTol) throw Error(ErrorKind::InvalidPovm, "effects must be Hermitian");
    total += e;
    Eigen::SelfAdjointEigenSolver<ComplexMat2> es(e);
    for (int k = 0; k < 2; ++k) {
      const double mu = es.eigenvalues()(k);
      if (mu < -kTol) throw Error(ErrorKind::InvalidPovm, "effects must be positive semidefinite");
      if (mu <= 1e-14) continue;
      const ComplexVec2 v = es.eigenvectors().col(k);
      const BlochVector b = state_to_bloch(PureState::from_amplitudes(v(0), v(1)));
      pieces.push_back({mu / 2.0, b.vec(), static_cast<int>(m)});
    }
  }
  if (hermitian_norm(total) > kTol) throw Error(ErrorKind::InvalidPovm, "effects do not sum to the identity");

  GeneralCompilation out;
  double remaining = 0.0;
  for (const auto& p : pieces) remaining += p.weight;
  for (int guard = 0; remaining > 1e-12 && guard < 64; ++guard) {
    // Candidate zero-mean subsets, best first: more distinct labels, then
    // larger subsets, then lexicographic indices.
    std::vector<int> live;
    for (int i = 0; i < static_cast<int>(pieces.size()); ++i)
      if (pieces[i].weight > 1e-13) live.push_back(i);
    Subset best;
    int best_labels = -1;
    const auto consider = [&](const std::vector<int>& idx) {
      std::vector<int> labels;
      for (int i : idx) labels.push_back(pieces[i].label);
      std::sort(labels.begin(), labels.end());
      const int distinct = static_cast<int>(std::unique(labels.begin(), labels.end()) - labels.begin());
      const bool better = distinct > best_labels || (distinct == best_labels && idx.size() > best.idx.size());
      if (!better) return;
      auto c = zero_mean(pieces, idx);
      if (c.empty()) return;
      best = {idx, c};
      best_labels = distinct;
    };
    const int n = static_cast<int>(live.size());
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) consider({live[i], live[j], live[k]});
        consider({live[i], live[j]});
      }
    if (best.idx.empty()) {
      throw Error(ErrorKind::DegenerateSplit, "remaining pieces need a four-outcome extremal measurement");
    }

    double t = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < best.idx.size(); ++j) t = std::min(t, pieces[best.idx[j]].weight / best.coeff[j]);

    std::array<Rank1Effect, 3> slots;
    MixtureEntry entry;
    entry.probability = t;
    for (std::size_t j = 0; j < 3; ++j) {
      if (j < best.idx.size()) {
        const Piece& p = pieces[best.idx[j]];
        slots[j] = {2.0 * best.coeff[j], bloch_to_state(BlochVector::from(p.n))};
        entry.labels[j] = p.label;
      } else {
        slots[j] = {0.0, PureState()};
        entry.labels[j] = pieces[best.idx[0]].label;
      }
    }
    entry.config = compile(Rank1Povm(slots));
    for (std::size_t j = 0; j < best.idx.size(); ++j) {
      Piece& p = pieces[best.idx[j]];
      p.weight = std::max(0.0, p.weight - t * best.coeff[j]);
    }
    out.entries.push_back(entry);
    remaining = 0.0;
    for (const auto& p : pieces) remaining += p.weight;
  }

  const auto rec = out.recovered(effects.size());
  for (std::size_t m = 0; m < effects.size(); ++m) {
    if ((rec[m] - effects[m]).norm() > 1e-8) {
      throw Error(ErrorKind::DegenerateSplit, "mixture does not reproduce the measurement");
    }
  }
  return out;
}

}  // namespace restaurant
