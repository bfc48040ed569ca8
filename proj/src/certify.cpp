// SPDX-License-Identifier: Apache-2.0
#include "restaurant/certify.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "restaurant/error.hpp"

namespace restaurant {

namespace {

constexpr double kTol = 1e-12;

bool diagonal_in(const ComplexMat2& m, const ComplexMat2& basis) {
  const ComplexMat2 r = basis.adjoint() * m * basis;
  return std::abs(r(0, 1)) <= kTol && std::abs(r(1, 0)) <= kTol;
}

void check_psd(const ComplexMat2& m, const char* what) {
  if (!is_finite(m) || (m - m.adjoint()).norm() > 1e-9) throw Error(ErrorKind::InvalidInput, std::string(what) + " must be Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMat2> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) throw Error(ErrorKind::InvalidInput, std::string(what) + " must be PSD");
}

void validate(const PrepareMeasure& pm) {
  if (!is_unitary(pm.basis, 1e-9)) throw Error(ErrorKind::InvalidInput, "basis must be unitary");
  ComplexMat2 sum = -ComplexMat2::Identity();
  for (int i = 0; i < 3; ++i) {
    check_psd(pm.states[i], "states");
    if (std::abs(pm.states[i].trace() - 1.0) > 1e-9) throw Error(ErrorKind::InvalidInput, "states must have unit trace");
    check_psd(pm.effects[i], "effects");
    sum += pm.effects[i];
  }
  if (sum.norm() > 1e-9) throw Error(ErrorKind::InvalidInput, "effects must sum to the identity");
}

}  // namespace

Certificate certify(const Counts& counts, const GameSpec& spec, const CertifyOptions& options) {
  spec.validate();
  for (int x = 0; x < 3; ++x) {
    if (counts[x][0] + counts[x][1] + counts[x][2] == 0) {
      throw Error(ErrorKind::EmptyRow, "no counts recorded with restaurant " + std::to_string(x + 1) + " closed");
    }
  }
  return certify(counts, spec, optimize(spec, options.optimize), options);
}

Certificate certify(const Counts& counts, const GameSpec& spec, const ClassicalOptimum& classical,
                    const CertifyOptions& options) {
  spec.validate();
  if (!std::isfinite(options.z) || options.z < 0.0) throw Error(ErrorKind::InvalidInput, "z must be non-negative");
  for (int x = 0; x < 3; ++x) {
    if (counts[x][0] + counts[x][1] + counts[x][2] == 0) {
      throw Error(ErrorKind::EmptyRow, "no counts recorded with restaurant " + std::to_string(x + 1) + " closed");
    }
  }
  Certificate c;
  c.game = spec;
  c.counts = counts;
  c.z = options.z;
  c.bootstrap_resamples = options.bootstrap_resamples;
  c.bootstrap_seed = options.bootstrap_seed;
  c.eps_v = count_statistics(counts, spec).eps;
  c.eps_v_stderr = bootstrap_stderr(counts, spec, options.bootstrap_resamples, options.bootstrap_seed);
  c.eps_c = classical.eps_c;
  c.grid_step = classical.grid_step;
  c.refine_rounds = classical.refine_rounds;
  c.margin = c.eps_c - c.eps_v;
  c.pass = c.eps_v + c.z * c.eps_v_stderr < c.eps_c;
  constexpr double inf = std::numeric_limits<double>::infinity();
  c.sigmas = c.eps_v_stderr > 0.0 ? c.margin / c.eps_v_stderr : (c.margin > 0.0 ? inf : -inf);
  std::ostringstream os;
  os.precision(3);
  os << "observed index is " << std::abs(c.sigmas) << " bootstrap standard errors "
     << (c.sigmas >= 0.0 ? "below" : "above") << " the classical optimum (required: " << c.z << " below)";
  c.confidence_note = os.str();
  return c;
}

VisitMatrix PrepareMeasure::visit_matrix() const {
  validate(*this);
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) m(i, k) = std::max(0.0, (effects[k] * states[i]).trace().real());
  return VisitMatrix(m);
}

ClassicalStrategy classical_simulation_oracle(SimulationKind kind, const PrepareMeasure& pm) {
  validate(pm);
  if (kind == SimulationKind::OrthogonalEncoding) {
    for (const auto& rho : pm.states)
      if (!diagonal_in(rho, pm.basis)) throw Error(ErrorKind::NotApplicable, "encodings are not diagonal in the basis");
  } else {
    for (const auto& m : pm.effects)
      if (!diagonal_in(m, pm.basis)) throw Error(ErrorKind::NotApplicable, "decoding is not projective in the basis");
  }
  ClassicalStrategy cs;
  for (int j = 0; j < 2; ++j) {
    const ComplexVec2 b = pm.basis.col(j);
    for (int i = 0; i < 3; ++i) cs.sender[i][j] = std::max(0.0, (b.adjoint() * pm.states[i] * b)(0, 0).real());
    for (int k = 0; k < 3; ++k) cs.receiver[j][k] = std::max(0.0, (b.adjoint() * pm.effects[k] * b)(0, 0).real());
  }
  // Remove rounding so both tables are stochastic to machine precision.
  for (auto& row : cs.sender) {
    const double s = row[0] + row[1];
    for (double& v : row) v /= s;
  }
  for (auto& row : cs.receiver) {
    const double s = row[0] + row[1] + row[2];
    for (double& v : row) v /= s;
  }
  return cs;
}

}  // namespace restaurant
