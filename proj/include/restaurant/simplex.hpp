// SPDX-License-Identifier: Apache-2.0
//
// Dense two-phase primal simplex for the small linear programs that appear in
// the classical-strategy optimizer. Bland's rule prevents cycling.
#pragma once

#include <cstddef>
#include <vector>

namespace restaurant {

/// minimize  c.x
/// s.t.      A_ub x <= b_ub,  A_eq x = b_eq,  x >= lower
///
/// Matrices are dense row-major: a_ub has b_ub.size() rows of c.size() entries.
/// An empty `lower` means all lower bounds are zero.
struct LpProblem {
  std::vector<double> c;
  std::vector<double> a_ub;
  std::vector<double> b_ub;
  std::vector<double> a_eq;
  std::vector<double> b_eq;
  std::vector<double> lower;

  std::size_t num_vars() const noexcept { return c.size(); }
  /// Throws InvalidInput on inconsistent dimensions or non-finite data.
  void validate() const;
};

struct LpSolution {
  double value = 0.0;
  std::vector<double> x;
};

/// Scratch buffers reused across solves; not thread-safe, one per thread.
class SimplexWorkspace {
 public:
  std::vector<double> tableau;
  std::vector<int> basis;
  std::vector<double> cost;
};

inline constexpr double kPivotTol = 1e-9;

/// Throws Infeasible or Unbounded.
LpSolution simplex_min(const LpProblem& lp);
LpSolution simplex_min(const LpProblem& lp, SimplexWorkspace& ws);

}  // namespace restaurant
