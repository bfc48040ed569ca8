// SPDX-License-Identifier: Apache-2.0
#include "restaurant/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "restaurant/error.hpp"

namespace restaurant {

void LpProblem::validate() const {
  const std::size_t n = c.size();
  if (n == 0) throw Error(ErrorKind::InvalidInput, "LP has no variables");
  if (a_ub.size() != b_ub.size() * n || a_eq.size() != b_eq.size() * n) {
    throw Error(ErrorKind::InvalidInput, "LP constraint matrix dimensions do not match");
  }
  if (!lower.empty() && lower.size() != n) throw Error(ErrorKind::InvalidInput, "LP lower bounds have wrong length");
  const auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
  };
  if (!finite(c) || !finite(a_ub) || !finite(b_ub) || !finite(a_eq) || !finite(b_eq) || !finite(lower)) {
    throw Error(ErrorKind::InvalidInput, "LP coefficients must be finite");
  }
}

namespace {

class Tableau {
 public:
  Tableau(SimplexWorkspace& ws, int rows, int cols) : ws_(ws), rows_(rows), cols_(cols) {
    ws_.tableau.assign(static_cast<std::size_t>(rows + 1) * (cols + 1), 0.0);
    ws_.basis.assign(rows, -1);
  }

  double& at(int r, int c) { return ws_.tableau[static_cast<std::size_t>(r) * (cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }
  double& obj(int c) { return at(rows_, c); }
  int& basis(int r) { return ws_.basis[r]; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void pivot(int r, int s) {
    const double p = at(r, s);
    for (int j = 0; j <= cols_; ++j) at(r, j) /= p;
    at(r, s) = 1.0;
    for (int i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double f = at(i, s);
      if (f == 0.0) continue;
      for (int j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
      at(i, s) = 0.0;
    }
    basis(r) = s;
  }

  // Reduced costs for the given column costs.
  void load_objective(const std::vector<double>& cost) {
    for (int j = 0; j <= cols_; ++j) obj(j) = j < cols_ ? cost[j] : 0.0;
    for (int i = 0; i < rows_; ++i) {
      const double cb = cost[basis(i)];
      if (cb == 0.0) continue;
      for (int j = 0; j <= cols_; ++j) obj(j) -= cb * at(i, j);
    }
  }

  // Bland's rule over columns [0, allowed_cols). Returns false when unbounded.
  bool optimize(int allowed_cols) {
    for (int iter = 0; iter < 50000; ++iter) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (obj(j) < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows_; ++i) {
        const double a = at(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = rhs(i) / a;
        if (leave < 0 || ratio < best_ratio - 1e-12) {
          leave = i;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + 1e-12 && basis(i) < basis(leave)) {
          leave = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw Error(ErrorKind::ConvergenceFailure, "simplex iteration limit reached");
  }

 private:
  SimplexWorkspace& ws_;
  int rows_;
  int cols_;
};

}  // namespace

LpSolution simplex_min(const LpProblem& lp) {
  SimplexWorkspace ws;
  return simplex_min(lp, ws);
}

LpSolution simplex_min(const LpProblem& lp, SimplexWorkspace& ws) {
  lp.validate();
  const int n = static_cast<int>(lp.num_vars());
  const int m_ub = static_cast<int>(lp.b_ub.size());
  const int m_eq = static_cast<int>(lp.b_eq.size());
  const int m = m_ub + m_eq;
  const auto lower = [&](int j) { return lp.lower.empty() ? 0.0 : lp.lower[j]; };

  // Shift x = lower + x' and compute right-hand sides.
  const auto shifted_rhs = [&](const std::vector<double>& a, double b, int row) {
    double r = b;
    for (int j = 0; j < n; ++j) r -= a[static_cast<std::size_t>(row) * n + j] * lower(j);
    return r;
  };
  int n_art = m_eq;
  for (int i = 0; i < m_ub; ++i) {
    if (shifted_rhs(lp.a_ub, lp.b_ub[i], i) < 0.0) ++n_art;
  }
  const int slack0 = n;
  const int art0 = n + m_ub;
  const int cols = n + m_ub + n_art;

  Tableau t(ws, m, cols);
  int next_art = art0;
  for (int i = 0; i < m_ub; ++i) {
    const double r = shifted_rhs(lp.a_ub, lp.b_ub[i], i);
    const double sign = r < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) t.at(i, j) = sign * lp.a_ub[static_cast<std::size_t>(i) * n + j];
    t.at(i, slack0 + i) = sign;
    t.rhs(i) = sign * r;
    if (sign < 0.0) {
      t.at(i, next_art) = 1.0;
      t.basis(i) = next_art++;
    } else {
      t.basis(i) = slack0 + i;
    }
  }
  for (int k = 0; k < m_eq; ++k) {
    const int i = m_ub + k;
    const double r = shifted_rhs(lp.a_eq, lp.b_eq[k], k);
    const double sign = r < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) t.at(i, j) = sign * lp.a_eq[static_cast<std::size_t>(k) * n + j];
    t.rhs(i) = sign * r;
    t.at(i, next_art) = 1.0;
    t.basis(i) = next_art++;
  }

  if (n_art > 0) {
    ws.cost.assign(cols, 0.0);
    for (int j = art0; j < cols; ++j) ws.cost[j] = 1.0;
    t.load_objective(ws.cost);
    t.optimize(cols);
    double infeasibility = 0.0;
    double scale = 1.0;
    for (int i = 0; i < m; ++i) {
      if (t.basis(i) >= art0) infeasibility += t.rhs(i);
    }
    for (double b : lp.b_ub) scale = std::max(scale, std::abs(b));
    for (double b : lp.b_eq) scale = std::max(scale, std::abs(b));
    if (infeasibility > 1e-9 * scale) throw Error(ErrorKind::Infeasible, "linear program has no feasible point");
    // Drive zero-level artificials out of the basis where possible; rows
    // that cannot pivot are redundant and stay inert.
    for (int i = 0; i < m; ++i) {
      if (t.basis(i) < art0) continue;
      for (int j = 0; j < art0; ++j) {
        if (std::abs(t.at(i, j)) > kPivotTol) {
          t.pivot(i, j);
          break;
        }
      }
    }
  }

  ws.cost.assign(cols, 0.0);
  for (int j = 0; j < n; ++j) ws.cost[j] = lp.c[j];
  t.load_objective(ws.cost);
  if (!t.optimize(art0)) throw Error(ErrorKind::Unbounded, "linear program is unbounded below");

  LpSolution sol;
  sol.x.assign(n, 0.0);
  for (int j = 0; j < n; ++j) sol.x[j] = lower(j);
  for (int i = 0; i < m; ++i) {
    const int b = t.basis(i);
    if (b < n) sol.x[b] += t.rhs(i);
  }
  sol.value = 0.0;
  for (int j = 0; j < n; ++j) sol.value += lp.c[j] * sol.x[j];
  return sol;
}

}  // namespace restaurant
