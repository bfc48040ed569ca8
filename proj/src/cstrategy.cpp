// SPDX-License-Identifier: Apache-2.0
#include "restaurant/cstrategy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "restaurant/error.hpp"

namespace restaurant {

namespace {

constexpr int kVars = 7;  // 6 receiver entries + index bound
constexpr int kEps = 6;

int receiver_var(int bit, int restaurant) { return bit * 3 + restaurant; }

// Fills the sender-dependent coefficients of an LP produced by build_inner_lp.
void load_sender(LpProblem& lp, const SenderTable& sender, const GameSpec& spec) {
  std::fill(lp.a_ub.begin(), lp.a_ub.end(), 0.0);
  // Row 0: k1 * sum_i sum_j pA(j|i) pB(i|j) - E <= 0.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) lp.a_ub[receiver_var(j, i)] += spec.k1 * sender[i][j];
  lp.a_ub[kEps] = -1.0;
  lp.b_ub[0] = 0.0;
  // Rows 1..6: -E <= k2 (gamma_y - p_y) <= E.
  for (int y = 0; y < 3; ++y) {
    double* lo = &lp.a_ub[static_cast<std::size_t>(1 + 2 * y) * kVars];
    double* hi = &lp.a_ub[static_cast<std::size_t>(2 + 2 * y) * kVars];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double w = spec.k2 * spec.prior[i] * sender[i][j];
        lo[receiver_var(j, y)] -= w;
        hi[receiver_var(j, y)] += w;
      }
    }
    lo[kEps] = -1.0;
    hi[kEps] = -1.0;
    lp.b_ub[1 + 2 * y] = -spec.k2 * spec.gamma[y];
    lp.b_ub[2 + 2 * y] = spec.k2 * spec.gamma[y];
  }
}

LpProblem inner_lp_skeleton() {
  LpProblem lp;
  lp.c.assign(kVars, 0.0);
  lp.c[kEps] = 1.0;
  lp.a_ub.assign(7 * kVars, 0.0);
  lp.b_ub.assign(7, 0.0);
  lp.a_eq.assign(2 * kVars, 0.0);
  lp.b_eq = {1.0, 1.0};
  for (int k = 0; k < 3; ++k) {
    lp.a_eq[receiver_var(0, k)] = 1.0;
    lp.a_eq[kVars + receiver_var(1, k)] = 1.0;
  }
  return lp;
}

// Reusable solver state for repeated inner LPs with the same game.
class InnerSolver {
 public:
  explicit InnerSolver(const GameSpec& spec) : spec_(spec), lp_(inner_lp_skeleton()) {}

  InnerLpResult solve(const SenderTable& sender) {
    load_sender(lp_, sender, spec_);
    const LpSolution sol = simplex_min(lp_, ws_);
    InnerLpResult out;
    out.lp_value = sol.value;
    for (int j = 0; j < 2; ++j) {
      const bool used = sender[0][j] + sender[1][j] + sender[2][j] > 0.0;
      double s = 0.0;
      for (int k = 0; k < 3; ++k) {
        out.receiver[j][k] = std::max(0.0, sol.x[receiver_var(j, k)]);
        s += out.receiver[j][k];
      }
      for (int k = 0; k < 3; ++k) out.receiver[j][k] = used ? out.receiver[j][k] / s : 1.0 / 3.0;
    }
    out.eps = quality_index(visit_matrix(ClassicalStrategy{sender, out.receiver}), spec_);
    return out;
  }

 private:
  GameSpec spec_;
  LpProblem lp_;
  SimplexWorkspace ws_;
};

std::vector<double> grid_values(double step) {
  std::vector<double> v;
  const int n = static_cast<int>(std::floor(1.0 / step + 1e-9));
  for (int i = 0; i <= n; ++i) v.push_back(std::min(1.0, i * step));
  if (v.back() < 1.0) v.push_back(1.0);
  return v;
}

struct Candidate {
  double eps = std::numeric_limits<double>::infinity();
  std::size_t index = std::numeric_limits<std::size_t>::max();
  InnerLpResult result;
  std::array<double, 3> zero_prob{};
};

bool better(const Candidate& a, const Candidate& b) {
  return a.eps < b.eps || (a.eps == b.eps && a.index < b.index);
}

}  // namespace

void ClassicalStrategy::validate() const {
  const auto check_row = [](const double* row, int n) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      if (!std::isfinite(row[k]) || row[k] < -1e-12 || row[k] > 1.0 + 1e-12) return false;
      s += row[k];
    }
    return std::abs(s - 1.0) <= 1e-12;
  };
  for (const auto& row : sender)
    if (!check_row(row.data(), 2)) throw Error(ErrorKind::InvalidInput, "sender table must be row-stochastic");
  for (const auto& row : receiver)
    if (!check_row(row.data(), 3)) throw Error(ErrorKind::InvalidInput, "receiver table must be row-stochastic");
}

SenderTable sender_from_zero_probs(const std::array<double, 3>& zero_prob) {
  SenderTable s{};
  for (int i = 0; i < 3; ++i) s[i] = {zero_prob[i], 1.0 - zero_prob[i]};
  return s;
}

VisitMatrix visit_matrix(const ClassicalStrategy& cs) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 2; ++j) m(i, k) += cs.sender[i][j] * cs.receiver[j][k];
  return VisitMatrix(m);
}

ClassicalStrategy exact_winning_strategy(const Prob3& gamma) {
  constexpr double tol = 1e-9;
  if (!is_valid_game(gamma) || !classically_winnable(gamma, tol)) {
    throw Error(ErrorKind::NotWinnable, "game is not perfectly winnable with one classical bit");
  }
  int zero_idx = -1;
  int two_thirds_idx = -1;
  double zero_dev = 1.0;
  double tt_dev = 1.0;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(gamma[i]) < zero_dev) zero_dev = std::abs(gamma[zero_idx = i]);
    if (std::abs(gamma[i] - 2.0 / 3.0) < tt_dev) tt_dev = std::abs(gamma[two_thirds_idx = i] - 2.0 / 3.0);
  }

  ClassicalStrategy cs;
  if (zero_dev <= tt_dev) {
    // Restaurant z is never visited. Bit 0 -> visit u, bit 1 -> visit v.
    // u closed sends 1, v closed sends 0, z closed sends 0 with probability alpha.
    const int z = zero_idx;
    const int u = z == 0 ? 1 : 0;
    const int v = 3 - z - u;
    const double alpha = std::clamp(3.0 * gamma[u] - 1.0, 0.0, 1.0);
    cs.sender[z] = {alpha, 1.0 - alpha};
    cs.sender[u] = {0.0, 1.0};
    cs.sender[v] = {1.0, 0.0};
    cs.receiver[0] = {0.0, 0.0, 0.0};
    cs.receiver[1] = {0.0, 0.0, 0.0};
    cs.receiver[0][u] = 1.0;
    cs.receiver[1][v] = 1.0;
  } else {
    // Restaurant t is visited with probability 2/3: t closed sends 1, any other
    // closure sends 0; bit 0 -> visit t, bit 1 -> split between the others.
    const int t = two_thirds_idx;
    for (int i = 0; i < 3; ++i) cs.sender[i] = i == t ? std::array<double, 2>{0.0, 1.0} : std::array<double, 2>{1.0, 0.0};
    cs.receiver[0] = {0.0, 0.0, 0.0};
    cs.receiver[0][t] = 1.0;
    double rest = 0.0;
    for (int k = 0; k < 3; ++k) {
      if (k == t) continue;
      cs.receiver[1][k] = std::clamp(3.0 * gamma[k], 0.0, 1.0);
      rest += cs.receiver[1][k];
    }
    for (int k = 0; k < 3; ++k) cs.receiver[1][k] = k == t ? 0.0 : cs.receiver[1][k] / rest;
  }
  return cs;
}

LpProblem build_inner_lp(const SenderTable& sender, const GameSpec& spec) {
  LpProblem lp = inner_lp_skeleton();
  load_sender(lp, sender, spec);
  return lp;
}

InnerLpResult inner_lp(const SenderTable& sender, const GameSpec& spec) {
  return InnerSolver(spec).solve(sender);
}

ClassicalOptimum optimize(const GameSpec& spec, const OptimizeOptions& options) {
  spec.validate();
  if (!(options.grid_step > 0.0) || options.grid_step > 0.5) {
    throw Error(ErrorKind::InvalidInput, "grid step must lie in (0, 0.5]");
  }
  if (options.refine_rounds < 0) throw Error(ErrorKind::InvalidInput, "refine rounds must be non-negative");

  const std::vector<double> grid = grid_values(options.grid_step);
  const std::size_t g = grid.size();
  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(g)));

  // Each worker owns a contiguous range of the first coordinate; the merge
  // uses (eps, lexicographic index) so the schedule cannot change the answer.
  std::vector<Candidate> best(threads);
  const auto scan = [&](int worker) {
    InnerSolver solver(spec);
    const std::size_t begin = g * worker / threads;
    const std::size_t end = g * (worker + 1) / threads;
    for (std::size_t i0 = begin; i0 < end; ++i0)
      for (std::size_t i1 = 0; i1 < g; ++i1)
        for (std::size_t i2 = 0; i2 < g; ++i2) {
          Candidate c;
          c.zero_prob = {grid[i0], grid[i1], grid[i2]};
          c.index = (i0 * g + i1) * g + i2;
          c.result = solver.solve(sender_from_zero_probs(c.zero_prob));
          c.eps = c.result.eps;
          if (better(c, best[worker])) best[worker] = c;
        }
  };
  if (threads == 1) {
    scan(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(scan, w);
    for (auto& t : pool) t.join();
  }
  Candidate incumbent = best[0];
  for (const auto& c : best)
    if (better(c, incumbent)) incumbent = c;

  std::size_t solves = g * g * g;
  InnerSolver solver(spec);
  double step = options.grid_step;
  for (int round = 0; round < options.refine_rounds; ++round) {
    step *= 0.5;
    for (int moves = 0; moves < 200; ++moves) {
      Candidate local = incumbent;
      std::size_t n = 0;
      for (int d0 = -1; d0 <= 1; ++d0)
        for (int d1 = -1; d1 <= 1; ++d1)
          for (int d2 = -1; d2 <= 1; ++d2) {
            const std::array<int, 3> d = {d0, d1, d2};
            Candidate c;
            for (int k = 0; k < 3; ++k) c.zero_prob[k] = std::clamp(incumbent.zero_prob[k] + d[k] * step, 0.0, 1.0);
            if (c.zero_prob == incumbent.zero_prob) continue;
            c.index = n++;
            c.result = solver.solve(sender_from_zero_probs(c.zero_prob));
            c.eps = c.result.eps;
            ++solves;
            if (c.eps < local.eps) local = c;
          }
      if (!(local.eps < incumbent.eps)) break;
      incumbent = local;
    }
  }

  ClassicalOptimum out;
  out.eps_c = incumbent.eps;
  out.strategy = ClassicalStrategy{sender_from_zero_probs(incumbent.zero_prob), incumbent.result.receiver};
  out.grid_step = options.grid_step;
  out.refine_rounds = options.refine_rounds;
  out.lp_solves = solves;
  return out;
}

}  // namespace restaurant
