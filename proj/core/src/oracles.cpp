// Copyright 2026 The mgfp Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mgfp/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mgfp {

namespace {

constexpr double kPivotEps = 1e-11;

// Dense primal simplex for: maximize c.x s.t. A x <= b, x >= 0, with b >= 0
// (slack basis feasible). Bland's rule on both the entering and leaving
// choices precludes cycling. Returns primal optimum, objective, and the dual
// vector read off the slack reduced costs.
struct SimplexResult {
  std::vector<double> x;
  std::vector<double> dual;
  double objective = 0.0;
};

SimplexResult simplex_max(const std::vector<std::vector<double>>& a,
                          const std::vector<double>& b,
                          const std::vector<double>& c) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(c.size());
  const int cols = n + m + 1;

  std::vector<std::vector<double>> tab(m, std::vector<double>(cols, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) tab[i][j] = a[i][j];
    tab[i][n + i] = 1.0;
    tab[i][cols - 1] = b[i];
  }
  std::vector<double> obj(cols, 0.0);  // reduced-cost row: z_j - c_j
  for (int j = 0; j < n; ++j) obj[j] = -c[j];

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  const long max_pivots = 10000L * (m + n) + 1000;
  for (long iter = 0;; ++iter) {
    if (iter > max_pivots)
      throw LpError("simplex exceeded pivot budget (conditioning issue)");

    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (obj[j] < -kPivotEps) {
        enter = j;
        break;  // Bland: lowest eligible index
      }
    }
    if (enter < 0) break;  // optimal

    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (tab[i][enter] > kPivotEps) {
        const double ratio = tab[i][cols - 1] / tab[i][enter];
        if (ratio < best_ratio - kPivotEps ||
            (std::abs(ratio - best_ratio) <= kPivotEps &&
             (leave < 0 || basis[i] < basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) throw LpError("LP unbounded (malformed matrix game)");

    const double pivot = tab[leave][enter];
    if (std::abs(pivot) < kPivotEps)
      throw LpError("degenerate pivot below tolerance (conditioning issue)");
    for (int j = 0; j < cols; ++j) tab[leave][j] /= pivot;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = tab[i][enter];
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j) tab[i][j] -= f * tab[leave][j];
    }
    const double fo = obj[enter];
    if (fo != 0.0)
      for (int j = 0; j < cols; ++j) obj[j] -= fo * tab[leave][j];
    basis[leave] = enter;
  }

  SimplexResult result;
  result.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) result.x[basis[i]] = tab[i][cols - 1];
  result.dual.assign(m, 0.0);
  for (int i = 0; i < m; ++i) result.dual[i] = obj[n + i];
  result.objective = obj[cols - 1];
  return result;
}

void normalize(std::vector<double>& dist) {
  double sum = 0.0;
  for (double& v : dist) {
    if (v < 0.0 && v > -1e-12) v = 0.0;
    sum += v;
  }
  if (sum <= 0.0) throw LpError("degenerate strategy normalization");
  for (double& v : dist) v /= sum;
}

}  // namespace

MatrixGameSolution solve_matrix_zero_sum(
    const std::vector<std::vector<double>>& matrix) {
  const int m = static_cast<int>(matrix.size());
  if (m == 0) throw std::invalid_argument("empty matrix");
  const int n = static_cast<int>(matrix[0].size());
  for (const auto& row : matrix) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("ragged matrix");
    for (double v : row)
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite entry");
  }

  // Shift so every payoff is >= 1, making the game value positive; then the
  // standard maximin LP applies. For shifted matrix G:
  //   maximize sum(t)  s.t.  G t <= 1, t >= 0
  // has optimum 1/v with col_strategy = t*v, and its dual yields the row
  // strategy the same way.
  double lo = matrix[0][0];
  for (const auto& row : matrix)
    for (double v : row) lo = std::min(lo, v);
  const double shift = 1.0 - lo;

  std::vector<std::vector<double>> shifted(m, std::vector<double>(n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) shifted[i][j] = matrix[i][j] + shift;

  const auto lp = simplex_max(shifted, std::vector<double>(m, 1.0),
                              std::vector<double>(n, 1.0));
  if (!(lp.objective > 0.0))
    throw LpError("nonpositive LP objective (conditioning issue)");
  const double shifted_value = 1.0 / lp.objective;

  MatrixGameSolution sol;
  sol.value = shifted_value - shift;
  sol.col_strategy = lp.x;
  for (double& v : sol.col_strategy) v *= shifted_value;
  sol.row_strategy = lp.dual;
  for (double& v : sol.row_strategy) v *= shifted_value;
  normalize(sol.row_strategy);
  normalize(sol.col_strategy);
  return sol;
}

SolveResult shapley_value_iteration(const MarkovGame& g, double tol) {
  if (g.n_players != 2)
    throw std::invalid_argument("fixed-point solver requires exactly 2 players");
  if (!classify(g).zero_sum)
    throw std::invalid_argument("fixed-point solver requires a zero-sum game");

  const int n_states = g.num_states();
  const int m = g.num_actions(0);
  const int n = g.num_actions(1);
  const double threshold =
      g.gamma > 0.0 ? tol * (1.0 - g.gamma) / (2.0 * g.gamma) : 0.0;

  std::vector<double> v(n_states, 0.0);
  std::vector<MatrixGameSolution> stage(n_states);
  SolveResult result;

  const std::int64_t max_sweeps = 1000000;
  for (std::int64_t sweep = 0;; ++sweep) {
    double residual = 0.0;
    std::vector<double> v_next(n_states);
    for (int s = 0; s < n_states; ++s) {
      std::vector<std::vector<double>> stage_matrix(m,
                                                    std::vector<double>(n));
      for (int a0 = 0; a0 < m; ++a0) {
        for (int a1 = 0; a1 < n; ++a1) {
          const int joint = g.joint.encode({a0, a1});
          double acc = 0.0;
          for (int sp = 0; sp < n_states; ++sp)
            acc += g.transitions[s][joint][sp] * v[sp];
          stage_matrix[a0][a1] = g.rewards[0][s][joint] + g.gamma * acc;
        }
      }
      stage[s] = solve_matrix_zero_sum(stage_matrix);
      v_next[s] = stage[s].value;
      residual = std::max(residual, std::abs(v_next[s] - v[s]));
    }
    v = v_next;
    result.iterations_used = sweep + 1;
    result.residual = residual;
    if (residual <= threshold || g.gamma == 0.0) break;
    if (sweep + 1 >= max_sweeps)
      throw LpError("value iteration failed to reach tolerance");
  }

  result.q_star.assign(2, std::vector<std::vector<double>>(
                              n_states, std::vector<double>(g.joint.size())));
  result.values.assign(2, std::vector<double>(n_states));
  result.profile.policy.resize(2);
  result.profile.policy[0].resize(n_states);
  result.profile.policy[1].resize(n_states);
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < g.joint.size(); ++a) {
      double acc = 0.0;
      for (int sp = 0; sp < n_states; ++sp)
        acc += g.transitions[s][a][sp] * v[sp];
      const double q0 = g.rewards[0][s][a] + g.gamma * acc;
      result.q_star[0][s][a] = q0;
      result.q_star[1][s][a] = -q0;
    }
    result.values[0][s] = v[s];
    result.values[1][s] = -v[s];
    result.profile.policy[0][s] = stage[s].row_strategy;
    result.profile.policy[1][s] = stage[s].col_strategy;
  }
  result.exploitability = exploitability(g, result.profile);
  return result;
}

MdpSolution mdp_value_iteration(const InducedMdp& mdp, double tol) {
  const int n_states = mdp.n_states;
  const int n_actions = mdp.n_actions;
  const double threshold =
      mdp.gamma > 0.0 ? tol * (1.0 - mdp.gamma) / (2.0 * mdp.gamma) : 0.0;

  MdpSolution sol;
  sol.v.assign(n_states, 0.0);
  sol.q.assign(n_states, std::vector<double>(n_actions, 0.0));
  sol.policy.assign(n_states, 0);

  const std::int64_t max_sweeps = 10000000;
  for (std::int64_t sweep = 0;; ++sweep) {
    double residual = 0.0;
    std::vector<double> v_next(n_states);
    for (int s = 0; s < n_states; ++s) {
      int best_a = 0;
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < n_actions; ++a) {
        double acc = 0.0;
        for (int sp = 0; sp < n_states; ++sp)
          acc += mdp.transitions[s][a][sp] * sol.v[sp];
        const double q = mdp.rewards[s][a] + mdp.gamma * acc;
        sol.q[s][a] = q;
        if (q > best) {
          best = q;
          best_a = a;
        }
      }
      v_next[s] = best;
      sol.policy[s] = best_a;
      residual = std::max(residual, std::abs(v_next[s] - sol.v[s]));
    }
    sol.v = v_next;
    sol.iterations = sweep + 1;
    sol.residual = residual;
    if (residual <= threshold || mdp.gamma == 0.0) break;
    if (sweep + 1 >= max_sweeps)
      throw std::runtime_error("MDP value iteration failed to converge");
  }
  // One more greedy pass so q and policy are consistent with the final v.
  for (int s = 0; s < n_states; ++s) {
    int best_a = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < n_actions; ++a) {
      double acc = 0.0;
      for (int sp = 0; sp < n_states; ++sp)
        acc += mdp.transitions[s][a][sp] * sol.v[sp];
      const double q = mdp.rewards[s][a] + mdp.gamma * acc;
      sol.q[s][a] = q;
      if (q > best) {
        best = q;
        best_a = a;
      }
    }
    sol.policy[s] = best_a;
  }
  return sol;
}

namespace {

// Dense direct solve of M x = rhs by Gaussian elimination with partial
// pivoting; M is small (|S| <= desk scale).
std::vector<double> solve_linear(std::vector<std::vector<double>> m,
                                 std::vector<double> rhs) {
  const int n = static_cast<int>(m.size());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row)
      if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
    std::swap(m[col], m[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    if (std::abs(m[col][col]) < 1e-14)
      throw std::runtime_error("singular linear system in policy evaluation");
    for (int row = col + 1; row < n; ++row) {
      const double f = m[row][col] / m[col][col];
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) m[row][j] -= f * m[col][j];
      rhs[row] -= f * rhs[col];
    }
  }
  std::vector<double> x(n);
  for (int row = n - 1; row >= 0; --row) {
    double acc = rhs[row];
    for (int j = row + 1; j < n; ++j) acc -= m[row][j] * x[j];
    x[row] = acc / m[row][row];
  }
  return x;
}

}  // namespace

std::vector<std::vector<double>> policy_evaluation(
    const MarkovGame& g, const StrategyProfile& profile) {
  const int n_states = g.num_states();
  const int n_joint = g.joint.size();

  // Profile-induced state chain, shared across players.
  std::vector<std::vector<double>> chain(n_states,
                                         std::vector<double>(n_states, 0.0));
  std::vector<std::vector<double>> mean_reward(
      g.n_players, std::vector<double>(n_states, 0.0));
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_joint; ++a) {
      double w = 1.0;
      for (int j = 0; j < g.n_players; ++j)
        w *= profile.policy[j][s][g.joint.component(a, j)];
      for (int sp = 0; sp < n_states; ++sp)
        chain[s][sp] += w * g.transitions[s][a][sp];
      for (int i = 0; i < g.n_players; ++i)
        mean_reward[i][s] += w * g.rewards[i][s][a];
    }
  }

  std::vector<std::vector<double>> lhs(n_states,
                                       std::vector<double>(n_states));
  for (int s = 0; s < n_states; ++s)
    for (int sp = 0; sp < n_states; ++sp)
      lhs[s][sp] = (s == sp ? 1.0 : 0.0) - g.gamma * chain[s][sp];

  std::vector<std::vector<double>> values(g.n_players);
  for (int i = 0; i < g.n_players; ++i) {
    values[i] = solve_linear(lhs, mean_reward[i]);
    double residual = 0.0;
    for (int s = 0; s < n_states; ++s) {
      double acc = mean_reward[i][s];
      for (int sp = 0; sp < n_states; ++sp)
        acc += g.gamma * chain[s][sp] * values[i][sp];
      residual = std::max(residual, std::abs(values[i][s] - acc));
    }
    if (residual > 1e-9) {
      std::ostringstream os;
      os << "policy evaluation residual " << residual << " exceeds 1e-9";
      throw std::runtime_error(os.str());
    }
  }
  return values;
}

ExploitabilityReport exploitability_report(const MarkovGame& g,
                                           const StrategyProfile& profile) {
  const auto values = policy_evaluation(g, profile);
  ExploitabilityReport report;
  report.best_response_gain.resize(g.n_players);
  report.expected = -std::numeric_limits<double>::infinity();
  report.per_state_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.n_players; ++i) {
    const auto mdp = induce_mdp(g, i, profile);
    const auto br = mdp_value_iteration(mdp, 1e-10);
    report.best_response_gain[i].resize(g.num_states());
    double expected_i = 0.0;
    for (int s = 0; s < g.num_states(); ++s) {
      const double gain = br.v[s] - values[i][s];
      report.best_response_gain[i][s] = gain;
      report.per_state_max = std::max(report.per_state_max, gain);
      expected_i += g.initial_dist[s] * gain;
    }
    report.expected = std::max(report.expected, expected_i);
  }
  return report;
}

double exploitability(const MarkovGame& g, const StrategyProfile& profile) {
  return exploitability_report(g, profile).expected;
}

StageEquilibria stage_equilibria(const std::vector<double>& table,
                                 const JointActionSpace& joint) {
  StageEquilibria result;
  double best = -std::numeric_limits<double>::infinity();
  for (double v : table) best = std::max(best, v);
  for (int a = 0; a < joint.size(); ++a) {
    bool equilibrium = true;
    for (int p = 0; p < joint.num_players() && equilibrium; ++p) {
      for (int ap = 0; ap < joint.size(p); ++ap) {
        const int alt = joint.replace(a, p, ap);
        if (table[alt] > table[a] + kStructuralTol) {
          equilibrium = false;
          break;
        }
      }
    }
    if (equilibrium) result.pure_equilibria.push_back(a);
    if (table[a] >= best - kStructuralTol) result.global_maxima.push_back(a);
  }
  return result;
}

}  // namespace mgfp
