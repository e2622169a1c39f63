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

#include "mgfp/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mgfp {

double avg_value(const MarkovGame& g, const LearnerState& ls, int player,
                 int state) {
  double acc = 0.0;
  const int n_joint = g.joint.size();
  for (int a = 0; a < n_joint; ++a) {
    double w = 1.0;
    for (int j = 0; j < g.n_players; ++j)
      w *= ls.beliefs[j][state][g.joint.component(a, j)];
    acc += w * ls.q[player][state][a];
  }
  return acc;
}

double gap_delta(const MarkovGame& g, const LearnerState& ls, int player,
                 int state) {
  const BestResponse br = best_response_and_value(
      g.joint, ls.q[player][state], ls.beliefs, state, player);
  return br.value - avg_value(g, ls, player, state);
}

std::vector<std::vector<double>> big_upsilon(
    const MarkovGame& g, int player,
    const std::vector<std::vector<double>>& q_i,
    const std::vector<double>& value_est) {
  const int n_states = g.num_states();
  const int n_joint = g.joint.size();
  std::vector<std::vector<double>> ups(n_states, std::vector<double>(n_joint));
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_joint; ++a) {
      double acc = 0.0;
      for (int sp = 0; sp < n_states; ++sp)
        acc += g.transitions[s][a][sp] * value_est[sp];
      ups[s][a] = g.rewards[player][s][a] + g.gamma * acc - q_i[s][a];
    }
  }
  return ups;
}

double lower_upsilon(const MarkovGame& g, const LearnerState& ls, int player) {
  const int n_states = g.num_states();
  const int n_joint = g.joint.size();
  std::vector<double> u(n_states);
  for (int s = 0; s < n_states; ++s) u[s] = avg_value(g, ls, player, s);

  double lo = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_joint; ++a) {
      double acc = 0.0;
      for (int sp = 0; sp < n_states; ++sp)
        acc += g.transitions[s][a][sp] * u[sp];
      lo = std::min(lo, g.rewards[player][s][a] + g.gamma * acc -
                            ls.q[player][s][a]);
    }
  }
  return lo;
}

double gamma_term(const MarkovGame& g, const LearnerState& ls, int player_i,
                  int player_j, int br_action_j, int state) {
  double acc = 0.0;
  const int n_joint = g.joint.size();
  for (int a = 0; a < n_joint; ++a) {
    double w = 1.0;
    for (int j = 0; j < g.n_players; ++j)
      w *= ls.beliefs[j][state][g.joint.component(a, j)];
    const int swapped = g.joint.replace(a, player_j, br_action_j);
    acc += w * (ls.q[player_i][state][swapped] - ls.q[player_i][state][a]);
  }
  return acc;
}

double strategic_equivalence_residual(
    const MarkovGame& g, const std::vector<std::vector<double>>& q_i,
    const std::vector<std::vector<double>>& q_j, int deviating_player) {
  double residual = 0.0;
  const int n_joint = g.joint.size();
  for (int s = 0; s < g.num_states(); ++s) {
    for (int a = 0; a < n_joint; ++a) {
      const double dq = q_i[s][a] - q_j[s][a];
      for (int ap = 0; ap < g.num_actions(deviating_player); ++ap) {
        const int alt = g.joint.replace(a, deviating_player, ap);
        const double dq_alt = q_i[s][alt] - q_j[s][alt];
        residual = std::max(residual, std::abs(dq_alt - dq));
      }
    }
  }
  return residual;
}

namespace {

// prod_{l=lo}^{hi} (1 - beta_l), empty range = 1. Switches to log space when
// a factor drops below 1e-3 to keep long windows from underflowing.
double partial_product(std::span<const double> beta, std::int64_t lo,
                       std::int64_t hi) {
  if (lo > hi) return 1.0;
  bool has_nonpositive = false;
  bool has_tiny = false;
  for (std::int64_t l = lo; l <= hi; ++l) {
    const double f = 1.0 - beta[static_cast<size_t>(l)];
    if (f <= 0.0)
      has_nonpositive = true;
    else if (f < 1e-3)
      has_tiny = true;
  }
  if (has_tiny && !has_nonpositive) {
    double log_acc = 0.0;
    for (std::int64_t l = lo; l <= hi; ++l)
      log_acc += std::log1p(-beta[static_cast<size_t>(l)]);
    return std::exp(log_acc);
  }
  double acc = 1.0;
  for (std::int64_t l = lo; l <= hi; ++l)
    acc *= 1.0 - beta[static_cast<size_t>(l)];
  return acc;
}

}  // namespace

TelescopeCheck telescoping_sums(std::span<const double> beta, std::int64_t k0,
                                std::int64_t k1, std::int64_t k2) {
  const auto len = static_cast<std::int64_t>(beta.size());
  if (k0 < 0 || k1 < 0 || k2 < 0 || k0 >= len || k2 >= len || k1 > len)
    throw std::out_of_range("telescoping index outside schedule slice");

  TelescopeCheck check;

  // Forward identity (anchor k0 below the summation range).
  {
    double running = partial_product(beta, k0, k1 - 1);
    double lhs = 0.0;
    for (std::int64_t k = k1; k <= k2; ++k) {
      const double b = beta[static_cast<size_t>(k)];
      lhs += b * running;
      running *= 1.0 - b;
    }
    check.lhs1 = lhs;
    check.rhs1 = partial_product(beta, k0, k1 - 1) - partial_product(beta, k0, k2);
  }

  // Reversed identity (products run upward from k+1 to the anchor). The
  // anchor must sit at or above the summation range for the telescoping to
  // close, so it is taken as max(k0, k2). The running product is kept in log
  // space: a division chain would amplify rounding noise without bound once
  // the product underflows, while the log error stays linear in the window.
  {
    const std::int64_t anchor = std::max(k0, k2);
    double log_running = 0.0;  // log prod_{l=k+1}^{anchor}, excluding zeros
    std::int64_t zero_factors = 0;
    for (std::int64_t l = k1 + 1; l <= anchor; ++l) {
      const double f = 1.0 - beta[static_cast<size_t>(l)];
      if (f == 0.0)
        ++zero_factors;
      else
        log_running += std::log1p(-beta[static_cast<size_t>(l)]);
    }
    double lhs = 0.0;
    for (std::int64_t k = k1; k <= k2; ++k) {
      const double b = beta[static_cast<size_t>(k)];
      lhs += b * (zero_factors > 0 ? 0.0 : std::exp(log_running));
      if (k + 1 <= anchor) {
        const double f = 1.0 - beta[static_cast<size_t>(k + 1)];
        if (f == 0.0)
          --zero_factors;
        else
          log_running -= std::log1p(-beta[static_cast<size_t>(k + 1)]);
      }
    }
    check.lhs2 = lhs;
    check.rhs2 = partial_product(beta, k2 + 1, anchor) -
                 partial_product(beta, k1, anchor);
  }
  return check;
}

TailMonotonicityStat tail_monotonicity(const Trace& trace, std::size_t window) {
  const auto& records = trace.records;
  if (window < 1 || window > records.size())
    throw std::invalid_argument("tail window larger than trace");
  const std::size_t begin = records.size() - window;
  for (std::size_t t = begin + 1; t < records.size(); ++t) {
    if (records[t].k != records[t - 1].k + 1)
      throw std::invalid_argument(
          "tail monotonicity requires full cadence over the window");
  }

  TailMonotonicityStat stat;
  stat.window_begin_k = records[begin].k;
  stat.window_end_k = records.back().k;
  const int n_players = trace.meta.n_players;
  stat.min_partial_sum.assign(n_players,
                              std::numeric_limits<double>::infinity());
  for (int i = 0; i < n_players; ++i) {
    // Minimum-sum contiguous window over beta_k * lower_upsilon_k.
    double best = std::numeric_limits<double>::infinity();
    double cur = 0.0;
    bool first = true;
    for (std::size_t t = begin; t < records.size(); ++t) {
      const double x = records[t].beta * records[t].players[i].lower_upsilon;
      cur = first ? x : std::min(x, cur + x);
      first = false;
      best = std::min(best, cur);
    }
    stat.min_partial_sum[i] = best;
  }
  return stat;
}

TraceRecord make_trace_record(const MarkovGame& g, const LearnerState& ls,
                              double alpha, double beta) {
  TraceRecord rec;
  rec.k = ls.iteration;
  rec.alpha = alpha;
  rec.beta = beta;
  rec.exploitability = std::numeric_limits<double>::quiet_NaN();

  const int n_states = g.num_states();
  rec.players.resize(g.n_players);
  std::vector<std::vector<BestResponse>> br(g.n_players);
  for (int i = 0; i < g.n_players; ++i) {
    auto& pd = rec.players[i];
    pd.value_est.resize(n_states);
    pd.avg_value.resize(n_states);
    pd.delta.resize(n_states);
    br[i].resize(n_states);
    for (int s = 0; s < n_states; ++s) {
      br[i][s] = best_response_and_value(g.joint, ls.q[i][s], ls.beliefs, s, i);
      pd.value_est[s] = br[i][s].value;
      pd.avg_value[s] = avg_value(g, ls, i, s);
      pd.delta[s] = pd.value_est[s] - pd.avg_value[s];
    }
    pd.lower_upsilon = lower_upsilon(g, ls, i);
    pd.belief = ls.beliefs[i];
    const auto ups = big_upsilon(g, i, ls.q[i], pd.value_est);
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& row : ups)
      for (double v : row) lo = std::min(lo, v);
    pd.min_upsilon = lo;
  }

  for (int i = 0; i < g.n_players; ++i) {
    for (int j = 0; j < g.n_players; ++j) {
      if (j == i) continue;
      std::vector<double> block(n_states);
      for (int s = 0; s < n_states; ++s)
        block[s] = gamma_term(g, ls, i, j, br[j][s].action, s);
      rec.gamma_ij.push_back(std::move(block));
    }
  }

  if (g.controller.has_value()) {
    const int c = *g.controller;
    double residual = 0.0;
    for (int j = 0; j < g.n_players; ++j) {
      if (j == c) continue;
      residual = std::max(
          residual, strategic_equivalence_residual(g, ls.q[c], ls.q[j], j));
    }
    rec.streq_residual = residual;
  } else {
    rec.streq_residual = std::numeric_limits<double>::quiet_NaN();
  }

  double gap = 0.0;
  for (int i = 0; i < g.n_players; ++i)
    for (int j = i + 1; j < g.n_players; ++j)
      for (int s = 0; s < n_states; ++s)
        for (int a = 0; a < g.joint.size(); ++a)
          gap = std::max(gap, std::abs(ls.q[i][s][a] - ls.q[j][s][a]));
  rec.max_q_gap = gap;

  return rec;
}

}  // namespace mgfp
