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

#ifndef MGFP_DIAGNOSTICS_HPP_
#define MGFP_DIAGNOSTICS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "mgfp/dynamics.hpp"
#include "mgfp/game.hpp"
#include "mgfp/trace.hpp"

namespace mgfp {

// All functions here are pure computations on immutable snapshots of a
// learner state; nothing mutates the stepping loop's data.

// Expected payoff of the current belief profile (own action included):
// u_k^i(s) = E_{a ~ pi_k(s)} Q_k^i(s,a).
double avg_value(const MarkovGame& g, const LearnerState& ls, int player,
                 int state);

// Optimality gap Delta_k^i(s) = v_k^i(s) - u_k^i(s) >= 0 up to roundoff.
double gap_delta(const MarkovGame& g, const LearnerState& ls, int player,
                 int state);

// Q-update direction table: Upsilon(s,a) = r^i(s,a)
//   + gamma * sum_{s'} p(s'|s,a) v^i(s') - Q^i(s,a), flattened [state][joint].
// `value_est` holds v^i per state.
std::vector<std::vector<double>> big_upsilon(
    const MarkovGame& g, int player,
    const std::vector<std::vector<double>>& q_i,
    const std::vector<double>& value_est);

// Lower bound on the update direction: the same expression with the averaged
// value u^i(s') in place of the max v^i(s'), minimized over (s,a).
double lower_upsilon(const MarkovGame& g, const LearnerState& ls, int player);

// Cross-payoff term Gamma_k^{ij}(s) =
//   E_{a ~ pi_k(s)} [ Q^i(s, a with a^j := br_action_j, a^{-j}) - Q^i(s,a) ].
double gamma_term(const MarkovGame& g, const LearnerState& ls, int player_i,
                  int player_j, int br_action_j, int state);

// Max over (s, a, deviations of `deviating_player`) of the variation of
// deltaQ = q_i - q_j in that player's action component. Zero when the payoff
// difference is strategically irrelevant to the deviating player.
double strategic_equivalence_residual(
    const MarkovGame& g, const std::vector<std::vector<double>>& q_i,
    const std::vector<std::vector<double>>& q_j, int deviating_player);

struct TelescopeCheck {
  double lhs1 = 0.0, rhs1 = 0.0;  // sum_k beta_k prod_{l=k0}^{k-1}(1-beta_l)
  double lhs2 = 0.0, rhs2 = 0.0;  // reversed-product variant
};

// Evaluates both sides of the two partial-product identities over the slice
// beta[0..], with the empty-product convention prod over an empty range = 1.
// The identities hold for k0 <= k1 <= k2 + 1 (k1 = k2 + 1 is the empty sum).
// Products switch to log space when any factor drops below 1e-3.
TelescopeCheck telescoping_sums(std::span<const double> beta, std::int64_t k0,
                                std::int64_t k1, std::int64_t k2);

struct TailMonotonicityStat {
  // Per player: min over k1 in the window and k2 >= k1 of
  // sum_{k=k1}^{k2} beta_k * lower_upsilon_k.
  std::vector<double> min_partial_sum;
  std::int64_t window_begin_k = 0;
  std::int64_t window_end_k = 0;
};

// Requires the trailing `window` records of the trace to be at full cadence
// (consecutive iteration numbers); throws std::invalid_argument otherwise.
TailMonotonicityStat tail_monotonicity(const Trace& trace, std::size_t window);

// Fills one trace record from a pre-step snapshot. `q_change` and
// `def_identity_err` are left at 0; the stepping loop owns those.
TraceRecord make_trace_record(const MarkovGame& g, const LearnerState& ls,
                              double alpha, double beta);

}  // namespace mgfp

#endif  // MGFP_DIAGNOSTICS_HPP_
