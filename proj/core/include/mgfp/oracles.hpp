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

#ifndef MGFP_ORACLES_HPP_
#define MGFP_ORACLES_HPP_

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mgfp/game.hpp"

namespace mgfp {

struct LpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MatrixGameSolution {
  std::vector<double> row_strategy;  // maximin-optimal
  std::vector<double> col_strategy;  // minimax-optimal
  double value = 0.0;
};

// Exact minimax solve of the matrix game M (row player maximizes) by linear
// programming with a dense simplex (Bland's rule).
MatrixGameSolution solve_matrix_zero_sum(
    const std::vector<std::vector<double>>& matrix);

struct SolveResult {
  // q_star[player][state][joint action]
  std::vector<std::vector<std::vector<double>>> q_star;
  std::vector<std::vector<double>> values;  // [player][state]
  StrategyProfile profile;
  double exploitability = 0.0;
  std::int64_t iterations_used = 0;
  double residual = 0.0;  // final sup-norm operator residual
};

// Fixed-point iteration for two-player zero-sum games: each sweep solves one
// minimax matrix game per state. Stops when the sup-norm change is within
// tol*(1-gamma)/(2*gamma), so reported values are within tol of the fixed
// point.
SolveResult shapley_value_iteration(const MarkovGame& g, double tol);

struct MdpSolution {
  std::vector<double> v;
  std::vector<std::vector<double>> q;  // [state][action]
  std::vector<int> policy;             // greedy, lowest-index tie-break
  std::int64_t iterations = 0;
  double residual = 0.0;
};

MdpSolution mdp_value_iteration(const InducedMdp& mdp, double tol);

// Per-player discounted values of the fixed profile, by direct dense solve of
// the |S|-dimensional linear system. Returns values[player][state].
std::vector<std::vector<double>> policy_evaluation(
    const MarkovGame& g, const StrategyProfile& profile);

struct ExploitabilityReport {
  double expected = 0.0;       // under the game's initial distribution
  double per_state_max = 0.0;  // max over players and states
  std::vector<std::vector<double>> best_response_gain;  // [player][state]
};

ExploitabilityReport exploitability_report(const MarkovGame& g,
                                           const StrategyProfile& profile);

// Best-response improvement over the profile, in expectation over the initial
// state distribution; >= 0 up to roundoff, 0 exactly at equilibrium.
double exploitability(const MarkovGame& g, const StrategyProfile& profile);

struct StageEquilibria {
  std::vector<int> pure_equilibria;  // joint action indices
  std::vector<int> global_maxima;
};

// Exhaustive pure-equilibrium enumeration for a common-payoff stage table
// indexed by joint action.
StageEquilibria stage_equilibria(const std::vector<double>& table,
                                 const JointActionSpace& joint);

}  // namespace mgfp

#endif  // MGFP_ORACLES_HPP_
