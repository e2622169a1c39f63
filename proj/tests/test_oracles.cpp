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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "mgfp/generators.hpp"
#include "mgfp/oracles.hpp"
#include "test_util.hpp"

namespace mgfp {
namespace {

// Value bracket from a long classical fictitious-play run (Robinson's
// theorem). Returns [lower, upper] bounds on the game value.
std::pair<double, double> fp_value_bracket(
    const std::vector<std::vector<double>>& m, int iterations) {
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  std::vector<double> row_counts(rows, 0.0), col_counts(cols, 0.0);
  int r = 0, c = 0;
  for (int t = 0; t < iterations; ++t) {
    row_counts[r] += 1.0;
    col_counts[c] += 1.0;
    // Row best response to the column empirical average, and vice versa.
    double best_r = -std::numeric_limits<double>::infinity();
    int arg_r = 0;
    for (int i = 0; i < rows; ++i) {
      double acc = 0.0;
      for (int j = 0; j < cols; ++j) acc += col_counts[j] * m[i][j];
      if (acc > best_r) {
        best_r = acc;
        arg_r = i;
      }
    }
    double best_c = std::numeric_limits<double>::infinity();
    int arg_c = 0;
    for (int j = 0; j < cols; ++j) {
      double acc = 0.0;
      for (int i = 0; i < rows; ++i) acc += row_counts[i] * m[i][j];
      if (acc < best_c) {
        best_c = acc;
        arg_c = j;
      }
    }
    r = arg_r;
    c = arg_c;
  }
  // Guarantees of the empirical averages.
  double lower = std::numeric_limits<double>::infinity();
  for (int j = 0; j < cols; ++j) {
    double acc = 0.0;
    for (int i = 0; i < rows; ++i)
      acc += row_counts[i] / iterations * m[i][j];
    lower = std::min(lower, acc);
  }
  double upper = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < rows; ++i) {
    double acc = 0.0;
    for (int j = 0; j < cols; ++j)
      acc += col_counts[j] / iterations * m[i][j];
    upper = std::max(upper, acc);
  }
  return {lower, upper};
}

TEST_CASE("matching pennies matrix solve") {
  const auto sol = solve_matrix_zero_sum({{1, -1}, {-1, 1}});
  CHECK(sol.value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sol.row_strategy[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sol.col_strategy[0] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("dominance-solvable matrix") {
  const auto sol = solve_matrix_zero_sum({{1, 0}, {2, 1}});
  CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sol.row_strategy[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sol.col_strategy[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("LP duality holds on random matrices") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const int rows = 2 + static_cast<int>(rng.next() % 3);
    const int cols = 2 + static_cast<int>(rng.next() % 3);
    std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
    for (auto& row : m)
      for (double& v : row) v = 2.0 * rng.next_unit() - 1.0;
    const auto sol = solve_matrix_zero_sum(m);

    double sum_x = 0.0, sum_y = 0.0;
    for (double v : sol.row_strategy) {
      CHECK(v >= -1e-9);
      sum_x += v;
    }
    for (double v : sol.col_strategy) {
      CHECK(v >= -1e-9);
      sum_y += v;
    }
    CHECK(sum_x == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sum_y == doctest::Approx(1.0).epsilon(1e-9));

    // x guarantees at least the value against every pure column; y concedes
    // at most the value against every pure row.
    for (int j = 0; j < cols; ++j) {
      double acc = 0.0;
      for (int i = 0; i < rows; ++i) acc += sol.row_strategy[i] * m[i][j];
      CHECK(acc >= sol.value - 1e-9);
    }
    for (int i = 0; i < rows; ++i) {
      double acc = 0.0;
      for (int j = 0; j < cols; ++j) acc += sol.col_strategy[j] * m[i][j];
      CHECK(acc <= sol.value + 1e-9);
    }
  }
}

TEST_CASE("matrix solve agrees with classical fictitious play") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::vector<double>> m(4, std::vector<double>(4));
    for (auto& row : m)
      for (double& v : row) v = 2.0 * rng.next_unit() - 1.0;
    const auto sol = solve_matrix_zero_sum(m);
    const auto [lower, upper] = fp_value_bracket(m, 200000);
    CHECK(sol.value >= lower - 1e-3);
    CHECK(sol.value <= upper + 1e-3);
    CHECK(upper - lower < 5e-3);  // FP has actually converged
  }
}

TEST_CASE("shapley on a single-state game reduces to the matrix solve") {
  // val = 0 for matching pennies, so Q* = r exactly.
  const MarkovGame g = test::matching_pennies(0.5);
  const auto sol = shapley_value_iteration(g, 1e-10);
  for (int a = 0; a < 4; ++a) {
    CHECK(sol.q_star[0][0][a] == doctest::Approx(g.rewards[0][0][a]).epsilon(1e-9));
    CHECK(sol.q_star[1][0][a] == doctest::Approx(g.rewards[1][0][a]).epsilon(1e-9));
  }
  CHECK(sol.values[0][0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sol.exploitability <= 1e-8);
}

TEST_CASE("shapley with gamma = 0 returns the stage game") {
  GenParams p;
  p.gamma = 0.0;
  p.seed = 17;
  const MarkovGame g = gen_zero_sum_single_controller(p);
  const auto sol = shapley_value_iteration(g, 1e-10);
  for (int s = 0; s < g.num_states(); ++s)
    for (int a = 0; a < g.joint.size(); ++a)
      CHECK(sol.q_star[0][s][a] == doctest::Approx(g.rewards[0][s][a]));
}

TEST_CASE("shapley profile has tiny exploitability") {
  for (std::uint64_t seed : {1ULL, 2ULL}) {
    GenParams p;
    p.n_states = 2;
    p.seed = seed;
    const MarkovGame g = gen_zero_sum_single_controller(p);
    const auto sol = shapley_value_iteration(g, 1e-8);
    // Independent certification path: induced-MDP best responses.
    CHECK(exploitability(g, sol.profile) < 1e-6);
  }
}

TEST_CASE("shapley rejects non-zero-sum input") {
  GenParams p;
  p.seed = 4;
  const MarkovGame g = gen_identical_single_controller(p);
  CHECK_THROWS(shapley_value_iteration(g, 1e-6));
}

TEST_CASE("mdp value iteration closed forms") {
  InducedMdp one;
  one.n_states = 1;
  one.n_actions = 1;
  one.gamma = 0.5;
  one.rewards = {{1.0}};
  one.transitions = {{{1.0}}};
  one.initial_dist = {1.0};
  const auto sol = mdp_value_iteration(one, 1e-10);
  CHECK(sol.v[0] == doctest::Approx(2.0).epsilon(1e-9));

  one.rewards = {{0.0}};
  CHECK(mdp_value_iteration(one, 1e-10).v[0] == doctest::Approx(0.0));

  // Chain s0 -> s1 -> s1 with rewards (0, 1) and gamma 0.9.
  InducedMdp chain;
  chain.n_states = 2;
  chain.n_actions = 1;
  chain.gamma = 0.9;
  chain.rewards = {{0.0}, {1.0}};
  chain.transitions = {{{0.0, 1.0}}, {{0.0, 1.0}}};
  chain.initial_dist = {1.0, 0.0};
  const auto chain_sol = mdp_value_iteration(chain, 1e-10);
  CHECK(chain_sol.v[1] == doctest::Approx(10.0).epsilon(1e-8));
  CHECK(chain_sol.v[0] == doctest::Approx(9.0).epsilon(1e-8));
}

TEST_CASE("policy evaluation closed forms") {
  const MarkovGame g = test::matching_pennies(0.5);
  const auto vals = policy_evaluation(g, StrategyProfile::uniform(g));
  CHECK(vals[0][0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(vals[1][0] == doctest::Approx(0.0).epsilon(1e-9));

  const MarkovGame c = test::single_state_game(
      {{3, 3, 3, 3}, {3, 3, 3, 3}}, {2, 2}, 0.25);
  const auto cv = policy_evaluation(c, StrategyProfile::uniform(c));
  CHECK(cv[0][0] == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("policy evaluation matches the induced-MDP path") {
  SplitMix64 rng(314);
  for (std::uint64_t seed : {5ULL, 6ULL, 7ULL}) {
    GenParams p;
    p.n_players = 2;
    p.n_states = 3;
    p.seed = seed;
    const MarkovGame g = gen_corollary_game(p);
    // Random interior profile.
    StrategyProfile profile = StrategyProfile::uniform(g);
    for (auto& per_state : profile.policy)
      for (auto& row : per_state) {
        double sum = 0.0;
        for (double& v : row) {
          v = 0.1 + rng.next_unit();
          sum += v;
        }
        for (double& v : row) v /= sum;
      }

    const auto direct = policy_evaluation(g, profile);
    for (int i = 0; i < g.n_players; ++i) {
      // Evaluate player i's fixed policy inside its induced MDP by iterating
      // the policy-Bellman operator (independent of the linear solve).
      const auto mdp = induce_mdp(g, i, profile);
      std::vector<double> u(mdp.n_states, 0.0);
      for (int t = 0; t < 2000; ++t) {
        std::vector<double> next(mdp.n_states, 0.0);
        for (int s = 0; s < mdp.n_states; ++s) {
          for (int a = 0; a < mdp.n_actions; ++a) {
            double cont = 0.0;
            for (int sp = 0; sp < mdp.n_states; ++sp)
              cont += mdp.transitions[s][a][sp] * u[sp];
            next[s] += profile.policy[i][s][a] *
                       (mdp.rewards[s][a] + mdp.gamma * cont);
          }
        }
        u = next;
      }
      for (int s = 0; s < mdp.n_states; ++s)
        CHECK(std::abs(direct[i][s] - u[s]) < 1e-9);
    }
  }
}

TEST_CASE("exploitability of known equilibria is zero") {
  const MarkovGame mp = test::matching_pennies(0.5);
  CHECK(exploitability(mp, StrategyProfile::uniform(mp)) <=  1e-9);
  CHECK(exploitability(mp, StrategyProfile::uniform(mp)) >= -1e-9);

  const MarkovGame coord = test::coordination_game(0.3);
  StrategyProfile best = StrategyProfile::uniform(coord);
  best.policy[0][0] = {1.0, 0.0};
  best.policy[1][0] = {1.0, 0.0};
  CHECK(exploitability(coord, best) <= 1e-9);

  // The inferior pure NE: unilateral deviation still yields 0.
  StrategyProfile inferior = StrategyProfile::uniform(coord);
  inferior.policy[0][0] = {0.0, 1.0};
  inferior.policy[1][0] = {0.0, 1.0};
  CHECK(exploitability(coord, inferior) <= 1e-9);
}

TEST_CASE("exploitability is nonnegative on random profiles") {
  SplitMix64 rng(77);
  for (std::uint64_t seed : {8ULL, 9ULL}) {
    GenParams p;
    p.n_players = 3;
    p.seed = seed;
    const MarkovGame g = gen_identical_single_controller(p);
    StrategyProfile profile = StrategyProfile::uniform(g);
    for (auto& per_state : profile.policy)
      for (auto& row : per_state) {
        double sum = 0.0;
        for (double& v : row) {
          v = rng.next_unit();
          sum += v;
        }
        for (double& v : row) v /= sum;
      }
    const auto report = exploitability_report(g, profile);
    CHECK(report.expected >= -1e-9);
    CHECK(report.per_state_max >= report.expected - 1e-12);
  }
}

TEST_CASE("stage equilibria of the coordination table") {
  JointActionSpace joint({2, 2});
  const auto eq = stage_equilibria({1, 0, 0, 0}, joint);
  CHECK(eq.pure_equilibria == std::vector<int>{0, 3});
  CHECK(eq.global_maxima == std::vector<int>{0});
}

TEST_CASE("constant table makes every profile an equilibrium") {
  JointActionSpace joint({2, 2});
  const auto eq = stage_equilibria({2, 2, 2, 2}, joint);
  CHECK(eq.pure_equilibria.size() == 4);
  CHECK(eq.global_maxima.size() == 4);
}

TEST_CASE("stage equilibria match a brute-force deviation check") {
  SplitMix64 rng(55);
  JointActionSpace joint({2, 2, 2});
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> table(8);
    for (double& v : table) v = rng.next_unit();
    const auto eq = stage_equilibria(table, joint);

    std::vector<int> expected;
    for (int a = 0; a < 8; ++a) {
      bool is_ne = true;
      for (int p = 0; p < 3 && is_ne; ++p)
        for (int ap = 0; ap < 2; ++ap)
          if (table[joint.replace(a, p, ap)] > table[a] + 1e-12) is_ne = false;
      if (is_ne) expected.push_back(a);
    }
    CHECK(eq.pure_equilibria == expected);
  }
}

}  // namespace
}  // namespace mgfp
