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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "mgfp/dynamics.hpp"
#include "mgfp/generators.hpp"
#include "mgfp/schedule.hpp"
#include "test_util.hpp"

namespace mgfp {
namespace {

TEST_CASE("expected_q with no opponents returns the raw entry") {
  const MarkovGame g = test::single_state_game({{3.0, 7.0}}, {2}, 0.5);
  RunConfig cfg;
  const auto ls = make_initial_state(g, cfg);
  CHECK(expected_q(g.joint, {3.0, 7.0}, ls.beliefs, 0, 0, 1) == 7.0);
}

TEST_CASE("expected_q averages one opponent's belief") {
  const MarkovGame g = test::matching_pennies();
  RunConfig cfg;
  const auto ls = make_initial_state(g, cfg);
  // Own action 0, opponent uniform, q over that row (1, 3).
  CHECK(expected_q(g.joint, {1.0, 3.0, 0.0, 0.0}, ls.beliefs, 0, 0, 0) ==
        doctest::Approx(2.0));
}

TEST_CASE("expected_q with two uniform opponents") {
  const MarkovGame g = test::single_state_game(
      {{0, 0, 0, 4, 0, 0, 0, 4}, {0, 0, 0, 0, 0, 0, 0, 0},
       {0, 0, 0, 0, 0, 0, 0, 0}},
      {2, 2, 2}, 0.5);
  RunConfig cfg;
  const auto ls = make_initial_state(g, cfg);
  CHECK(expected_q(g.joint, {0, 0, 0, 4, 0, 0, 0, 4}, ls.beliefs, 0, 0, 0) ==
        doctest::Approx(1.0));
  CHECK(expected_q(g.joint, {0, 0, 0, 4, 0, 0, 0, 4}, ls.beliefs, 0, 0, 1) ==
        doctest::Approx(1.0));
}

TEST_CASE("best response ties break to the lowest index") {
  const MarkovGame g = test::single_state_game({{5.0, 5.0, 5.0}}, {3}, 0.0);
  RunConfig cfg;
  const auto ls = make_initial_state(g, cfg);
  const auto br =
      best_response_and_value(g.joint, {5.0, 5.0, 5.0}, ls.beliefs, 0, 0);
  CHECK(br.action == 0);
  CHECK(br.value == 5.0);

  const auto br2 =
      best_response_and_value(g.joint, {1.0, 2.5, 2.5}, ls.beliefs, 0, 0);
  CHECK(br2.action == 1);
  CHECK(br2.value == 2.5);
}

TEST_CASE("best response on matching pennies vs uniform opponent") {
  const MarkovGame g = test::matching_pennies();
  RunConfig cfg;
  const auto ls = make_initial_state(g, cfg);
  const auto br =
      best_response_and_value(g.joint, g.rewards[0][0], ls.beliefs, 0, 0);
  CHECK(br.action == 0);
  CHECK(br.value == doctest::Approx(0.0));
}

TEST_CASE("one fp_step on the coordination game") {
  const MarkovGame g = test::coordination_game(/*gamma=*/0.4);
  RunConfig cfg;
  const auto ls0 = make_initial_state(g, cfg);
  const auto sched = StepSchedule::power_law(0.6, 0.9);  // alpha_0 = beta_0 = 1
  const auto ls1 = fp_step(ls0, g, sched);

  CHECK(ls1.iteration == 1);
  for (int i = 0; i < 2; ++i) {
    CHECK(ls1.beliefs[i][0][0] == 1.0);
    CHECK(ls1.beliefs[i][0][1] == 0.0);
    // v_0 = 0 since Q_0 = 0, so Q_1 = r.
    for (int a = 0; a < 4; ++a) CHECK(ls1.q[i][0][a] == g.rewards[i][0][a]);
  }
}

TEST_CASE("single-player fp_step is smoothed value iteration") {
  const MarkovGame g = test::single_state_game({{2.0, -1.0}}, {2}, 0.5);
  RunConfig cfg;
  const auto ls0 = make_initial_state(g, cfg);
  const auto sched = StepSchedule::constant(0.5, 0.3);
  const auto ls1 = fp_step(ls0, g, sched);
  CHECK(ls1.q[0][0][0] == doctest::Approx(0.3 * 2.0));
  CHECK(ls1.q[0][0][1] == doctest::Approx(0.3 * -1.0));
}

TEST_CASE("zero step sizes leave the state fixed") {
  const MarkovGame g = test::matching_pennies();
  RunConfig cfg;
  const auto ls0 = make_initial_state(g, cfg);
  const auto sched = StepSchedule::table({0.0}, {0.0});
  const auto ls1 = fp_step(ls0, g, sched);
  CHECK(ls1.iteration == 1);
  CHECK(ls1.beliefs == ls0.beliefs);
  CHECK(ls1.q == ls0.q);
}

TEST_CASE("fp_step propagates schedule exhaustion") {
  const MarkovGame g = test::matching_pennies();
  RunConfig cfg;
  auto ls = make_initial_state(g, cfg);
  const auto sched = StepSchedule::table({1.0}, {1.0});
  ls = fp_step(ls, g, sched);
  CHECK_THROWS_AS(fp_step(ls, g, sched), ScheduleExhausted);
}

TEST_CASE("run with zero iterations is a no-op") {
  const MarkovGame g = test::matching_pennies();
  RunConfig cfg;
  cfg.max_iterations = 0;
  const auto result = run(g, cfg, StepSchedule::power_law(0.6, 0.9));
  CHECK(result.trace.records.empty());
  CHECK(result.final_state.iteration == 0);
}

TEST_CASE("matching pennies beliefs approach the mixed equilibrium") {
  const MarkovGame g = test::matching_pennies(0.5);
  RunConfig cfg;
  cfg.max_iterations = 100000;
  cfg.cadence = 10000;
  const auto result = run(g, cfg, StepSchedule::power_law(0.6, 0.9));
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a)
      CHECK(std::abs(result.final_state.beliefs[i][0][a] - 0.5) < 0.05);
}

TEST_CASE("runs are deterministic and traces bitwise identical") {
  GenParams p;
  p.seed = 21;
  const MarkovGame g = gen_zero_sum_single_controller(p);
  RunConfig cfg;
  cfg.max_iterations = 500;
  cfg.cadence = 50;
  cfg.record_exploitability = true;
  const auto sched = StepSchedule::power_law(0.6, 0.9);
  const auto r1 = run(g, cfg, sched);
  const auto r2 = run(g, cfg, sched);
  REQUIRE(r1.trace.records.size() == r2.trace.records.size());
  for (size_t t = 0; t < r1.trace.records.size(); ++t) {
    const auto& a = r1.trace.records[t];
    const auto& b = r2.trace.records[t];
    CHECK(a.k == b.k);
    CHECK(a.max_q_gap == b.max_q_gap);
    CHECK(a.exploitability == b.exploitability);
    for (int i = 0; i < g.n_players; ++i) {
      CHECK(a.players[i].value_est == b.players[i].value_est);
      CHECK(a.players[i].belief == b.players[i].belief);
    }
  }
  CHECK(r1.final_state.q == r2.final_state.q);
  CHECK(r1.final_state.beliefs == r2.final_state.beliefs);
}

TEST_CASE("run keeps beliefs on the simplex and Q in bounds") {
  GenParams p;
  p.n_players = 3;
  p.seed = 5;
  const MarkovGame g = gen_identical_single_controller(p);
  RunConfig cfg;
  cfg.max_iterations = 20000;
  cfg.cadence = 1000;
  const auto result = run(g, cfg, StepSchedule::power_law(0.6, 0.9));
  CHECK(result.max_belief_sum_err <= 1e-9);
  CHECK(result.min_belief_entry >= -1e-12);
  CHECK(result.q_within_bounds);
}

TEST_CASE("cadence controls the number of trace rows") {
  const MarkovGame g = test::matching_pennies();
  RunConfig cfg;
  cfg.max_iterations = 1000;
  cfg.cadence = 100;
  const auto result = run(g, cfg, StepSchedule::power_law(0.6, 0.9));
  CHECK(result.trace.records.size() == 10);
  CHECK(result.trace.records.front().k == 0);
  CHECK(result.trace.records.back().k == 900);
}

TEST_CASE("exploitability stop rule halts early") {
  // Coordination game: one step with alpha_0 = 1 lands on the pure NE.
  const MarkovGame g = test::coordination_game(0.4);
  RunConfig cfg;
  cfg.max_iterations = 100000;
  cfg.cadence = 10;
  cfg.stop = RunConfig::StopRule::kExploitability;
  cfg.epsilon = 1e-6;
  cfg.record_exploitability = true;
  const auto result = run(g, cfg, StepSchedule::power_law(0.6, 0.9));
  CHECK(result.final_state.iteration < 100000);
  CHECK(result.trace.records.back().exploitability < 1e-6);
}

TEST_CASE("run rejects invalid configs") {
  const MarkovGame g = test::matching_pennies();
  RunConfig cfg;
  cfg.cadence = 0;
  CHECK_THROWS_AS(run(g, cfg, StepSchedule::power_law(0.6, 0.9)),
                  std::invalid_argument);
  RunConfig cfg2;
  cfg2.stop = RunConfig::StopRule::kExploitability;
  cfg2.epsilon = 0.0;
  CHECK_THROWS_AS(run(g, cfg2, StepSchedule::power_law(0.6, 0.9)),
                  std::invalid_argument);
}

TEST_CASE("explicit initialization is honored") {
  const MarkovGame g = test::coordination_game(0.0);
  RunConfig cfg;
  cfg.q_init.kind = QInit::Kind::kConstant;
  cfg.q_init.value = 2.5;
  cfg.belief_init.kind = BeliefInit::Kind::kExplicit;
  cfg.belief_init.values = {{{0.25, 0.75}}, {{0.5, 0.5}}};
  const auto ls = make_initial_state(g, cfg);
  CHECK(ls.q[1][0][3] == 2.5);
  CHECK(ls.beliefs[0][0][1] == 0.75);
}

}  // namespace
}  // namespace mgfp
