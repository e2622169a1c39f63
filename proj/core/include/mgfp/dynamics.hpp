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

#ifndef MGFP_DYNAMICS_HPP_
#define MGFP_DYNAMICS_HPP_

#include <cstdint>
#include <vector>

#include "mgfp/game.hpp"
#include "mgfp/schedule.hpp"
#include "mgfp/trace.hpp"

namespace mgfp {

// Beliefs and local Q-estimates at iteration k. Every player holds the same
// belief about player j, so one belief vector per (player, state) suffices.
struct LearnerState {
  // beliefs[player][state][action]
  std::vector<std::vector<std::vector<double>>> beliefs;
  // q[player][state][joint action]
  std::vector<std::vector<std::vector<double>>> q;
  std::int64_t iteration = 0;
};

struct QInit {
  enum class Kind { kZeros, kConstant, kExplicit };
  Kind kind = Kind::kZeros;
  double value = 0.0;
  // [player][state][joint action], used when kind == kExplicit
  std::vector<std::vector<std::vector<double>>> values;
};

struct BeliefInit {
  enum class Kind { kUniform, kExplicit };
  Kind kind = Kind::kUniform;
  // [player][state][action], used when kind == kExplicit
  std::vector<std::vector<std::vector<double>>> values;
};

struct RunConfig {
  std::int64_t max_iterations = 100000;
  QInit q_init;
  BeliefInit belief_init;
  // Record diagnostics every `cadence` iterations.
  std::int64_t cadence = 1;
  enum class StopRule { kIterations, kExploitability };
  StopRule stop = StopRule::kIterations;
  double epsilon = 0.0;  // exploitability threshold for kExploitability
  bool record_exploitability = false;
  // Consumed only by generator-backed experiment configs; the dynamics are
  // deterministic.
  std::uint64_t seed = 0;
};

LearnerState make_initial_state(const MarkovGame& g, const RunConfig& config);

// Expected Q-value of playing `action` at state-slice `q_row` (indexed by
// joint action) when the opponents mix according to their beliefs at the same
// state. Exact enumeration, canonical (ascending joint index) summation order.
double expected_q(const JointActionSpace& joint,
                  const std::vector<double>& q_row,
                  const std::vector<std::vector<std::vector<double>>>& beliefs,
                  int state, int player, int action);

struct BestResponse {
  int action = 0;
  double value = 0.0;
};

// Maximizes expected_q over the player's own actions; ties go to the lowest
// action index.
BestResponse best_response_and_value(
    const JointActionSpace& joint, const std::vector<double>& q_row,
    const std::vector<std::vector<std::vector<double>>>& beliefs, int state,
    int player);

// Iterates the coupled belief / Q-estimate update over all states at once.
// All reads happen against the pre-step state (synchronous semantics).
class FictitiousPlayRunner {
 public:
  FictitiousPlayRunner(const MarkovGame& g, const StepSchedule& sched,
                       LearnerState initial);

  void step();

  const LearnerState& state() const { return state_; }
  const MarkovGame& game() const { return *game_; }

  // Q-update direction tables [player][state][joint] used by the last step.
  const std::vector<std::vector<std::vector<double>>>& last_upsilon() const {
    return upsilon_;
  }
  // sup-norm Q change per player over the last step.
  const std::vector<double>& last_q_change() const { return q_change_; }
  double last_alpha() const { return last_alpha_; }
  double last_beta() const { return last_beta_; }

 private:
  const MarkovGame* game_;
  const StepSchedule* sched_;
  LearnerState state_;
  std::vector<std::vector<std::vector<double>>> upsilon_;
  std::vector<std::vector<BestResponse>> br_;  // [player][state]
  std::vector<double> q_change_;
  double last_alpha_ = 0.0;
  double last_beta_ = 0.0;
};

// One synchronous update, value-semantics wrapper around the runner.
LearnerState fp_step(const LearnerState& ls, const MarkovGame& g,
                     const StepSchedule& sched);

struct RunResult {
  LearnerState final_state;
  Trace trace;
  ScheduleReport schedule_report;
  // Invariant bookkeeping accumulated over recorded iterations.
  double max_belief_sum_err = 0.0;
  double min_belief_entry = 0.0;
  bool q_within_bounds = true;
  // max_{i,j} ||Q_k^i - Q_k^j||_inf over every iteration, not just recorded
  // ones.
  double max_q_gap_ever = 0.0;
  double wall_time_s = 0.0;
};

RunResult run(const MarkovGame& g, const RunConfig& config,
              const StepSchedule& sched);

}  // namespace mgfp

#endif  // MGFP_DYNAMICS_HPP_
