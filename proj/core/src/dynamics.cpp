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

#include "mgfp/dynamics.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "mgfp/diagnostics.hpp"
#include "mgfp/oracles.hpp"

namespace mgfp {

LearnerState make_initial_state(const MarkovGame& g, const RunConfig& config) {
  LearnerState ls;
  ls.iteration = 0;

  ls.beliefs.resize(g.n_players);
  switch (config.belief_init.kind) {
    case BeliefInit::Kind::kUniform:
      for (int i = 0; i < g.n_players; ++i) {
        const int na = g.num_actions(i);
        ls.beliefs[i].assign(g.num_states(),
                             std::vector<double>(na, 1.0 / na));
      }
      break;
    case BeliefInit::Kind::kExplicit:
      if (static_cast<int>(config.belief_init.values.size()) != g.n_players)
        throw std::invalid_argument("explicit beliefs: wrong player count");
      ls.beliefs = config.belief_init.values;
      break;
  }

  ls.q.resize(g.n_players);
  switch (config.q_init.kind) {
    case QInit::Kind::kZeros:
      for (int i = 0; i < g.n_players; ++i)
        ls.q[i].assign(g.num_states(),
                       std::vector<double>(g.joint.size(), 0.0));
      break;
    case QInit::Kind::kConstant:
      for (int i = 0; i < g.n_players; ++i)
        ls.q[i].assign(g.num_states(),
                       std::vector<double>(g.joint.size(), config.q_init.value));
      break;
    case QInit::Kind::kExplicit:
      if (static_cast<int>(config.q_init.values.size()) != g.n_players)
        throw std::invalid_argument("explicit Q init: wrong player count");
      ls.q = config.q_init.values;
      break;
  }
  return ls;
}

double expected_q(const JointActionSpace& joint,
                  const std::vector<double>& q_row,
                  const std::vector<std::vector<std::vector<double>>>& beliefs,
                  int state, int player, int action) {
  double acc = 0.0;
  const int n_joint = joint.size();
  const int n_players = joint.num_players();
  for (int a = 0; a < n_joint; ++a) {
    if (joint.component(a, player) != action) continue;
    double w = 1.0;
    for (int j = 0; j < n_players; ++j) {
      if (j == player) continue;
      w *= beliefs[j][state][joint.component(a, j)];
    }
    acc += w * q_row[a];
  }
  return acc;
}

BestResponse best_response_and_value(
    const JointActionSpace& joint, const std::vector<double>& q_row,
    const std::vector<std::vector<std::vector<double>>>& beliefs, int state,
    int player) {
  BestResponse br;
  br.action = 0;
  br.value = expected_q(joint, q_row, beliefs, state, player, 0);
  for (int a = 1; a < joint.size(player); ++a) {
    const double v = expected_q(joint, q_row, beliefs, state, player, a);
    if (v > br.value) {
      br.value = v;
      br.action = a;
    }
  }
  return br;
}

FictitiousPlayRunner::FictitiousPlayRunner(const MarkovGame& g,
                                           const StepSchedule& sched,
                                           LearnerState initial)
    : game_(&g), sched_(&sched), state_(std::move(initial)) {
  upsilon_.resize(g.n_players);
  for (int i = 0; i < g.n_players; ++i)
    upsilon_[i].assign(g.num_states(),
                       std::vector<double>(g.joint.size(), 0.0));
  br_.assign(g.n_players, std::vector<BestResponse>(g.num_states()));
  q_change_.assign(g.n_players, 0.0);
}

void FictitiousPlayRunner::step() {
  const MarkovGame& g = *game_;
  const std::int64_t k = state_.iteration;
  const double alpha = sched_->alpha(k);
  const double beta = sched_->beta(k);
  last_alpha_ = alpha;
  last_beta_ = beta;

  const int n_states = g.num_states();
  const int n_joint = g.joint.size();

  // Read phase: best responses and values against the current state.
  for (int i = 0; i < g.n_players; ++i)
    for (int s = 0; s < n_states; ++s)
      br_[i][s] =
          best_response_and_value(g.joint, state_.q[i][s], state_.beliefs, s, i);

  // Update directions from the pre-step Q and values.
  for (int i = 0; i < g.n_players; ++i) {
    for (int s = 0; s < n_states; ++s) {
      for (int a = 0; a < n_joint; ++a) {
        double acc = 0.0;
        for (int sp = 0; sp < n_states; ++sp)
          acc += g.transitions[s][a][sp] * br_[i][sp].value;
        upsilon_[i][s][a] =
            g.rewards[i][s][a] + g.gamma * acc - state_.q[i][s][a];
      }
    }
  }

  // Write phase.
  for (int i = 0; i < g.n_players; ++i) {
    double change = 0.0;
    for (int s = 0; s < n_states; ++s) {
      for (int a = 0; a < n_joint; ++a) {
        const double delta = beta * upsilon_[i][s][a];
        state_.q[i][s][a] += delta;
        change = std::max(change, std::abs(delta));
      }
      auto& belief = state_.beliefs[i][s];
      const int br_action = br_[i][s].action;
      for (int a = 0; a < static_cast<int>(belief.size()); ++a) {
        const double target = (a == br_action) ? 1.0 : 0.0;
        belief[a] += alpha * (target - belief[a]);
      }
    }
    q_change_[i] = change;
  }
  ++state_.iteration;
}

LearnerState fp_step(const LearnerState& ls, const MarkovGame& g,
                     const StepSchedule& sched) {
  FictitiousPlayRunner runner(g, sched, ls);
  runner.step();
  return runner.state();
}

namespace {

StrategyProfile beliefs_as_profile(const LearnerState& ls) {
  StrategyProfile profile;
  profile.policy = ls.beliefs;
  return profile;
}

double pairwise_q_gap(const LearnerState& ls) {
  double gap = 0.0;
  const int n = static_cast<int>(ls.q.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (size_t s = 0; s < ls.q[i].size(); ++s)
        for (size_t a = 0; a < ls.q[i][s].size(); ++a)
          gap = std::max(gap, std::abs(ls.q[i][s][a] - ls.q[j][s][a]));
    }
  }
  return gap;
}

}  // namespace

RunResult run(const MarkovGame& g, const RunConfig& config,
              const StepSchedule& sched) {
  const auto t0 = std::chrono::steady_clock::now();
  if (config.cadence < 1) throw std::invalid_argument("cadence must be >= 1");
  if (config.stop == RunConfig::StopRule::kExploitability &&
      !(config.epsilon > 0.0))
    throw std::invalid_argument("exploitability stop rule needs epsilon > 0");

  RunResult result;
  result.schedule_report = validate_schedule(sched);

  FictitiousPlayRunner runner(g, sched, make_initial_state(g, config));

  result.trace.meta.n_players = g.n_players;
  result.trace.meta.n_states = g.num_states();
  result.trace.meta.has_controller = g.controller.has_value();
  result.trace.meta.has_exploitability = config.record_exploitability;
  result.trace.meta.has_beliefs = true;
  for (int i = 0; i < g.n_players; ++i)
    result.trace.meta.n_actions.push_back(g.num_actions(i));
  result.trace.meta.state_names = g.states;

  const double q_lo = g.min_reward() / (1.0 - g.gamma);
  const double q_hi = g.max_reward() / (1.0 - g.gamma);
  bool init_in_bounds = true;
  for (const auto& per_state : runner.state().q)
    for (const auto& row : per_state)
      for (double v : row)
        if (v < q_lo || v > q_hi) init_in_bounds = false;

  result.min_belief_entry = 0.0;
  const bool needs_exploitability =
      config.record_exploitability ||
      config.stop == RunConfig::StopRule::kExploitability;

  bool stopped = false;
  for (std::int64_t k = 0; k < config.max_iterations && !stopped; ++k) {
    const bool record = (k % config.cadence == 0);
    if (record) {
      const LearnerState& ls = runner.state();
      TraceRecord rec = make_trace_record(g, ls, sched.alpha(k), sched.beta(k));
      for (int i = 0; i < g.n_players; ++i)
        rec.players[i].q_change_sup = runner.last_q_change()[i];
      if (needs_exploitability) {
        rec.exploitability = exploitability(g, beliefs_as_profile(ls));
        if (config.stop == RunConfig::StopRule::kExploitability &&
            rec.exploitability < config.epsilon)
          stopped = true;
      }

      // Pre-step Q snapshot for the definitional identity check.
      const auto q_before = ls.q;
      std::vector<std::vector<double>> value_est(g.n_players);
      for (int i = 0; i < g.n_players; ++i)
        value_est[i] = rec.players[i].value_est;

      runner.step();

      for (int i = 0; i < g.n_players; ++i) {
        const auto ups = big_upsilon(g, i, q_before[i], value_est[i]);
        double err = 0.0;
        for (int s = 0; s < g.num_states(); ++s)
          for (int a = 0; a < g.joint.size(); ++a)
            err = std::max(err, std::abs(runner.state().q[i][s][a] -
                                         (q_before[i][s][a] +
                                          runner.last_beta() * ups[s][a])));
        rec.players[i].def_identity_err = err;
      }
      result.trace.records.push_back(std::move(rec));
    } else {
      runner.step();
    }

    // Cheap per-iteration invariant bookkeeping.
    const LearnerState& ls = runner.state();
    result.max_q_gap_ever = std::max(result.max_q_gap_ever, pairwise_q_gap(ls));
    for (int i = 0; i < g.n_players; ++i) {
      for (int s = 0; s < g.num_states(); ++s) {
        double sum = 0.0;
        for (double b : ls.beliefs[i][s]) {
          sum += b;
          result.min_belief_entry = std::min(result.min_belief_entry, b);
        }
        result.max_belief_sum_err =
            std::max(result.max_belief_sum_err, std::abs(sum - 1.0));
        if (init_in_bounds) {
          for (double v : ls.q[i][s])
            if (v < q_lo - 1e-12 || v > q_hi + 1e-12)
              result.q_within_bounds = false;
        }
      }
    }
  }

  result.final_state = runner.state();
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

}  // namespace mgfp
