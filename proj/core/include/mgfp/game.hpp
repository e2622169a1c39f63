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

#ifndef MGFP_GAME_HPP_
#define MGFP_GAME_HPP_

#include <optional>
#include <string>
#include <vector>

namespace mgfp {

// Structural equality tolerance for probability rows, zero-sum checks and the
// single-controller / payoff-difference conditions.
inline constexpr double kStructuralTol = 1e-12;

// Flat index over the joint action space. Player 0 varies slowest, matching
// the nested-array order of the game file format.
class JointActionSpace {
 public:
  JointActionSpace() = default;
  explicit JointActionSpace(std::vector<int> sizes);

  int num_players() const { return static_cast<int>(sizes_.size()); }
  int size() const { return total_; }
  int size(int player) const { return sizes_[player]; }

  int encode(const std::vector<int>& actions) const;
  std::vector<int> decode(int joint) const;
  int component(int joint, int player) const {
    return (joint / strides_[player]) % sizes_[player];
  }
  // Joint index with one player's component replaced.
  int replace(int joint, int player, int action) const {
    return joint + (action - component(joint, player)) * strides_[player];
  }

 private:
  std::vector<int> sizes_;
  std::vector<int> strides_;
  int total_ = 1;
};

// Finite n-player Markov game with dense reward and transition tensors.
// Immutable by convention after construction; all operations on it are pure.
struct MarkovGame {
  int n_players = 0;
  std::vector<std::string> states;
  std::vector<std::vector<std::string>> actions;  // [player][action] names
  double gamma = 0.0;
  std::optional<int> controller;  // declared, not inferred

  // rewards[player][state][joint action]
  std::vector<std::vector<std::vector<double>>> rewards;
  // transitions[state][joint action][next state]
  std::vector<std::vector<std::vector<double>>> transitions;
  // Distribution over initial states; uniform unless the game file says
  // otherwise.
  std::vector<double> initial_dist;

  JointActionSpace joint;

  int num_states() const { return static_cast<int>(states.size()); }
  int num_actions(int player) const {
    return static_cast<int>(actions[player].size());
  }
  double reward(int player, int state, int joint_action) const {
    return rewards[player][state][joint_action];
  }

  // Rebuilds the joint-action index and the default initial distribution.
  // Call after filling in the fields by hand.
  void finalize();

  double min_reward() const;
  double max_reward() const;
};

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

// Computed structural flags; never user-asserted.
struct GameClass {
  bool zero_sum = false;
  bool identical_interest = false;
  bool single_controller = false;
  bool corollary_condition = false;
};

// Per-player, per-state mixed strategies: policy[player][state][action].
struct StrategyProfile {
  std::vector<std::vector<std::vector<double>>> policy;

  static StrategyProfile uniform(const MarkovGame& g);
};

// Single-player MDP obtained by fixing the other players' strategies and
// marginalizing exactly.
struct InducedMdp {
  int n_states = 0;
  int n_actions = 0;
  double gamma = 0.0;
  std::vector<std::vector<double>> rewards;                // [state][action]
  std::vector<std::vector<std::vector<double>>> transitions;  // [s][a][s']
  std::vector<double> initial_dist;
};

ValidationReport validate_game(const MarkovGame& g);

GameClass classify(const MarkovGame& g);

// Marginalizes rewards and transitions of player `player` under the other
// players' strategies in `others` (component `player` of `others` is ignored).
InducedMdp induce_mdp(const MarkovGame& g, int player,
                      const StrategyProfile& others);

}  // namespace mgfp

#endif  // MGFP_GAME_HPP_
