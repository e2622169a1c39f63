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

#include "mgfp/game.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace mgfp {

JointActionSpace::JointActionSpace(std::vector<int> sizes)
    : sizes_(std::move(sizes)) {
  strides_.assign(sizes_.size(), 1);
  total_ = 1;
  for (int p = static_cast<int>(sizes_.size()) - 1; p >= 0; --p) {
    if (sizes_[p] < 1) throw std::invalid_argument("action set size < 1");
    strides_[p] = total_;
    total_ *= sizes_[p];
  }
}

int JointActionSpace::encode(const std::vector<int>& actions) const {
  int joint = 0;
  for (size_t p = 0; p < sizes_.size(); ++p) joint += actions[p] * strides_[p];
  return joint;
}

std::vector<int> JointActionSpace::decode(int joint) const {
  std::vector<int> actions(sizes_.size());
  for (size_t p = 0; p < sizes_.size(); ++p)
    actions[p] = component(joint, static_cast<int>(p));
  return actions;
}

void MarkovGame::finalize() {
  std::vector<int> sizes(n_players);
  for (int p = 0; p < n_players; ++p) sizes[p] = num_actions(p);
  joint = JointActionSpace(std::move(sizes));
  if (initial_dist.empty() && !states.empty()) {
    initial_dist.assign(states.size(), 1.0 / static_cast<double>(states.size()));
  }
}

double MarkovGame::min_reward() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& per_state : rewards)
    for (const auto& row : per_state)
      for (double r : row) m = std::min(m, r);
  return m;
}

double MarkovGame::max_reward() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& per_state : rewards)
    for (const auto& row : per_state)
      for (double r : row) m = std::max(m, r);
  return m;
}

StrategyProfile StrategyProfile::uniform(const MarkovGame& g) {
  StrategyProfile profile;
  profile.policy.resize(g.n_players);
  for (int i = 0; i < g.n_players; ++i) {
    const int na = g.num_actions(i);
    profile.policy[i].assign(g.num_states(),
                             std::vector<double>(na, 1.0 / na));
  }
  return profile;
}

namespace {

std::string joint_name(const MarkovGame& g, int joint) {
  std::ostringstream os;
  os << "(";
  const auto a = g.joint.decode(joint);
  for (int p = 0; p < g.n_players; ++p) {
    if (p > 0) os << ",";
    os << g.actions[p][a[p]];
  }
  os << ")";
  return os.str();
}

}  // namespace

ValidationReport validate_game(const MarkovGame& g) {
  ValidationReport report;
  auto add = [&report](const std::string& msg) { report.issues.push_back(msg); };

  if (g.n_players < 1) add("n_players must be >= 1");
  if (g.num_states() < 1) add("at least one state required");
  if (!(g.gamma >= 0.0) || !(g.gamma < 1.0)) {
    std::ostringstream os;
    os << "gamma " << g.gamma << " outside [0,1)";
    add(os.str());
  }
  if (static_cast<int>(g.actions.size()) != g.n_players)
    add("actions list size does not match n_players");
  if (!report.ok()) return report;

  const int n_states = g.num_states();
  const int n_joint = g.joint.size();

  for (int i = 0; i < g.n_players; ++i) {
    for (int s = 0; s < n_states; ++s) {
      for (int a = 0; a < n_joint; ++a) {
        if (!std::isfinite(g.rewards[i][s][a])) {
          std::ostringstream os;
          os << "non-finite reward for player " << i << " at (" << g.states[s]
             << "," << joint_name(g, a) << ")";
          add(os.str());
        }
      }
    }
  }

  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_joint; ++a) {
      double sum = 0.0;
      bool bad_entry = false;
      for (int sp = 0; sp < n_states; ++sp) {
        const double p = g.transitions[s][a][sp];
        if (!std::isfinite(p) || p < 0.0) bad_entry = true;
        sum += p;
      }
      if (bad_entry) {
        std::ostringstream os;
        os << "negative or non-finite transition probability at ("
           << g.states[s] << "," << joint_name(g, a) << ")";
        add(os.str());
      }
      if (std::abs(sum - 1.0) > kStructuralTol) {
        std::ostringstream os;
        os << "row sum " << sum << " != 1 at (" << g.states[s] << ","
           << joint_name(g, a) << ")";
        add(os.str());
      }
    }
  }

  if (g.controller.has_value()) {
    const int c = *g.controller;
    if (c < 0 || c >= g.n_players) {
      add("declared controller index out of range");
    } else {
      // Transitions must agree across joint actions sharing the controller's
      // component.
      for (int s = 0; s < n_states && report.issues.size() < 100; ++s) {
        for (int a = 0; a < n_joint; ++a) {
          for (int j = 0; j < g.n_players; ++j) {
            if (j == c) continue;
            for (int aj = 0; aj < g.num_actions(j); ++aj) {
              const int alt = g.joint.replace(a, j, aj);
              if (alt <= a) continue;
              for (int sp = 0; sp < n_states; ++sp) {
                if (std::abs(g.transitions[s][a][sp] -
                             g.transitions[s][alt][sp]) > kStructuralTol) {
                  std::ostringstream os;
                  os << "transitions depend on non-controller player " << j
                     << " at (" << g.states[s] << "," << joint_name(g, a)
                     << ") vs deviation " << g.actions[j][aj];
                  add(os.str());
                  sp = n_states;  // one witness per (s,a,deviation)
                }
              }
            }
          }
        }
      }
    }
  }

  if (!g.initial_dist.empty()) {
    double sum = 0.0;
    for (double p : g.initial_dist) {
      if (!std::isfinite(p) || p < 0.0) add("invalid initial distribution entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kStructuralTol)
      add("initial distribution does not sum to 1");
  }

  return report;
}

GameClass classify(const MarkovGame& g) {
  GameClass cls;
  const int n_states = g.num_states();
  const int n_joint = g.joint.size();

  cls.zero_sum = true;
  for (int s = 0; s < n_states && cls.zero_sum; ++s) {
    for (int a = 0; a < n_joint && cls.zero_sum; ++a) {
      double sum = 0.0;
      for (int i = 0; i < g.n_players; ++i) sum += g.rewards[i][s][a];
      if (std::abs(sum) > kStructuralTol) cls.zero_sum = false;
    }
  }

  cls.identical_interest = true;
  for (int i = 1; i < g.n_players && cls.identical_interest; ++i) {
    for (int s = 0; s < n_states && cls.identical_interest; ++s) {
      for (int a = 0; a < n_joint; ++a) {
        if (std::abs(g.rewards[i][s][a] - g.rewards[0][s][a]) >
            kStructuralTol) {
          cls.identical_interest = false;
          break;
        }
      }
    }
  }

  cls.single_controller = false;
  if (g.controller.has_value()) {
    cls.single_controller = true;
    const int c = *g.controller;
    for (int s = 0; s < n_states && cls.single_controller; ++s) {
      for (int a = 0; a < n_joint && cls.single_controller; ++a) {
        for (int j = 0; j < g.n_players && cls.single_controller; ++j) {
          if (j == c) continue;
          for (int aj = 0; aj < g.num_actions(j); ++aj) {
            const int alt = g.joint.replace(a, j, aj);
            for (int sp = 0; sp < n_states; ++sp) {
              if (std::abs(g.transitions[s][a][sp] -
                           g.transitions[s][alt][sp]) > kStructuralTol) {
                cls.single_controller = false;
                break;
              }
            }
            if (!cls.single_controller) break;
          }
        }
      }
    }
  }

  // Payoff-difference condition: a non-controller deviation shifts every
  // player's payoff by the same amount as the controller's payoff. Without a
  // declared controller this degenerates to identical interest.
  if (!g.controller.has_value()) {
    cls.corollary_condition = cls.identical_interest;
  } else {
    const int c = *g.controller;
    cls.corollary_condition = true;
    for (int j = 0; j < g.n_players && cls.corollary_condition; ++j) {
      if (j == c) continue;
      for (int s = 0; s < n_states && cls.corollary_condition; ++s) {
        for (int a = 0; a < n_joint && cls.corollary_condition; ++a) {
          for (int aj = 0; aj < g.num_actions(j); ++aj) {
            const int alt = g.joint.replace(a, j, aj);
            const double dj = g.rewards[j][s][alt] - g.rewards[j][s][a];
            const double dc = g.rewards[c][s][alt] - g.rewards[c][s][a];
            if (std::abs(dj - dc) > kStructuralTol) {
              cls.corollary_condition = false;
              break;
            }
          }
        }
      }
    }
  }

  return cls;
}

InducedMdp induce_mdp(const MarkovGame& g, int player,
                      const StrategyProfile& others) {
  if (static_cast<int>(others.policy.size()) != g.n_players)
    throw std::invalid_argument("strategy profile has wrong number of players");
  for (int j = 0; j < g.n_players; ++j) {
    if (j == player) continue;
    if (static_cast<int>(others.policy[j].size()) != g.num_states())
      throw std::invalid_argument("strategy has wrong number of states");
    for (const auto& dist : others.policy[j]) {
      if (static_cast<int>(dist.size()) != g.num_actions(j))
        throw std::invalid_argument("strategy row does not match action set");
    }
  }

  InducedMdp mdp;
  mdp.n_states = g.num_states();
  mdp.n_actions = g.num_actions(player);
  mdp.gamma = g.gamma;
  mdp.initial_dist = g.initial_dist;
  mdp.rewards.assign(mdp.n_states, std::vector<double>(mdp.n_actions, 0.0));
  mdp.transitions.assign(
      mdp.n_states, std::vector<std::vector<double>>(
                        mdp.n_actions, std::vector<double>(mdp.n_states, 0.0)));

  const int n_joint = g.joint.size();
  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a = 0; a < n_joint; ++a) {
      const int own = g.joint.component(a, player);
      double w = 1.0;
      for (int j = 0; j < g.n_players; ++j) {
        if (j == player) continue;
        w *= others.policy[j][s][g.joint.component(a, j)];
      }
      mdp.rewards[s][own] += w * g.rewards[player][s][a];
      for (int sp = 0; sp < mdp.n_states; ++sp)
        mdp.transitions[s][own][sp] += w * g.transitions[s][a][sp];
    }
  }
  return mdp;
}

}  // namespace mgfp
