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

#include "mgfp/generators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mgfp {

SplitMix64 substream(std::uint64_t seed, std::uint64_t tag) {
  SplitMix64 mixer(seed ^ ((tag + 1) * 0x9E3779B97F4A7C15ULL));
  return SplitMix64(mixer.next());
}

namespace {

// Tensor tags for substreams; fixed so regeneration is reproducible.
constexpr std::uint64_t kRewardTagBase = 0x100;      // + player index
constexpr std::uint64_t kTransitionTag = 0x200;
constexpr std::uint64_t kPotentialTag = 0x300;       // phi
constexpr std::uint64_t kShiftTagBase = 0x400;       // psi, + player index

std::vector<int> action_sizes(const GenParams& p) {
  if (!p.n_actions.empty()) {
    if (static_cast<int>(p.n_actions.size()) != p.n_players)
      throw std::invalid_argument("n_actions size must match n_players");
    return p.n_actions;
  }
  return std::vector<int>(p.n_players, 2);
}

void check_params(const GenParams& p) {
  if (p.n_players < 1 || p.n_states < 1)
    throw std::invalid_argument("sizes must be >= 1");
  if (!(p.gamma >= 0.0 && p.gamma < 1.0))
    throw std::invalid_argument("gamma must be in [0,1)");
  if (!(p.reward_lo <= p.reward_hi) || !std::isfinite(p.reward_lo) ||
      !std::isfinite(p.reward_hi))
    throw std::invalid_argument("invalid reward range");
  if (p.controller < 0 || p.controller >= p.n_players)
    throw std::invalid_argument("controller index out of range");
}

MarkovGame skeleton(const GenParams& p) {
  MarkovGame g;
  g.n_players = p.n_players;
  g.gamma = p.gamma;
  g.controller = p.controller;
  for (int s = 0; s < p.n_states; ++s)
    g.states.push_back("s" + std::to_string(s));
  const auto sizes = action_sizes(p);
  g.actions.resize(p.n_players);
  for (int i = 0; i < p.n_players; ++i)
    for (int a = 0; a < sizes[i]; ++a)
      g.actions[i].push_back("a" + std::to_string(a));
  g.finalize();
  return g;
}

double sample_reward(SplitMix64& rng, const GenParams& p) {
  return p.reward_lo + (p.reward_hi - p.reward_lo) * rng.next_unit();
}

// Full-support row over next states; concentration scales the weight spread.
std::vector<double> sample_row(SplitMix64& rng, int n_states,
                               double concentration) {
  std::vector<double> row(n_states);
  double sum = 0.0;
  for (int sp = 0; sp < n_states; ++sp) {
    row[sp] = std::pow(rng.next_unit(), concentration);
    sum += row[sp];
  }
  for (double& v : row) v /= sum;
  // Nudge the largest entry so the row sums to exactly 1 after rounding.
  double total = 0.0;
  int arg = 0;
  for (int sp = 0; sp < n_states; ++sp) {
    total += row[sp];
    if (row[sp] > row[arg]) arg = sp;
  }
  row[arg] += 1.0 - total;
  return row;
}

// Transitions depending only on the controller's action component.
void fill_controller_transitions(MarkovGame& g, const GenParams& p) {
  auto rng = substream(p.seed, kTransitionTag);
  const int n_ctrl = g.num_actions(p.controller);
  for (int s = 0; s < p.n_states; ++s) {
    std::vector<std::vector<double>> rows(n_ctrl);
    for (int ac = 0; ac < n_ctrl; ++ac)
      rows[ac] = sample_row(rng, p.n_states, p.concentration);
    g.transitions[s].resize(g.joint.size());
    for (int a = 0; a < g.joint.size(); ++a)
      g.transitions[s][a] = rows[g.joint.component(a, p.controller)];
  }
}

}  // namespace

MarkovGame gen_identical_single_controller(const GenParams& p) {
  check_params(p);
  MarkovGame g = skeleton(p);

  auto rng = substream(p.seed, kRewardTagBase);
  std::vector<std::vector<double>> common(p.n_states);
  for (int s = 0; s < p.n_states; ++s) {
    common[s].resize(g.joint.size());
    for (int a = 0; a < g.joint.size(); ++a)
      common[s][a] = sample_reward(rng, p);
  }
  g.rewards.assign(p.n_players, common);

  g.transitions.resize(p.n_states);
  fill_controller_transitions(g, p);
  return g;
}

MarkovGame gen_zero_sum_single_controller(const GenParams& p) {
  check_params(p);
  if (p.n_players != 2)
    throw std::invalid_argument("zero-sum generator requires n_players == 2");
  MarkovGame g = skeleton(p);

  auto rng = substream(p.seed, kRewardTagBase);
  g.rewards.resize(2);
  g.rewards[0].resize(p.n_states);
  g.rewards[1].resize(p.n_states);
  for (int s = 0; s < p.n_states; ++s) {
    g.rewards[0][s].resize(g.joint.size());
    g.rewards[1][s].resize(g.joint.size());
    for (int a = 0; a < g.joint.size(); ++a) {
      const double r = sample_reward(rng, p);
      g.rewards[0][s][a] = r;
      g.rewards[1][s][a] = -r;
    }
  }

  g.transitions.resize(p.n_states);
  fill_controller_transitions(g, p);
  return g;
}

MarkovGame gen_corollary_game(const GenParams& p) {
  check_params(p);
  MarkovGame g = skeleton(p);

  auto phi_rng = substream(p.seed, kPotentialTag);
  std::vector<std::vector<double>> phi(p.n_states);
  for (int s = 0; s < p.n_states; ++s) {
    phi[s].resize(g.joint.size());
    for (int a = 0; a < g.joint.size(); ++a)
      phi[s][a] = sample_reward(phi_rng, p);
  }

  const int n_ctrl = g.num_actions(p.controller);
  const double spread = 0.5 * (p.reward_hi - p.reward_lo);
  g.rewards.resize(p.n_players);
  for (int i = 0; i < p.n_players; ++i) {
    auto psi_rng = substream(p.seed, kShiftTagBase + static_cast<std::uint64_t>(i));
    std::vector<std::vector<double>> psi(p.n_states,
                                         std::vector<double>(n_ctrl));
    for (int s = 0; s < p.n_states; ++s)
      for (int ac = 0; ac < n_ctrl; ++ac)
        psi[s][ac] = spread * psi_rng.next_unit();
    g.rewards[i].resize(p.n_states);
    for (int s = 0; s < p.n_states; ++s) {
      g.rewards[i][s].resize(g.joint.size());
      for (int a = 0; a < g.joint.size(); ++a)
        g.rewards[i][s][a] =
            phi[s][a] + psi[s][g.joint.component(a, p.controller)];
    }
  }

  g.transitions.resize(p.n_states);
  fill_controller_transitions(g, p);
  return g;
}

}  // namespace mgfp
