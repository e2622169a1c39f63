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

#ifndef MGFP_GENERATORS_HPP_
#define MGFP_GENERATORS_HPP_

#include <cstdint>
#include <vector>

#include "mgfp/game.hpp"

namespace mgfp {

// SplitMix64. Chosen because it is trivially portable across languages, so a
// generated instance can be re-derived bit-exactly elsewhere from (seed, tag).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in (0, 1]: ((next() >> 11) + 1) * 2^-53.
  double next_unit() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Independent substream for one tensor: the stream seed is the first output
// of SplitMix64 seeded with seed XOR (tag + 1) * 0x9E3779B97F4A7C15.
SplitMix64 substream(std::uint64_t seed, std::uint64_t tag);

struct GenParams {
  int n_players = 2;
  int n_states = 3;
  std::vector<int> n_actions;  // per player; empty means 2 each
  double gamma = 0.6;
  double reward_lo = 0.0;
  double reward_hi = 1.0;
  // Row sharpness: weights are u^concentration with u uniform in (0,1];
  // larger values concentrate mass on fewer successors.
  double concentration = 1.0;
  int controller = 0;
  std::uint64_t seed = 0;
};

// Common reward tensor, transitions driven by the controller's action only.
MarkovGame gen_identical_single_controller(const GenParams& params);

// Two players, r^2 = -r^1 exactly, controller transitions as above.
MarkovGame gen_zero_sum_single_controller(const GenParams& params);

// Stage payoffs r^p(s,a) = phi(s,a) + psi^p(s, a^c): any non-controller
// deviation shifts every player's payoff by the same amount.
MarkovGame gen_corollary_game(const GenParams& params);

}  // namespace mgfp

#endif  // MGFP_GENERATORS_HPP_
