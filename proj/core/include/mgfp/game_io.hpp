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

#ifndef MGFP_GAME_IO_HPP_
#define MGFP_GAME_IO_HPP_

#include <string>

#include "mgfp/game.hpp"
#include "json.hpp"

namespace mgfp {

// Game file format:
//   {
//     "n_players": n, "states": [...], "actions": [[...], ...],
//     "gamma": g, "controller": i (optional),
//     "rewards": nested arrays indexed [player][state][a^1]...[a^n],
//     "transitions": nested arrays indexed [state][a^1]...[a^n][next_state],
//     "initial_dist": [...] (optional, defaults to uniform)
//   }
// The loader rejects NaN/Inf and malformed shapes with ParseError.

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

MarkovGame game_from_json(const nlohmann::json& j);
nlohmann::json game_to_json(const MarkovGame& g);

MarkovGame load_game(const std::string& path);
void save_game(const MarkovGame& g, const std::string& path);

StrategyProfile profile_from_json(const nlohmann::json& j, const MarkovGame& g);
nlohmann::json profile_to_json(const StrategyProfile& profile);
StrategyProfile load_profile(const std::string& path, const MarkovGame& g);

}  // namespace mgfp

#endif  // MGFP_GAME_IO_HPP_
