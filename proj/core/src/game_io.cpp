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

#include "mgfp/game_io.hpp"

#include <cmath>
#include <fstream>

namespace mgfp {

namespace {

using nlohmann::json;

double finite_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError("expected number at " + where);
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError("non-finite value at " + where);
  return v;
}

// Flattens a depth-n nested array over per-player action sets into the joint
// index order (player 0 slowest).
void flatten_actions(const json& j, const std::vector<int>& sizes, int depth,
                     const std::string& where, std::vector<double>& out) {
  if (depth == static_cast<int>(sizes.size())) {
    out.push_back(finite_number(j, where));
    return;
  }
  if (!j.is_array() || static_cast<int>(j.size()) != sizes[depth])
    throw ParseError("wrong action-array arity at " + where);
  for (int a = 0; a < sizes[depth]; ++a)
    flatten_actions(j[a], sizes, depth + 1, where, out);
}

json nest_actions(const std::vector<double>& flat, const std::vector<int>& sizes,
                  int depth, int& cursor, int trailing) {
  if (depth == static_cast<int>(sizes.size())) {
    if (trailing == 0) return flat[cursor++];
    json arr = json::array();
    for (int t = 0; t < trailing; ++t) arr.push_back(flat[cursor++]);
    return arr;
  }
  json arr = json::array();
  for (int a = 0; a < sizes[depth]; ++a)
    arr.push_back(nest_actions(flat, sizes, depth + 1, cursor, trailing));
  return arr;
}

std::vector<double> distribution_from_json(const json& j, int arity,
                                           const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != arity)
    throw ParseError("wrong distribution arity at " + where);
  std::vector<double> dist(arity);
  for (int a = 0; a < arity; ++a) dist[a] = finite_number(j[a], where);
  return dist;
}

MarkovGame game_from_json_impl(const json& j) {
  MarkovGame g;
  if (!j.is_object()) throw ParseError("game document must be a JSON object");
  g.n_players = j.at("n_players").get<int>();
  if (g.n_players < 1) throw ParseError("n_players must be >= 1");
  g.states = j.at("states").get<std::vector<std::string>>();
  g.actions = j.at("actions").get<std::vector<std::vector<std::string>>>();
  if (static_cast<int>(g.actions.size()) != g.n_players)
    throw ParseError("actions list size does not match n_players");
  g.gamma = finite_number(j.at("gamma"), "gamma");
  if (j.contains("controller") && !j.at("controller").is_null())
    g.controller = j.at("controller").get<int>();

  std::vector<int> sizes(g.n_players);
  for (int p = 0; p < g.n_players; ++p)
    sizes[p] = static_cast<int>(g.actions[p].size());
  const int n_states = static_cast<int>(g.states.size());

  const json& rewards = j.at("rewards");
  if (!rewards.is_array() || static_cast<int>(rewards.size()) != g.n_players)
    throw ParseError("rewards must have one block per player");
  g.rewards.resize(g.n_players);
  for (int p = 0; p < g.n_players; ++p) {
    const json& per_state = rewards[p];
    if (!per_state.is_array() || static_cast<int>(per_state.size()) != n_states)
      throw ParseError("rewards player block must have one entry per state");
    g.rewards[p].resize(n_states);
    for (int s = 0; s < n_states; ++s) {
      flatten_actions(per_state[s], sizes, 0,
                      "rewards[" + std::to_string(p) + "][" + g.states[s] + "]",
                      g.rewards[p][s]);
    }
  }

  const json& transitions = j.at("transitions");
  if (!transitions.is_array() ||
      static_cast<int>(transitions.size()) != n_states)
    throw ParseError("transitions must have one block per state");
  g.transitions.resize(n_states);
  for (int s = 0; s < n_states; ++s) {
    std::vector<double> flat;
    std::vector<int> sizes_with_next = sizes;
    sizes_with_next.push_back(n_states);
    flatten_actions(transitions[s], sizes_with_next, 0,
                    "transitions[" + g.states[s] + "]", flat);
    int n_joint = 1;
    for (int sz : sizes) n_joint *= sz;
    g.transitions[s].resize(n_joint);
    for (int a = 0; a < n_joint; ++a) {
      g.transitions[s][a].assign(flat.begin() + a * n_states,
                                 flat.begin() + (a + 1) * n_states);
    }
  }

  if (j.contains("initial_dist") && !j.at("initial_dist").is_null())
    g.initial_dist =
        distribution_from_json(j.at("initial_dist"), n_states, "initial_dist");

  g.finalize();
  return g;
}

}  // namespace

MarkovGame game_from_json(const json& j) {
  try {
    return game_from_json_impl(j);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed game document: ") + e.what());
  }
}

json game_to_json(const MarkovGame& g) {
  json j;
  j["n_players"] = g.n_players;
  j["states"] = g.states;
  j["actions"] = g.actions;
  j["gamma"] = g.gamma;
  if (g.controller.has_value()) j["controller"] = *g.controller;

  std::vector<int> sizes(g.n_players);
  for (int p = 0; p < g.n_players; ++p) sizes[p] = g.num_actions(p);

  json rewards = json::array();
  for (int p = 0; p < g.n_players; ++p) {
    json per_state = json::array();
    for (int s = 0; s < g.num_states(); ++s) {
      int cursor = 0;
      per_state.push_back(nest_actions(g.rewards[p][s], sizes, 0, cursor, 0));
    }
    rewards.push_back(per_state);
  }
  j["rewards"] = rewards;

  json transitions = json::array();
  for (int s = 0; s < g.num_states(); ++s) {
    std::vector<double> flat;
    for (const auto& row : g.transitions[s])
      flat.insert(flat.end(), row.begin(), row.end());
    int cursor = 0;
    transitions.push_back(
        nest_actions(flat, sizes, 0, cursor, g.num_states()));
  }
  j["transitions"] = transitions;
  j["initial_dist"] = g.initial_dist;
  return j;
}

MarkovGame load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open game file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return game_from_json(j);
}

void save_game(const MarkovGame& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write game file: " + path);
  out << game_to_json(g).dump(2) << "\n";
}

StrategyProfile profile_from_json(const json& j, const MarkovGame& g) {
  StrategyProfile profile;
  const json& policy = j.is_object() && j.contains("policy") ? j.at("policy") : j;
  if (!policy.is_array() || static_cast<int>(policy.size()) != g.n_players)
    throw ParseError("profile must have one block per player");
  profile.policy.resize(g.n_players);
  for (int p = 0; p < g.n_players; ++p) {
    if (static_cast<int>(policy[p].size()) != g.num_states())
      throw ParseError("profile player block must have one row per state");
    profile.policy[p].resize(g.num_states());
    for (int s = 0; s < g.num_states(); ++s) {
      profile.policy[p][s] = distribution_from_json(
          policy[p][s], g.num_actions(p),
          "profile[" + std::to_string(p) + "][" + g.states[s] + "]");
    }
  }
  return profile;
}

json profile_to_json(const StrategyProfile& profile) {
  return json{{"policy", profile.policy}};
}

StrategyProfile load_profile(const std::string& path, const MarkovGame& g) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open profile file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return profile_from_json(j, g);
}

}  // namespace mgfp
