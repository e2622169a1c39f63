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

#ifndef MGFP_TRACE_HPP_
#define MGFP_TRACE_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace mgfp {

// Per-player diagnostic block for one recorded iteration. State-indexed
// vectors have one entry per state.
struct PlayerDiag {
  double q_change_sup = 0.0;        // ||Q_k - Q_{k-1}||_inf (0 at k = 0)
  std::vector<double> value_est;    // max expected continuation payoff per state
  std::vector<double> avg_value;    // expected payoff under current beliefs
  std::vector<double> delta;        // value_est - avg_value
  double lower_upsilon = 0.0;
  double min_upsilon = 0.0;         // min over (s,a) of the Q-update direction
  double def_identity_err = 0.0;    // sup |Q_{k+1} - Q_k - beta * Upsilon|
  std::vector<std::vector<double>> belief;  // [state][action]
};

struct TraceRecord {
  std::int64_t k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<PlayerDiag> players;
  // Cross-payoff terms, one block of |S| values per ordered pair (i,j), i != j,
  // pairs enumerated i-major then j ascending skipping i == j.
  std::vector<std::vector<double>> gamma_ij;
  double streq_residual = 0.0;  // NaN when no controller is declared
  double max_q_gap = 0.0;       // max_{i,j} ||Q^i - Q^j||_inf
  double exploitability = 0.0;  // NaN when not recorded
};

struct TraceMeta {
  int n_players = 0;
  int n_states = 0;
  bool has_exploitability = false;
  bool has_controller = false;
  bool has_beliefs = false;
  std::vector<int> n_actions;  // per player; empty when has_beliefs is false
  std::vector<std::string> state_names;
};

struct Trace {
  TraceMeta meta;
  std::vector<TraceRecord> records;
};

// CSV: UTF-8, comma separated, header row, floats with 17 significant digits.
// Column order: k, alpha, beta; per-player blocks (qchange, v per state,
// u per state, delta per state, lower_upsilon, min_upsilon, def_identity_err);
// then gamma blocks per ordered pair; then streq_residual, max_q_gap,
// optionally exploitability, and optionally the belief columns
// p{i}_pi_s{s}_a{a} (player-major, then state, then action).
void write_trace_csv(const Trace& trace, const std::string& path);
Trace read_trace_csv(const std::string& path);

}  // namespace mgfp

#endif  // MGFP_TRACE_HPP_
