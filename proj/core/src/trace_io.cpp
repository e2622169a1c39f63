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
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mgfp/trace.hpp"

namespace mgfp {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);

  const int n = trace.meta.n_players;
  const int ns = trace.meta.n_states;

  out << "k,alpha,beta";
  for (int i = 0; i < n; ++i) {
    out << ",p" << i << "_qchange";
    for (int s = 0; s < ns; ++s) out << ",p" << i << "_v_s" << s;
    for (int s = 0; s < ns; ++s) out << ",p" << i << "_u_s" << s;
    for (int s = 0; s < ns; ++s) out << ",p" << i << "_delta_s" << s;
    out << ",p" << i << "_lower_upsilon,p" << i << "_min_upsilon,p" << i
        << "_def_identity_err";
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int s = 0; s < ns; ++s)
        out << ",gamma_" << i << "_" << j << "_s" << s;
    }
  out << ",streq_residual,max_q_gap";
  if (trace.meta.has_exploitability) out << ",exploitability";
  if (trace.meta.has_beliefs) {
    for (int i = 0; i < n; ++i)
      for (int s = 0; s < ns; ++s)
        for (int a = 0; a < trace.meta.n_actions[i]; ++a)
          out << ",p" << i << "_pi_s" << s << "_a" << a;
  }
  out << "\n";

  for (const auto& rec : trace.records) {
    out << rec.k << "," << fmt(rec.alpha) << "," << fmt(rec.beta);
    for (const auto& pd : rec.players) {
      out << "," << fmt(pd.q_change_sup);
      for (double v : pd.value_est) out << "," << fmt(v);
      for (double v : pd.avg_value) out << "," << fmt(v);
      for (double v : pd.delta) out << "," << fmt(v);
      out << "," << fmt(pd.lower_upsilon) << "," << fmt(pd.min_upsilon) << ","
          << fmt(pd.def_identity_err);
    }
    for (const auto& block : rec.gamma_ij)
      for (double v : block) out << "," << fmt(v);
    out << "," << fmt(rec.streq_residual) << "," << fmt(rec.max_q_gap);
    if (trace.meta.has_exploitability) out << "," << fmt(rec.exploitability);
    if (trace.meta.has_beliefs) {
      for (const auto& pd : rec.players)
        for (const auto& row : pd.belief)
          for (double v : row) out << "," << fmt(v);
    }
    out << "\n";
  }
}

Trace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);

  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error("empty trace file: " + path);
  const auto cols = split_csv_line(header);

  Trace trace;
  int n = 0;
  int ns = 0;
  for (const auto& c : cols) {
    if (c.rfind("p", 0) == 0 && c.find("_qchange") != std::string::npos) ++n;
    if (c.rfind("p0_v_s", 0) == 0) ++ns;
    if (c == "exploitability") trace.meta.has_exploitability = true;
    if (c.find("_pi_s") != std::string::npos) trace.meta.has_beliefs = true;
  }
  if (n == 0 || ns == 0)
    throw std::runtime_error("trace header missing per-player columns");
  trace.meta.n_players = n;
  trace.meta.n_states = ns;
  for (int s = 0; s < ns; ++s)
    trace.meta.state_names.push_back("s" + std::to_string(s));

  size_t belief_cols = 0;
  if (trace.meta.has_beliefs) {
    trace.meta.n_actions.assign(n, 0);
    for (int i = 0; i < n; ++i) {
      const std::string prefix = "p" + std::to_string(i) + "_pi_s0_a";
      for (const auto& c : cols)
        if (c.rfind(prefix, 0) == 0) ++trace.meta.n_actions[i];
      if (trace.meta.n_actions[i] == 0)
        throw std::runtime_error("trace header missing belief columns");
      belief_cols += static_cast<size_t>(ns) * trace.meta.n_actions[i];
    }
  }

  const size_t per_player = 1 + 3 * static_cast<size_t>(ns) + 3;
  const size_t n_pairs = static_cast<size_t>(n) * (n - 1);
  const size_t expected = 3 + static_cast<size_t>(n) * per_player +
                          n_pairs * ns + 2 +
                          (trace.meta.has_exploitability ? 1 : 0) + belief_cols;
  if (cols.size() != expected)
    throw std::runtime_error("trace header has unexpected column count");

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != expected)
      throw std::runtime_error("trace row has wrong field count");
    size_t c = 0;
    auto next = [&fields, &c]() { return std::stod(fields[c++]); };

    TraceRecord rec;
    rec.k = static_cast<std::int64_t>(next());
    rec.alpha = next();
    rec.beta = next();
    rec.players.resize(n);
    for (int i = 0; i < n; ++i) {
      auto& pd = rec.players[i];
      pd.q_change_sup = next();
      pd.value_est.resize(ns);
      pd.avg_value.resize(ns);
      pd.delta.resize(ns);
      for (int s = 0; s < ns; ++s) pd.value_est[s] = next();
      for (int s = 0; s < ns; ++s) pd.avg_value[s] = next();
      for (int s = 0; s < ns; ++s) pd.delta[s] = next();
      pd.lower_upsilon = next();
      pd.min_upsilon = next();
      pd.def_identity_err = next();
    }
    for (size_t p = 0; p < n_pairs; ++p) {
      std::vector<double> block(ns);
      for (int s = 0; s < ns; ++s) block[s] = next();
      rec.gamma_ij.push_back(std::move(block));
    }
    rec.streq_residual = next();
    rec.max_q_gap = next();
    if (trace.meta.has_exploitability) rec.exploitability = next();
    if (trace.meta.has_beliefs) {
      for (int i = 0; i < n; ++i) {
        auto& pd = rec.players[i];
        pd.belief.assign(ns, std::vector<double>(trace.meta.n_actions[i]));
        for (int s = 0; s < ns; ++s)
          for (int a = 0; a < trace.meta.n_actions[i]; ++a)
            pd.belief[s][a] = next();
      }
    }
    if (!std::isnan(rec.streq_residual)) trace.meta.has_controller = true;
    trace.records.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace mgfp
