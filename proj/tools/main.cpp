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

// mgfp command-line driver: generate | validate | run | solve | diagnose |
// plot. Config schema and defaults are documented in config-reference.md.
// Exit codes: 0 success, 1 invalid input (config, game class, missing
// columns), 2 runtime failure.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mgfp/diagnostics.hpp"
#include "mgfp/dynamics.hpp"
#include "mgfp/game.hpp"
#include "mgfp/game_io.hpp"
#include "mgfp/generators.hpp"
#include "mgfp/oracles.hpp"
#include "mgfp/schedule.hpp"
#include "mgfp/trace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Logging (MGFPP_LOG = error | info | debug, default error).

enum class LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("MGFPP_LOG");
    if (env == nullptr) return LogLevel::kError;
    const std::string v(env);
    if (v == "debug") return LogLevel::kDebug;
    if (v == "info") return LogLevel::kInfo;
    return LogLevel::kError;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::kInfo)
    std::fprintf(stderr, "[info] %s\n", msg.c_str());
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::kDebug)
    std::fprintf(stderr, "[debug] %s\n", msg.c_str());
}

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// JSON helpers.

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return j;
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Generator / schedule / run-config parsing.

mgfp::GenParams gen_params_from_json(const json& j) {
  mgfp::GenParams p;
  if (j.contains("players")) p.n_players = j.at("players").get<int>();
  if (j.contains("states")) p.n_states = j.at("states").get<int>();
  if (j.contains("actions"))
    p.n_actions = j.at("actions").get<std::vector<int>>();
  if (j.contains("gamma")) p.gamma = j.at("gamma").get<double>();
  if (j.contains("reward_lo")) p.reward_lo = j.at("reward_lo").get<double>();
  if (j.contains("reward_hi")) p.reward_hi = j.at("reward_hi").get<double>();
  if (j.contains("concentration"))
    p.concentration = j.at("concentration").get<double>();
  if (j.contains("controller")) p.controller = j.at("controller").get<int>();
  if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

mgfp::MarkovGame generate_game(const std::string& kind,
                               const mgfp::GenParams& p) {
  if (kind == "identical") return mgfp::gen_identical_single_controller(p);
  if (kind == "zero_sum") return mgfp::gen_zero_sum_single_controller(p);
  if (kind == "corollary") return mgfp::gen_corollary_game(p);
  throw ConfigError("unknown generator kind: " + kind);
}

mgfp::StepSchedule schedule_from_json(const json& j) {
  const std::string kind = j.value("kind", "power_law");
  if (kind == "power_law")
    return mgfp::StepSchedule::power_law(j.value("rho_alpha", 0.6),
                                         j.value("rho_beta", 0.9));
  if (kind == "constant")
    return mgfp::StepSchedule::constant(j.at("alpha").get<double>(),
                                        j.at("beta").get<double>());
  if (kind == "table")
    return mgfp::StepSchedule::table(
        j.at("alpha").get<std::vector<double>>(),
        j.at("beta").get<std::vector<double>>());
  throw ConfigError("unknown schedule kind: " + kind);
}

mgfp::RunConfig run_config_from_json(const json& j) {
  mgfp::RunConfig cfg;
  cfg.max_iterations = j.value("max_iterations", std::int64_t{100000});
  cfg.cadence = j.value("cadence", std::int64_t{1});
  cfg.record_exploitability = j.value("record_exploitability", false);
  cfg.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("q_init")) {
    const auto& q = j.at("q_init");
    const std::string kind = q.value("kind", "zeros");
    if (kind == "zeros") {
      cfg.q_init.kind = mgfp::QInit::Kind::kZeros;
    } else if (kind == "constant") {
      cfg.q_init.kind = mgfp::QInit::Kind::kConstant;
      cfg.q_init.value = q.at("value").get<double>();
    } else if (kind == "explicit") {
      cfg.q_init.kind = mgfp::QInit::Kind::kExplicit;
      cfg.q_init.values =
          q.at("values")
              .get<std::vector<std::vector<std::vector<double>>>>();
    } else {
      throw ConfigError("unknown q_init kind: " + kind);
    }
  }
  if (j.contains("belief_init")) {
    const auto& b = j.at("belief_init");
    const std::string kind = b.value("kind", "uniform");
    if (kind == "uniform") {
      cfg.belief_init.kind = mgfp::BeliefInit::Kind::kUniform;
    } else if (kind == "explicit") {
      cfg.belief_init.kind = mgfp::BeliefInit::Kind::kExplicit;
      cfg.belief_init.values =
          b.at("values")
              .get<std::vector<std::vector<std::vector<double>>>>();
    } else {
      throw ConfigError("unknown belief_init kind: " + kind);
    }
  }
  if (j.contains("stop")) {
    const auto& s = j.at("stop");
    const std::string rule = s.value("rule", "iterations");
    if (rule == "iterations") {
      cfg.stop = mgfp::RunConfig::StopRule::kIterations;
    } else if (rule == "exploitability") {
      cfg.stop = mgfp::RunConfig::StopRule::kExploitability;
      cfg.epsilon = s.at("epsilon").get<double>();
      cfg.record_exploitability = true;
    } else {
      throw ConfigError("unknown stop rule: " + rule);
    }
  }
  return cfg;
}

const char* status_name(mgfp::ConditionStatus s) {
  switch (s) {
    case mgfp::ConditionStatus::kSatisfied: return "satisfied";
    case mgfp::ConditionStatus::kViolated: return "violated";
    default: return "undecidable";
  }
}

json schedule_report_to_json(const mgfp::ScheduleReport& r) {
  return json{{"vanishing", status_name(r.vanishing)},
              {"slow_decay", status_name(r.slow_decay)},
              {"fast_decay", status_name(r.fast_decay)},
              {"timescale_limit", status_name(r.timescale_limit)},
              {"pointwise_alpha_ge_beta", r.pointwise_alpha_ge_beta},
              {"all_satisfied", r.all_satisfied()}};
}

json class_to_json(const mgfp::GameClass& cls) {
  return json{{"zero_sum", cls.zero_sum},
              {"identical_interest", cls.identical_interest},
              {"single_controller", cls.single_controller},
              {"corollary_condition", cls.corollary_condition}};
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  std::string kind = "identical";
  int players = 2;
  int states = 3;
  std::vector<int> actions;
  double gamma = 0.6;
  double reward_lo = 0.0;
  double reward_hi = 1.0;
  double concentration = 1.0;
  int controller = 0;
  std::uint64_t seed = 0;
  std::string out = ".";
};

int cmd_generate(const GenerateArgs& args) {
  mgfp::GenParams p;
  p.n_players = args.players;
  p.n_states = args.states;
  p.n_actions = args.actions;
  p.gamma = args.gamma;
  p.reward_lo = args.reward_lo;
  p.reward_hi = args.reward_hi;
  p.concentration = args.concentration;
  p.controller = args.controller;
  p.seed = args.seed;
  const mgfp::MarkovGame g = generate_game(args.kind, p);
  fs::create_directories(args.out);
  const fs::path path = fs::path(args.out) / "game.json";
  mgfp::save_game(g, path.string());
  log_info("wrote " + path.string());
  std::printf("%s\n", path.string().c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// validate

int cmd_validate(const std::string& game_path) {
  const mgfp::MarkovGame g = mgfp::load_game(game_path);
  const auto report = mgfp::validate_game(g);
  if (!report.ok()) {
    for (const auto& issue : report.issues)
      std::printf("issue: %s\n", issue.c_str());
    return 1;
  }
  const auto cls = mgfp::classify(g);
  std::printf("valid\n");
  std::printf("%s\n", class_to_json(cls).dump().c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// run

json summary_from_result(const mgfp::MarkovGame& g,
                         const mgfp::RunResult& result) {
  const auto cls = mgfp::classify(g);
  mgfp::StrategyProfile beliefs;
  beliefs.policy = result.final_state.beliefs;
  const auto expl = mgfp::exploitability_report(g, beliefs);

  double final_gap = 0.0;
  for (int i = 0; i < g.n_players; ++i)
    for (int j = i + 1; j < g.n_players; ++j)
      for (int s = 0; s < g.num_states(); ++s)
        for (int a = 0; a < g.joint.size(); ++a)
          final_gap = std::max(final_gap,
                               std::abs(result.final_state.q[i][s][a] -
                                        result.final_state.q[j][s][a]));

  json summary;
  summary["iterations"] = result.final_state.iteration;
  summary["wall_time_s"] = result.wall_time_s;
  summary["game_class"] = class_to_json(cls);
  summary["schedule"] = schedule_report_to_json(result.schedule_report);
  summary["final_exploitability"] = expl.expected;
  summary["final_exploitability_per_state_max"] = expl.per_state_max;
  summary["final_max_q_gap"] = final_gap;
  summary["max_q_gap_ever"] = result.max_q_gap_ever;
  summary["max_belief_sum_err"] = result.max_belief_sum_err;
  summary["min_belief_entry"] = result.min_belief_entry;
  summary["q_within_bounds"] = result.q_within_bounds;
  summary["final_beliefs"] = result.final_state.beliefs;
  summary["trace_rows"] = result.trace.records.size();
  return summary;
}

struct RunArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::int64_t> cadence;
  int jobs = 1;
};

int cmd_run(const RunArgs& args) {
  const json config = load_json(args.config_path);

  if (!config.contains("game"))
    throw ConfigError("config is missing the \"game\" section");
  const json& game_spec = config.at("game");

  const mgfp::StepSchedule sched =
      schedule_from_json(config.value("schedule", json::object()));
  mgfp::RunConfig run_cfg =
      run_config_from_json(config.value("run", json::object()));
  if (args.cadence) run_cfg.cadence = *args.cadence;

  const std::string out_dir = args.out.value_or(config.value("out", "."));
  fs::create_directories(out_dir);

  // Seed fan-out applies to generator-backed configs only.
  std::vector<std::uint64_t> seeds;
  if (args.seed) {
    seeds = {*args.seed};
  } else if (config.contains("seeds")) {
    seeds = config.at("seeds").get<std::vector<std::uint64_t>>();
    if (seeds.empty()) throw ConfigError("\"seeds\" must be non-empty");
  }

  const bool generator_backed = game_spec.contains("generator");
  if (!generator_backed && !game_spec.contains("file"))
    throw ConfigError("game section needs \"file\" or \"generator\"");
  if (!generator_backed && seeds.size() > 1)
    throw ConfigError("seed fan-out requires a generator-backed game");

  auto make_game = [&game_spec](std::optional<std::uint64_t> seed) {
    if (game_spec.contains("file")) {
      const std::string path = game_spec.at("file").get<std::string>();
      mgfp::MarkovGame g = mgfp::load_game(path);
      const auto report = mgfp::validate_game(g);
      if (!report.ok())
        throw ConfigError("game file invalid: " + report.issues.front());
      return g;
    }
    const json& gen = game_spec.at("generator");
    mgfp::GenParams p = gen_params_from_json(gen.value("params", json::object()));
    if (seed) p.seed = *seed;
    return generate_game(gen.value("kind", "identical"), p);
  };

  auto run_one = [&](std::optional<std::uint64_t> seed, const fs::path& dir) {
    const mgfp::MarkovGame g = make_game(seed);
    mgfp::RunConfig cfg = run_cfg;
    if (seed) cfg.seed = *seed;
    const auto result = mgfp::run(g, cfg, sched);
    fs::create_directories(dir);
    mgfp::write_trace_csv(result.trace, (dir / "trace.csv").string());
    json summary = summary_from_result(g, result);
    if (seed) summary["seed"] = *seed;
    write_json(summary, dir / "summary.json");
    return summary;
  };

  if (seeds.size() <= 1) {
    std::optional<std::uint64_t> seed;
    if (!seeds.empty()) seed = seeds.front();
    const json summary = run_one(seed, out_dir);
    log_info("run finished in " +
             std::to_string(summary.at("wall_time_s").get<double>()) + "s");
    return 0;
  }

  // Fan seeds out across workers; merge the index in deterministic seed
  // order regardless of completion order.
  std::vector<json> summaries(seeds.size());
  std::vector<std::string> errors(seeds.size());
  std::atomic<size_t> next{0};
  const int jobs = std::max(1, args.jobs);
  auto worker = [&]() {
    for (;;) {
      const size_t idx = next.fetch_add(1);
      if (idx >= seeds.size()) return;
      char name[32];
      std::snprintf(name, sizeof(name), "seed%04llu",
                    static_cast<unsigned long long>(seeds[idx]));
      try {
        summaries[idx] = run_one(seeds[idx], fs::path(out_dir) / name);
        log_debug(std::string(name) + " done");
      } catch (const std::exception& e) {
        errors[idx] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (size_t i = 0; i < seeds.size(); ++i)
    if (!errors[i].empty())
      throw std::runtime_error("seed " + std::to_string(seeds[i]) +
                               " failed: " + errors[i]);

  json index = json::array();
  for (size_t i = 0; i < seeds.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "seed%04llu",
                  static_cast<unsigned long long>(seeds[i]));
    index.push_back({{"seed", seeds[i]},
                     {"dir", name},
                     {"final_exploitability",
                      summaries[i].at("final_exploitability")},
                     {"final_max_q_gap", summaries[i].at("final_max_q_gap")}});
  }
  write_json(json{{"runs", index}}, fs::path(out_dir) / "experiment.json");
  return 0;
}

// ---------------------------------------------------------------------------
// solve

int cmd_solve(const std::string& game_path, double tol,
              const std::optional<std::string>& profile_path,
              const std::string& out_dir) {
  const mgfp::MarkovGame g = mgfp::load_game(game_path);
  const auto report = mgfp::validate_game(g);
  if (!report.ok()) {
    std::fprintf(stderr, "invalid game: %s\n", report.issues.front().c_str());
    return 1;
  }
  fs::create_directories(out_dir);
  json out;
  out["game"] = game_path;
  out["class"] = class_to_json(mgfp::classify(g));

  if (profile_path) {
    const mgfp::StrategyProfile profile =
        mgfp::load_profile(*profile_path, g);
    const auto expl = mgfp::exploitability_report(g, profile);
    out["mode"] = "certify";
    out["exploitability"] = expl.expected;
    out["exploitability_per_state_max"] = expl.per_state_max;
    out["best_response_gain"] = expl.best_response_gain;
    out["values"] = mgfp::policy_evaluation(g, profile);
  } else {
    const auto cls = mgfp::classify(g);
    if (!cls.zero_sum || g.n_players != 2) {
      std::fprintf(stderr,
                   "solve without --profile needs a two-player zero-sum game\n");
      return 1;
    }
    const auto sol = mgfp::shapley_value_iteration(g, tol);
    out["mode"] = "shapley";
    out["tol"] = tol;
    out["values"] = sol.values;
    out["q_star"] = sol.q_star;
    out["profile"] = mgfp::profile_to_json(sol.profile);
    out["exploitability"] = sol.exploitability;
    out["iterations"] = sol.iterations_used;
    out["residual"] = sol.residual;
  }
  write_json(out, fs::path(out_dir) / "solve.json");
  std::printf("%s\n", (fs::path(out_dir) / "solve.json").string().c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// diagnose

struct DiagnoseArgs {
  std::string trace_path;
  std::string out = ".";
  std::string checks = "basic,telescoping";
  int controller = -1;  // for the gamma_delta check
  double tol = 1e-9;
};

int cmd_diagnose(const DiagnoseArgs& args) {
  mgfp::Trace trace;
  try {
    trace = mgfp::read_trace_csv(args.trace_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  json violations = json::array();
  auto violation = [&violations](const std::string& check, std::int64_t k,
                                 const std::string& what) {
    violations.push_back({{"check", check}, {"k", k}, {"detail", what}});
  };

  std::vector<std::string> requested;
  {
    std::string rest = args.checks == "all"
                           ? "basic,telescoping,gamma_delta,streq"
                           : args.checks;
    size_t pos;
    while ((pos = rest.find(',')) != std::string::npos) {
      requested.push_back(rest.substr(0, pos));
      rest.erase(0, pos + 1);
    }
    if (!rest.empty()) requested.push_back(rest);
  }
  auto wants = [&requested](const std::string& name) {
    return std::find(requested.begin(), requested.end(), name) !=
           requested.end();
  };

  if (wants("basic")) {
    for (const auto& rec : trace.records) {
      for (size_t i = 0; i < rec.players.size(); ++i) {
        const auto& pd = rec.players[i];
        for (double d : pd.delta)
          if (d < -1e-9)
            violation("delta_nonneg", rec.k,
                      "player " + std::to_string(i) + " delta " +
                          std::to_string(d));
        if (pd.lower_upsilon > pd.min_upsilon + 1e-9)
          violation("lower_upsilon_bound", rec.k,
                    "player " + std::to_string(i));
        if (pd.def_identity_err != 0.0)
          violation("definitional_identity", rec.k,
                    "player " + std::to_string(i) + " err " +
                        std::to_string(pd.def_identity_err));
        if (!std::isfinite(pd.lower_upsilon) || !std::isfinite(pd.min_upsilon))
          violation("finite", rec.k, "player " + std::to_string(i));
      }
    }
  }

  if (wants("streq")) {
    if (!trace.meta.has_controller) {
      std::fprintf(stderr, "streq check needs a controller-bearing trace\n");
      return 1;
    }
    for (const auto& rec : trace.records)
      if (rec.streq_residual > args.tol)
        violation("strategic_equivalence", rec.k,
                  "residual " + std::to_string(rec.streq_residual));
  }

  if (wants("gamma_delta")) {
    if (args.controller < 0) {
      std::fprintf(stderr, "gamma_delta check needs --controller\n");
      return 1;
    }
    const int n = trace.meta.n_players;
    for (const auto& rec : trace.records) {
      size_t pair = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          if (j != args.controller) {
            for (int s = 0; s < trace.meta.n_states; ++s)
              if (std::abs(rec.gamma_ij[pair][s] - rec.players[j].delta[s]) >
                  args.tol)
                violation("gamma_equals_delta", rec.k,
                          "pair (" + std::to_string(i) + "," +
                              std::to_string(j) + ") state " +
                              std::to_string(s));
          }
          ++pair;
        }
    }
  }

  if (wants("telescoping")) {
    std::vector<double> beta;
    for (const auto& rec : trace.records) beta.push_back(rec.beta);
    if (beta.size() >= 2) {
      mgfp::SplitMix64 rng(12345);
      double worst = 0.0;
      for (int trial = 0; trial < 1000; ++trial) {
        // Identities require k0 <= k1 <= k2 + 1 (k1 = k2 + 1: empty sum).
        const auto k2 = static_cast<std::int64_t>(rng.next() % beta.size());
        const auto k0 = static_cast<std::int64_t>(
            rng.next() % static_cast<std::uint64_t>(k2 + 1));
        const auto k1 =
            k0 + static_cast<std::int64_t>(
                     rng.next() % static_cast<std::uint64_t>(k2 + 2 - k0));
        const auto check = mgfp::telescoping_sums(beta, k0, k1, k2);
        worst = std::max({worst, std::abs(check.lhs1 - check.rhs1),
                          std::abs(check.lhs2 - check.rhs2)});
      }
      if (worst > 1e-10)
        violation("telescoping", -1, "worst residual " + std::to_string(worst));
      log_debug("telescoping worst residual " + std::to_string(worst));
    }
  }

  json out;
  out["trace"] = args.trace_path;
  out["checks"] = requested;
  out["records"] = trace.records.size();
  out["violations"] = violations;
  fs::create_directories(args.out);
  write_json(out, fs::path(args.out) / "diagnose.json");
  if (!violations.empty()) {
    std::fprintf(stderr, "%zu violation(s) found\n", violations.size());
    return 2;
  }
  std::printf("no violations across %zu records\n", trace.records.size());
  return 0;
}

// ---------------------------------------------------------------------------
// plot: minimal static SVG line charts from trace columns.

struct Series {
  std::string label;
  std::vector<double> y;
};

void write_svg_chart(const fs::path& path, const std::string& title,
                     const std::vector<double>& x,
                     const std::vector<Series>& series, bool log_y = false) {
  const int width = 860, height = 480;
  const int ml = 70, mr = 170, mt = 40, mb = 50;
  const double plot_w = width - ml - mr, plot_h = height - mt - mb;

  double xmin = x.front(), xmax = x.back();
  if (xmax <= xmin) xmax = xmin + 1.0;
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -ymin;
  for (const auto& s : series)
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      if (log_y && v <= 0.0) continue;
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  if (!std::isfinite(ymin)) {
    ymin = 0.0;
    ymax = 1.0;
  }
  if (log_y) {
    ymin = std::log10(ymin);
    ymax = std::log10(ymax);
  }
  if (ymax - ymin < 1e-12) {
    ymax += 0.5;
    ymin -= 0.5;
  }

  auto sx = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * plot_w; };
  auto sy = [&](double v) {
    if (log_y) v = std::log10(v);
    return mt + (1.0 - (v - ymin) / (ymax - ymin)) * plot_h;
  };

  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
  // Axes.
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + plot_h << "\" x2=\""
      << ml + plot_w << "\" y2=\"" << mt + plot_h
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + plot_h << "\" stroke=\"black\"/>\n";
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" "
                "font-size=\"12\">k: %g .. %g</text>\n",
                ml, height - 14, xmin, xmax);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"8\" y=\"%d\" font-family=\"sans-serif\" "
                "font-size=\"12\">%s%g .. %g</text>\n",
                mt + 12, log_y ? "log10 " : "", ymin, ymax);
  out << buf;

  for (size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % 8];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t t = 0; t < x.size(); ++t) {
      double v = series[si].y[t];
      if (!std::isfinite(v) || (log_y && v <= 0.0)) continue;
      out << sx(x[t]) << "," << sy(v) << " ";
    }
    out << "\"/>\n";
    const int ly = mt + 16 + static_cast<int>(si) * 16;
    out << "<rect x=\"" << ml + plot_w + 12 << "\" y=\"" << ly - 9
        << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n"
        << "<text x=\"" << ml + plot_w + 28 << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << series[si].label << "</text>\n";
  }
  out << "</svg>\n";
}

int cmd_plot(const std::string& trace_path, const std::string& out_dir) {
  const mgfp::Trace trace = mgfp::read_trace_csv(trace_path);
  if (trace.records.empty()) {
    std::fprintf(stderr, "trace has no records\n");
    return 1;
  }
  fs::create_directories(out_dir);

  std::vector<double> x;
  for (const auto& rec : trace.records)
    x.push_back(static_cast<double>(rec.k));

  // Cross-player Q gap.
  {
    std::vector<Series> series(1);
    series[0].label = "max Q gap";
    for (const auto& rec : trace.records) series[0].y.push_back(rec.max_q_gap);
    write_svg_chart(fs::path(out_dir) / "q_gap.svg",
                    "Cross-player Q gap vs k", x, series);
  }

  // Exploitability, when recorded.
  if (trace.meta.has_exploitability) {
    std::vector<Series> series(1);
    series[0].label = "exploitability";
    for (const auto& rec : trace.records)
      series[0].y.push_back(rec.exploitability);
    write_svg_chart(fs::path(out_dir) / "exploitability.svg",
                    "Exploitability vs k", x, series);
  }

  // Belief trajectories, when the trace carries them.
  if (trace.meta.has_beliefs) {
    std::vector<Series> series;
    for (int i = 0; i < trace.meta.n_players; ++i)
      for (int s = 0; s < trace.meta.n_states; ++s)
        for (int a = 0; a < trace.meta.n_actions[i]; ++a) {
          Series ser;
          ser.label = "p" + std::to_string(i) + " s" + std::to_string(s) +
                      " a" + std::to_string(a);
          for (const auto& rec : trace.records)
            ser.y.push_back(rec.players[i].belief[s][a]);
          series.push_back(std::move(ser));
        }
    write_svg_chart(fs::path(out_dir) / "beliefs.svg",
                    "Belief trajectories vs k", x, series);
  }

  // Optimality gaps.
  {
    std::vector<Series> series;
    for (int i = 0; i < trace.meta.n_players; ++i) {
      Series ser;
      ser.label = "p" + std::to_string(i) + " max delta";
      for (const auto& rec : trace.records) {
        double d = 0.0;
        for (double v : rec.players[i].delta) d = std::max(d, v);
        ser.y.push_back(d);
      }
      series.push_back(std::move(ser));
    }
    write_svg_chart(fs::path(out_dir) / "delta.svg",
                    "Optimality gap vs k", x, series);
  }
  std::printf("plots written to %s\n", out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fictitious-play dynamics toolkit for finite Markov games"};
  app.require_subcommand(1);

  GenerateArgs gen_args;
  auto* gen = app.add_subcommand("generate", "generate a seeded game instance");
  gen->add_option("--kind", gen_args.kind,
                  "identical | zero_sum | corollary")
      ->check(CLI::IsMember({"identical", "zero_sum", "corollary"}));
  gen->add_option("--players", gen_args.players);
  gen->add_option("--states", gen_args.states);
  gen->add_option("--actions", gen_args.actions,
                  "actions per player (default 2 each)");
  gen->add_option("--gamma", gen_args.gamma);
  gen->add_option("--reward-lo", gen_args.reward_lo);
  gen->add_option("--reward-hi", gen_args.reward_hi);
  gen->add_option("--concentration", gen_args.concentration);
  gen->add_option("--controller", gen_args.controller);
  gen->add_option("--seed", gen_args.seed);
  gen->add_option("--out", gen_args.out, "output directory");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "validate a game file");
  validate->add_option("game", validate_path, "game JSON file")->required();

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "run the learning dynamics");
  run_cmd->add_option("--config", run_args.config_path, "experiment config")
      ->required();
  std::uint64_t run_seed = 0;
  std::string run_out;
  std::int64_t run_cadence = 0;
  auto* seed_opt = run_cmd->add_option("--seed", run_seed,
                                       "override: run this single seed");
  auto* out_opt = run_cmd->add_option("--out", run_out, "output directory");
  auto* cadence_opt =
      run_cmd->add_option("--cadence", run_cadence, "record every M iterations");
  run_cmd->add_option("--jobs", run_args.jobs, "worker threads for seed fan-out");

  std::string solve_game, solve_out = ".";
  double solve_tol = 1e-6;
  std::optional<std::string> solve_profile;
  std::string solve_profile_path;
  auto* solve = app.add_subcommand("solve", "oracle solve / certify a profile");
  solve->add_option("game", solve_game, "game JSON file")->required();
  solve->add_option("--tol", solve_tol, "value tolerance");
  auto* profile_opt = solve->add_option("--profile", solve_profile_path,
                                        "strategy profile to certify");
  solve->add_option("--out", solve_out, "output directory");

  DiagnoseArgs diag_args;
  auto* diagnose = app.add_subcommand("diagnose", "re-verify trace invariants");
  diagnose->add_option("trace", diag_args.trace_path, "trace CSV")->required();
  diagnose->add_option("--out", diag_args.out, "output directory");
  diagnose->add_option("--checks", diag_args.checks,
                       "comma list: basic,telescoping,gamma_delta,streq | all");
  diagnose->add_option("--controller", diag_args.controller,
                       "controller index (gamma_delta check)");
  diagnose->add_option("--tol", diag_args.tol, "residual tolerance");

  std::string plot_trace, plot_out = ".";
  auto* plot = app.add_subcommand("plot", "render SVG charts from a trace");
  plot->add_option("trace", plot_trace, "trace CSV")->required();
  plot->add_option("--out", plot_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) return cmd_generate(gen_args);
    if (*validate) return cmd_validate(validate_path);
    if (*run_cmd) {
      if (*seed_opt) run_args.seed = run_seed;
      if (*out_opt) run_args.out = run_out;
      if (*cadence_opt) run_args.cadence = run_cadence;
      return cmd_run(run_args);
    }
    if (*solve) {
      if (*profile_opt) solve_profile = solve_profile_path;
      return cmd_solve(solve_game, solve_tol, solve_profile, solve_out);
    }
    if (*diagnose) return cmd_diagnose(diag_args);
    if (*plot) return cmd_plot(plot_trace, plot_out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const mgfp::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
