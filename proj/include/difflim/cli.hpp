// Copyright 2026 The difflim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Each subcommand maps onto one analytics
// operation and emits CSV (or JSON) plot data.
//
// Settings are resolved in three layers: built-in defaults, then an
// optional --config JSON file, then flags given on the command line.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.

#ifndef DIFFLIM_CLI_HPP
#define DIFFLIM_CLI_HPP

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "difflim/analytics.hpp"
#include "difflim/config.hpp"
#include "difflim/diffusion.hpp"
#include "difflim/error.hpp"
#include "difflim/harness.hpp"
#include "difflim/prelimit.hpp"

namespace difflim {

// ---------------------------------------------------------------------------
// Tabular output

using Cell = std::variant<std::string, double, long long>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

namespace detail {

inline std::string cell_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  return std::to_string(std::get<long long>(c));
}

inline nlohmann::json cell_json(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_number(*d);
    return *d;
  }
  return std::get<long long>(c);
}

}  // namespace detail

inline void write_csv(std::ostream& os, const Table& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::cell_text(row[i]);
    os << '\n';
  }
}

/// Array of objects keyed by the header; non-finite numbers as strings.
inline void write_json(std::ostream& os, const Table& table) {
  auto arr = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.header[i]] = detail::cell_json(row[i]);
    arr.push_back(std::move(obj));
  }
  os << arr.dump(2) << '\n';
}

inline void write_table(std::ostream& os, const Table& table, const std::string& format) {
  if (format == "csv") {
    write_csv(os, table);
  } else if (format == "json") {
    write_json(os, table);
  } else {
    throw ConfigError("--format: expected csv or json, got '" + format + "'");
  }
}

// ---------------------------------------------------------------------------
// Subcommand implementations

namespace cli {

inline MonteCarlo monte_carlo(const ExperimentConfig& cfg) {
  detail::require(cfg.reps >= 1, "--reps must be >= 1");
  MonteCarlo mc;
  mc.reps = cfg.reps;
  mc.seed = cfg.master_seed;
  mc.grid = cfg.study.reference_grid ? TimeGrid::reference_near_zero() : cfg.grid;
  mc.workers = cfg.workers.value_or(default_workers());
  detail::require(mc.workers >= 1, "--workers must be >= 1");
  return mc;
}

inline Integrator parse_integrator(const std::string& name) {
  if (name == "time-change") return Integrator::time_change;
  if (name == "euler-maruyama") return Integrator::euler_maruyama;
  throw ConfigError("--integrator: expected time-change or euler-maruyama, got '" + name + "'");
}

/// Applies --nu-mode: smoothed is nu = 1/sqrt(n) (c = 1), undersmoothed is
/// nu = 1 (c = 0).
inline void apply_nu_mode(const std::string& mode, PolicyConfig& policy) {
  if (mode.empty()) return;
  if (mode == "smoothed") {
    policy.c = 1.0;
  } else if (mode == "undersmoothed") {
    policy.c = 0.0;
  } else {
    throw ConfigError("--nu-mode: expected smoothed or undersmoothed, got '" + mode + "'");
  }
  policy.nu.reset();
}

inline void require_policy(const ExperimentConfig& cfg) {
  if (!cfg.policy_given) throw ConfigError("missing required flag --policy");
}

/// Writes to the configured path, or to `out` when the path is "-".
inline void emit(const ExperimentConfig& cfg, const Table& table, std::ostream& out) {
  if (cfg.output.path == "-") {
    write_table(out, table, cfg.output.format);
    return;
  }
  std::ofstream file(cfg.output.path);
  if (!file) throw ConfigError("--output: cannot open '" + cfg.output.path + "' for writing");
  write_table(file, table, cfg.output.format);
}

inline int simulate(ExperimentConfig cfg, std::ostream& out) {
  require_policy(cfg);
  const auto started = std::chrono::steady_clock::now();
  apply_nu_mode(cfg.study.nu_mode, cfg.policy);
  const MonteCarlo mc = monte_carlo(cfg);
  std::vector<double> regret;
  std::vector<double> q1;
  Table table;

  if (cfg.study.mode == "diffusion") {
    cfg.policy.form = PolicyForm::limit;
    ReplicationJob job{cfg.instance, cfg.policy.resolve(), mc.grid, mc.reps, mc.seed,
                       parse_integrator(cfg.study.integrator)};
    const SamplingRule rule(job.policy, job.instance);
    const auto grid = job.grid.points();
    const auto outcomes = parallel_map(mc.reps, mc.workers, [&](std::size_t r) { return run_one(job, rule, grid, r); });
    const auto result = summarize_outcomes(outcomes, false);
    if (cfg.study.per_path) {
      table.header = {"replication", "regret", "q1"};
      for (std::size_t r = 0; r < outcomes.size(); ++r) {
        if (outcomes[r].failure) continue;
        table.rows.push_back({static_cast<long long>(r), outcomes[r].regret, outcomes[r].q1});
      }
    } else {
      table.header = {"mean_regret", "stderr", "mean_q1", "reps", "failures"};
      table.rows.push_back({result.regret.mean(), result.regret.stderr_mean(), result.q1.mean(),
                            static_cast<long long>(result.regret.count()), static_cast<long long>(result.failures)});
    }
    for (const auto& o : outcomes) {
      if (!o.failure) {
        regret.push_back(o.regret);
        q1.push_back(o.q1);
      }
    }
  } else if (cfg.study.mode == "prelimit") {
    detail::require(cfg.study.n.size() == 1, "--n: simulate takes a single horizon");
    const long long n = cfg.study.n.front();
    cfg.policy.form = PolicyForm::finite;
    const PolicySpec policy = cfg.policy.resolve();
    struct Run {
      double regret = 0.0;
      double q1 = 0.0;
      std::vector<ScaledState> states;
    };
    const auto runs = parallel_map(mc.reps, mc.workers, [&](std::size_t r) {
      const auto raw = simulate_srme(cfg.instance, policy, n, mc.seed, r);
      return Run{raw_regret(raw, cfg.instance), raw.pulls(raw.n, 0) / static_cast<double>(n),
                 scale_trajectory(raw, cfg.study.times).states};
    });
    StateSlices slices;
    slices.reserve(runs.size());
    for (const auto& run : runs) {
      regret.push_back(run.regret);
      q1.push_back(run.q1);
      slices.push_back(run.states);
    }
    table.header = {"t", "arm", "mean_q", "sd_q", "mean_s", "sd_s", "reps"};
    for (const auto& row : path_bands(slices)) {
      table.rows.push_back({row.t, static_cast<long long>(row.arm + 1), row.mean_q, row.sd_q, row.mean_s, row.sd_s,
                            static_cast<long long>(row.reps)});
    }
  } else {
    throw ConfigError("--mode: expected diffusion or prelimit, got '" + cfg.study.mode + "'");
  }

  const auto r = aggregate_pairwise(regret);
  const auto q = aggregate_pairwise(q1);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out << "mean_regret=" << format_number(r.mean()) << " stderr=" << format_number(r.stderr_mean())
      << " mean_q1=" << format_number(q.mean()) << " reps=" << r.count() << " wall_time_s=" << format_number(wall)
      << '\n';
  if (cfg.output.path != "-") emit(cfg, table, out);
  return 0;
}

inline int profile(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.study.gaps.empty()) throw ConfigError("missing required flag --gaps");
  detail::require(!cfg.study.cs.empty(), "--cs must not be empty");
  detail::require(cfg.reps >= 2, "--reps must be >= 2");
  const Family family = parse_family(cfg.study.family);
  const auto rows = regret_profile(family, cfg.study.gaps, cfg.study.cs, monte_carlo(cfg), cfg.policy.d);
  Table table{{"family", "gap", "c", "mean_regret", "stderr", "mean_q1", "reps"}, {}};
  for (const auto& row : rows) {
    table.rows.push_back({std::string(to_string(row.family)), row.gap, row.c, row.mean_regret, row.stderr_regret,
                          row.mean_q1, static_cast<long long>(row.reps)});
  }
  emit(cfg, table, out);
  return 0;
}

inline int histogram(const ExperimentConfig& cfg, std::ostream& out) {
  detail::require(cfg.study.delta.size() == 1, "--delta: histogram takes a single gap");
  detail::require(cfg.study.bins >= 1, "--bins must be >= 1");
  const auto hist = regret_histogram(cfg.study.delta.front(), cfg.policy.c, cfg.study.bins, monte_carlo(cfg),
                                     cfg.policy.d);
  Table table{{"bin_lo", "bin_hi", "count"}, {}};
  for (std::size_t b = 0; b < hist.counts.size(); ++b) {
    table.rows.push_back({hist.edges[b], hist.edges[b + 1], static_cast<long long>(hist.counts[b])});
  }
  emit(cfg, table, out);
  return 0;
}

inline int superdiffusive(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.study.gaps.empty()) throw ConfigError("missing required flag --gaps");
  const Family family = parse_family(cfg.study.family);
  const auto report =
      superdiffusive_check(family, cfg.policy.c, cfg.study.gaps, cfg.study.beta, monte_carlo(cfg), cfg.policy.d);
  Table table{{"gap", "mean_regret", "stderr", "product"}, {}};
  for (const auto& row : report.rows) table.rows.push_back({row.gap, row.mean_regret, row.stderr_regret, row.product});
  emit(cfg, table, out);
  err << "verdict: " << report.verdict() << "; regret " << (report.regret_increasing ? "" : "not ")
      << "strictly increasing in |gap|\n";
  return 0;
}

inline int instability(const ExperimentConfig& cfg, std::ostream& out) {
  detail::require(cfg.instance.mu.size() == 1, "--mu: instability takes a single effect size");
  const auto res = instability_frequencies(cfg.instance.mu.front(), cfg.study.eps, cfg.study.eta, monte_carlo(cfg));
  Table table{{"mu", "eps", "eta", "p_high", "p_low", "p_both", "reps"}, {}};
  table.rows.push_back({cfg.instance.mu.front(), cfg.study.eps, cfg.study.eta, res.p_high, res.p_low, res.p_both,
                        static_cast<long long>(res.reps)});
  emit(cfg, table, out);
  return 0;
}

inline int bounds(const ExperimentConfig& cfg, std::ostream& out) {
  detail::require(!cfg.study.delta.empty(), "--delta must not be empty");
  Table table{{"algorithm", "delta", "scaled_bound"}, {}};
  for (double delta : cfg.study.delta) {
    for (auto algo : kAllBounds) table.rows.push_back({std::string(to_string(algo)), delta, bound_scaled(algo, delta)});
  }
  emit(cfg, table, out);
  return 0;
}

inline int convergence(ExperimentConfig cfg, std::ostream& out) {
  require_policy(cfg);
  apply_nu_mode(cfg.study.nu_mode, cfg.policy);
  detail::require(!cfg.study.n.empty(), "--n must not be empty");
  cfg.policy.form = PolicyForm::limit;
  BanditInstance inst = cfg.instance;
  if (is_two_arm(cfg.policy.kind)) {
    detail::require(cfg.study.delta.size() == 1, "--delta: convergence takes a single gap");
    inst = family_instance(Family::ts2, cfg.study.delta.front());
    inst.family = cfg.instance.family;
  }
  const MonteCarlo mc = monte_carlo(cfg);
  const auto rows = convergence_study(inst, cfg.policy.resolve(), cfg.study.n, cfg.study.times, mc.reps, mc);
  Table table{{"n", "t", "mean_prelimit", "mean_diffusion", "mean_diff", "combined_stderr", "ks_q_final"}, {}};
  for (const auto& row : rows) {
    table.rows.push_back({row.n, row.t, row.mean_prelimit, row.mean_diffusion, row.mean_diff, row.combined_stderr,
                          row.ks_q_final});
  }
  emit(cfg, table, out);
  return 0;
}

// ---------------------------------------------------------------------------
// Option wiring

/// Records flag values during parsing and applies them on top of the
/// defaults and config file afterwards.
class Overrides {
 public:
  using Setter = std::function<void(ExperimentConfig&)>;

  template <class T, class Set>
  CLI::Option* add(CLI::App* app, const std::string& name, const std::string& desc, const std::string& shown,
                   Set set) {
    auto* opt = app->add_option_function<T>(
        name,
        [this, set, name](const T& v) {
          pending_.push_back([set, v, name](ExperimentConfig& c) {
            try {
              set(c, v);
            } catch (const ConfigError& e) {
              const std::string what = e.what();
              throw ConfigError(what.rfind("--", 0) == 0 ? what : name + ": " + what);
            }
          });
        },
        desc);
    if (!shown.empty()) opt->default_str(shown);
    return opt;
  }

  template <class Set>
  CLI::Option* flag(CLI::App* app, const std::string& name, const std::string& desc, Set set) {
    return app->add_flag_function(
        name, [this, set](std::int64_t) { pending_.push_back([set](ExperimentConfig& c) { set(c); }); }, desc);
  }

  void apply(ExperimentConfig& cfg) const {
    for (const auto& s : pending_) s(cfg);
  }

 private:
  std::vector<Setter> pending_;
};

inline void add_io(CLI::App* app, Overrides& ov, std::string& config_path, bool monte_carlo = true) {
  const ExperimentConfig def;
  app->add_option("--config", config_path, "JSON configuration file; flags override its values");
  ov.add<std::string>(app, "--output", "Output file, '-' for standard output", def.output.path,
                      [](ExperimentConfig& c, const std::string& v) { c.output.path = v; });
  ov.add<std::string>(app, "--format", "Output format: csv or json", def.output.format,
                      [](ExperimentConfig& c, const std::string& v) { c.output.format = v; });
  if (!monte_carlo) return;
  ov.add<std::size_t>(app, "--reps", "Monte Carlo replications", std::to_string(def.reps),
                      [](ExperimentConfig& c, std::size_t v) { c.reps = v; });
  ov.add<std::uint64_t>(app, "--seed", "Master seed", std::to_string(def.master_seed),
                        [](ExperimentConfig& c, std::uint64_t v) { c.master_seed = v; });
  ov.add<std::size_t>(app, "--workers", std::string("Worker threads (default: $") + kWorkersEnv +
                                            " or hardware concurrency)",
                      "", [](ExperimentConfig& c, std::size_t v) { c.workers = v; });
}

inline void add_grid(CLI::App* app, Overrides& ov) {
  const TimeGrid def;
  ov.add<double>(app, "--t0", "Warm-start time", format_number(def.t0),
                 [](ExperimentConfig& c, double v) { c.grid.t0 = v; });
  ov.add<double>(app, "--geometric-end", "End of the geometric grid segment", format_number(def.geometric_end),
                 [](ExperimentConfig& c, double v) { c.grid.geometric_end = v; });
  ov.add<std::size_t>(app, "--geometric-count", "Points in the geometric segment (< 2 disables it)",
                      std::to_string(def.geometric_count),
                      [](ExperimentConfig& c, std::size_t v) { c.grid.geometric_count = v; });
  ov.add<double>(app, "--dt", "Uniform step after the geometric segment", format_number(def.dt),
                 [](ExperimentConfig& c, double v) { c.grid.dt = v; });
}

inline void add_instance(CLI::App* app, Overrides& ov, bool with_sigma = true) {
  const ExperimentConfig def;
  ov.add<std::string>(app, "--mu", "Limit-scale arm means, comma-separated", format_list(def.instance.mu),
                      [](ExperimentConfig& c, const std::string& v) { c.instance.mu = parse_real_list(v, "--mu"); });
  if (!with_sigma) return;
  ov.add<std::string>(app, "--sigma", "Arm reward sds, comma-separated (one value applies to all arms)",
                      format_list(def.instance.sigma), [](ExperimentConfig& c, const std::string& v) {
                        c.instance.sigma = parse_real_list(v, "--sigma");
                      });
  ov.add<std::string>(app, "--reward-family", "gaussian, shifted-bernoulli or shifted-uniform",
                      std::string(to_string(def.instance.family)), [](ExperimentConfig& c, const std::string& v) {
                        c.instance.family = parse_reward_family(v);
                      });
}

inline void add_c(CLI::App* app, Overrides& ov) {
  ov.add<double>(app, "--c", "Prior smoothing c", "0", [](ExperimentConfig& c, double v) { c.policy.c = v; });
}

inline void add_d(CLI::App* app, Overrides& ov) {
  ov.add<double>(app, "--d", "Two-arm tempering d", "1e-8 for ts2 with c = 0, else 0",
                 [](ExperimentConfig& c, double v) { c.policy.d = v; });
}

inline void add_policy(CLI::App* app, Overrides& ov) {
  ov.add<std::string>(app, "--policy", "ts1, ts2, greedy, luce, explore-ts1, explore-ts2 or constant (required)", "",
                      [](ExperimentConfig& c, const std::string& v) {
                        c.policy.kind = parse_policy_kind(v);
                        c.policy_given = true;
                      });
  add_c(app, ov);
  add_d(app, ov);
  ov.add<double>(app, "--nu", "Finite-horizon prior sd (default derived from c)", "",
                 [](ExperimentConfig& c, double v) { c.policy.nu = v; });
  ov.add<double>(app, "--zeta", "Finite-horizon tempering sd (default derived from d)", "",
                 [](ExperimentConfig& c, double v) { c.policy.zeta = v; });
  ov.add<double>(app, "--alpha", "Greedy / Luce strength", "1",
                 [](ExperimentConfig& c, double v) { c.policy.alpha = v; });
  ov.add<double>(app, "--c-g", "Greedy offset", "0", [](ExperimentConfig& c, double v) { c.policy.c_g = v; });
  ov.add<std::string>(app, "--weights", "Constant policy probabilities, comma-separated", "",
                      [](ExperimentConfig& c, const std::string& v) {
                        c.policy.weights = parse_real_list(v, "--weights");
                      });
  ov.add<std::string>(app, "--nu-mode", "Thompson prior scaling: smoothed (c = 1) or undersmoothed (c = 0)", "",
                      [](ExperimentConfig& c, const std::string& v) { c.study.nu_mode = v; });
}

inline void add_family(CLI::App* app, Overrides& ov) {
  ov.add<std::string>(app, "--family", "ts1 (one arm vs zero) or ts2 (two arms, means (gap, 0))", "ts1",
                      [](ExperimentConfig& c, const std::string& v) { c.study.family = v; });
}

inline void add_gaps(CLI::App* app, Overrides& ov) {
  ov.add<std::string>(app, "--gaps", "Gaps as start:stop:step and/or comma list (required)", "",
                      [](ExperimentConfig& c, const std::string& v) { c.study.gaps = parse_real_list(v, "--gaps"); });
}

inline void add_delta(CLI::App* app, Overrides& ov, const std::string& desc) {
  const StudyConfig def;
  ov.add<std::string>(app, "--delta", desc, format_list(def.delta), [](ExperimentConfig& c, const std::string& v) {
    c.study.delta = parse_real_list(v, "--delta");
  });
}

inline void add_times(CLI::App* app, Overrides& ov, const std::string& desc) {
  const StudyConfig def;
  ov.add<std::string>(app, "--times", desc, format_list(def.times), [](ExperimentConfig& c, const std::string& v) {
    c.study.times = parse_real_list(v, "--times");
  });
}

}  // namespace cli

/// Runs the command line; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diffusion-limit simulator for sequentially randomized experiments"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  cli::Overrides ov;
  std::string config_path;
  const ExperimentConfig def;
  const StudyConfig study_def;

  auto* sim = app.add_subcommand("simulate", "Simulate paths; print a summary and optionally write CSV");
  cli::add_io(sim, ov, config_path);
  cli::add_grid(sim, ov);
  cli::add_instance(sim, ov);
  cli::add_policy(sim, ov);
  ov.add<std::string>(sim, "--mode", "diffusion or prelimit", study_def.mode,
                      [](ExperimentConfig& c, const std::string& v) { c.study.mode = v; });
  ov.add<std::string>(sim, "--integrator", "Diffusion integrator: time-change or euler-maruyama",
                      study_def.integrator,
                      [](ExperimentConfig& c, const std::string& v) { c.study.integrator = v; });
  ov.add<long long>(sim, "--n", "Pre-limit horizon", std::to_string(study_def.n.front()),
                    [](ExperimentConfig& c, long long v) { c.study.n = {v}; });
  cli::add_times(sim, ov, "Band times for pre-limit output");
  ov.flag(sim, "--per-path", "Diffusion output: one row per path instead of the aggregate",
          [](ExperimentConfig& c) { c.study.per_path = true; });

  auto* prof = app.add_subcommand("profile", "Regret profile over gaps and smoothing levels");
  cli::add_io(prof, ov, config_path);
  cli::add_grid(prof, ov);
  cli::add_family(prof, ov);
  cli::add_gaps(prof, ov);
  ov.add<std::string>(prof, "--cs", "Smoothing levels, comma-separated", format_list(study_def.cs),
                      [](ExperimentConfig& c, const std::string& v) { c.study.cs = parse_real_list(v, "--cs"); });
  cli::add_d(prof, ov);

  auto* hist = app.add_subcommand("histogram", "Distribution of two-armed regret on [0, delta]");
  cli::add_io(hist, ov, config_path);
  cli::add_grid(hist, ov);
  cli::add_delta(hist, ov, "Scaled arm gap");
  cli::add_c(hist, ov);
  cli::add_d(hist, ov);
  ov.add<std::size_t>(hist, "--bins", "Histogram bins", std::to_string(study_def.bins),
                      [](ExperimentConfig& c, std::size_t v) { c.study.bins = v; });

  auto* sup = app.add_subcommand("superdiffusive", "Large-gap regret trend and R * |gap|^beta");
  cli::add_io(sup, ov, config_path);
  cli::add_grid(sup, ov);
  cli::add_family(sup, ov);
  cli::add_gaps(sup, ov);
  cli::add_c(sup, ov);
  cli::add_d(sup, ov);
  ov.add<double>(sup, "--beta", "Exponent in (0, 1)", format_number(study_def.beta),
                 [](ExperimentConfig& c, double v) { c.study.beta = v; });

  auto* inst = app.add_subcommand("instability", "Early-time extremes of undersmoothed one-armed sampling");
  cli::add_io(inst, ov, config_path);
  cli::add_grid(inst, ov);
  cli::add_instance(inst, ov, false);
  ov.add<double>(inst, "--eps", "Time window [t0, eps)", format_number(study_def.eps),
                 [](ExperimentConfig& c, double v) { c.study.eps = v; });
  ov.add<double>(inst, "--eta", "Threshold distance from 0 and 1", format_number(study_def.eta),
                 [](ExperimentConfig& c, double v) { c.study.eta = v; });
  ov.flag(inst, "--reference-grid", "Use the near-zero reference grid (t0 = 1e-9, 512 geometric points)",
          [](ExperimentConfig& c) { c.study.reference_grid = true; });

  auto* bnd = app.add_subcommand("bounds", "Scaled finite-sample regret bounds");
  cli::add_io(bnd, ov, config_path, false);
  cli::add_delta(bnd, ov, "Scaled gaps, start:stop:step and/or comma list");

  auto* conv = app.add_subcommand("convergence", "Pre-limit versus diffusion comparison");
  cli::add_io(conv, ov, config_path);
  cli::add_grid(conv, ov);
  cli::add_instance(conv, ov);
  cli::add_policy(conv, ov);
  ov.add<std::string>(conv, "--n", "Horizons, comma-separated", format_list(study_def.n),
                      [](ExperimentConfig& c, const std::string& v) { c.study.n = parse_integer_list(v, "--n"); });
  cli::add_delta(conv, ov, "Scaled gap for two-armed policies (means (delta, 0))");
  cli::add_times(conv, ov, "Comparison times (last must be 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    ExperimentConfig cfg = config_path.empty() ? def : load_config(config_path, def);
    ov.apply(cfg);
    if (cfg.instance.sigma.size() == 1 && cfg.instance.mu.size() > 1) {
      cfg.instance.sigma.assign(cfg.instance.mu.size(), cfg.instance.sigma.front());
    }
    if (sim->parsed()) return cli::simulate(cfg, out);
    if (prof->parsed()) return cli::profile(cfg, out);
    if (hist->parsed()) return cli::histogram(cfg, out);
    if (sup->parsed()) return cli::superdiffusive(cfg, out, err);
    if (inst->parsed()) return cli::instability(cfg, out);
    if (bnd->parsed()) return cli::bounds(cfg, out);
    if (conv->parsed()) return cli::convergence(cfg, out);
    return 1;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("difflim");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace difflim

#endif  // DIFFLIM_CLI_HPP
