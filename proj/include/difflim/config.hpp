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

// Experiment configuration: one JSON document describing the instance,
// policy, grid, Monte Carlo size and per-command study parameters.
// Unknown keys are rejected; missing keys keep their defaults.

#ifndef DIFFLIM_CONFIG_HPP
#define DIFFLIM_CONFIG_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "difflim/error.hpp"
#include "difflim/grid.hpp"
#include "difflim/model.hpp"

namespace difflim {

/// Policy as configured. d is optional: when unset the default tempering
/// rule applies (1e-8 for two-armed Thompson sampling with c = 0).
struct PolicyConfig {
  PolicyKind kind = PolicyKind::ts_one_arm;
  PolicyForm form = PolicyForm::limit;
  double c = 0.0;
  std::optional<double> d;
  std::optional<double> nu;
  std::optional<double> zeta;
  double alpha = 1.0;
  double c_g = 0.0;
  std::vector<double> weights;

  friend bool operator==(const PolicyConfig&, const PolicyConfig&) = default;

  PolicySpec resolve() const {
    PolicySpec p{kind, form, c, 0.0, nu, zeta, alpha, c_g, weights};
    if (d) {
      p.d = *d;
    } else if (is_two_arm(kind) && c == 0.0) {
      p.d = 1e-8;
    }
    return p;
  }
};

/// Parameters used by individual subcommands.
struct StudyConfig {
  std::string mode = "diffusion";         // simulate: diffusion | prelimit
  std::string integrator = "time-change"; // time-change | euler-maruyama
  std::vector<long long> n{1500};         // pre-limit horizons
  std::string nu_mode;                    // "", smoothed, undersmoothed
  std::string family = "ts1";
  std::vector<double> gaps;
  std::vector<double> cs{0.0};
  std::vector<double> delta{4.0};
  std::size_t bins = 20;
  double beta = 0.5;
  double eps = 0.05;
  double eta = 0.2;
  std::vector<double> times{0.25, 0.5, 0.75, 1.0};
  bool per_path = false;
  bool reference_grid = false;

  friend bool operator==(const StudyConfig&, const StudyConfig&) = default;
};

struct OutputConfig {
  std::string path = "-";  // "-" is standard output
  std::string format = "csv";

  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct ExperimentConfig {
  BanditInstance instance{{0.0}, {1.0}, RewardFamily::gaussian};
  PolicyConfig policy;
  bool policy_given = false;  // not serialized; set when a config or flag names the policy
  TimeGrid grid;
  std::size_t reps = 10000;
  std::uint64_t master_seed = 0;
  std::optional<std::size_t> workers;
  OutputConfig output;
  StudyConfig study;

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.instance == b.instance && a.policy == b.policy && a.grid == b.grid && a.reps == b.reps &&
           a.master_seed == b.master_seed && a.workers == b.workers && a.output == b.output && a.study == b.study;
  }
};

// ---------------------------------------------------------------------------
// Scalar and list parsing shared with the command line

namespace detail {

inline double parse_double(std::string_view text, std::string_view field) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw ConfigError(std::string(field) + ": cannot parse '" + std::string(text) + "' as a number");
  }
  return v;
}

inline long long parse_integer(std::string_view text, std::string_view field) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(field) + ": cannot parse '" + std::string(text) + "' as an integer");
  }
  return v;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Comma-separated values; an item of the form start:stop:step expands to
/// start, start + step, ... up to stop inclusive (within 1e-9 of a step).
inline std::vector<double> parse_real_list(std::string_view text, std::string_view field) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item = detail::trim(text.substr(pos, comma - pos));
    if (item.empty()) throw ConfigError(std::string(field) + ": empty list item");
    const std::size_t c1 = item.find(':');
    if (c1 == std::string_view::npos) {
      out.push_back(detail::parse_double(item, field));
    } else {
      const std::size_t c2 = item.find(':', c1 + 1);
      if (c2 == std::string_view::npos) throw ConfigError(std::string(field) + ": range must be start:stop:step");
      const double start = detail::parse_double(item.substr(0, c1), field);
      const double stop = detail::parse_double(item.substr(c1 + 1, c2 - c1 - 1), field);
      const double step = detail::parse_double(item.substr(c2 + 1), field);
      if (!(step != 0.0) || !std::isfinite(step) || (stop - start) / step < -1e-9) {
        throw ConfigError(std::string(field) + ": step must be nonzero and point from start to stop");
      }
      const double count = std::floor((stop - start) / step + 1e-9);
      if (count > 1e6) throw ConfigError(std::string(field) + ": range has too many points");
      for (long long j = 0; j <= static_cast<long long>(count); ++j) out.push_back(start + step * static_cast<double>(j));
    }
    pos = comma + 1;
  }
  return out;
}

inline std::vector<long long> parse_integer_list(std::string_view text, std::string_view field) {
  std::vector<long long> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    out.push_back(detail::parse_integer(detail::trim(text.substr(pos, comma - pos)), field));
    pos = comma + 1;
  }
  return out;
}

/// Shortest round-trip decimal; infinities as "inf" / "-inf".
inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T>
std::string format_list(const std::vector<T>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_floating_point_v<T>) {
      s += format_number(values[i]);
    } else {
      s += std::to_string(values[i]);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> known) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || item.key() == k;
    if (!ok) {
      throw ConfigError("unknown key '" + (where.empty() ? "" : std::string(where) + ".") + item.key() + "'");
    }
  }
}

template <class T>
void read(const json& obj, std::string_view where, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("field '" + std::string(where) + "." + key + "' has the wrong type");
  }
}

template <class T>
void read(const json& obj, std::string_view where, const char* key, std::optional<T>& out) {
  if (!obj.contains(key)) return;
  if (obj.at(key).is_null()) {
    out.reset();
    return;
  }
  T v{};
  read(obj, where, key, v);
  out = v;
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace detail

inline nlohmann::json to_json(const ExperimentConfig& cfg) {
  using detail::json;
  using detail::optional_json;
  json j;
  j["instance"] = {{"mu", cfg.instance.mu},
                   {"sigma", cfg.instance.sigma},
                   {"reward_family", std::string(to_string(cfg.instance.family))}};
  j["policy"] = {{"kind", std::string(to_string(cfg.policy.kind))},
                 {"form", std::string(to_string(cfg.policy.form))},
                 {"c", cfg.policy.c},
                 {"d", optional_json(cfg.policy.d)},
                 {"nu", optional_json(cfg.policy.nu)},
                 {"zeta", optional_json(cfg.policy.zeta)},
                 {"alpha", cfg.policy.alpha},
                 {"c_g", cfg.policy.c_g},
                 {"weights", cfg.policy.weights}};
  j["grid"] = {{"t0", cfg.grid.t0},
               {"geometric_end", cfg.grid.geometric_end},
               {"geometric_count", cfg.grid.geometric_count},
               {"dt", cfg.grid.dt}};
  j["reps"] = cfg.reps;
  j["master_seed"] = cfg.master_seed;
  j["workers"] = optional_json(cfg.workers);
  j["output"] = {{"path", cfg.output.path}, {"format", cfg.output.format}};
  const auto& s = cfg.study;
  j["study"] = {{"mode", s.mode},   {"integrator", s.integrator}, {"n", s.n},           {"nu_mode", s.nu_mode},
                {"family", s.family}, {"gaps", s.gaps},           {"cs", s.cs},         {"delta", s.delta},
                {"bins", s.bins},   {"beta", s.beta},             {"eps", s.eps},       {"eta", s.eta},
                {"times", s.times}, {"per_path", s.per_path},     {"reference_grid", s.reference_grid}};
  return j;
}

/// Reads a configuration on top of `base`; keys absent from `j` keep the
/// values in `base`.
inline ExperimentConfig from_json(const nlohmann::json& j, ExperimentConfig base = {}) {
  using detail::read;
  using detail::reject_unknown;
  reject_unknown(j, "", {"instance", "policy", "grid", "reps", "master_seed", "workers", "output", "study"});
  ExperimentConfig cfg = std::move(base);

  if (j.contains("instance")) {
    const auto& o = j.at("instance");
    reject_unknown(o, "instance", {"K", "mu", "sigma", "reward_family"});
    read(o, "instance", "mu", cfg.instance.mu);
    read(o, "instance", "sigma", cfg.instance.sigma);
    if (o.contains("reward_family")) {
      std::string name;
      read(o, "instance", "reward_family", name);
      cfg.instance.family = parse_reward_family(name);
    }
    if (o.contains("K")) {
      std::size_t k = 0;
      read(o, "instance", "K", k);
      detail::require(k == cfg.instance.mu.size(), "instance.K does not match the length of instance.mu");
    }
    if (cfg.instance.sigma.size() == 1 && cfg.instance.mu.size() > 1) {
      cfg.instance.sigma.assign(cfg.instance.mu.size(), cfg.instance.sigma.front());
    }
  }
  if (j.contains("policy")) {
    const auto& o = j.at("policy");
    reject_unknown(o, "policy", {"kind", "form", "c", "d", "nu", "zeta", "alpha", "c_g", "weights"});
    if (o.contains("kind")) {
      std::string name;
      read(o, "policy", "kind", name);
      cfg.policy.kind = parse_policy_kind(name);
      cfg.policy_given = true;
    }
    if (o.contains("form")) {
      std::string name;
      read(o, "policy", "form", name);
      cfg.policy.form = parse_policy_form(name);
    }
    read(o, "policy", "c", cfg.policy.c);
    read(o, "policy", "d", cfg.policy.d);
    read(o, "policy", "nu", cfg.policy.nu);
    read(o, "policy", "zeta", cfg.policy.zeta);
    read(o, "policy", "alpha", cfg.policy.alpha);
    read(o, "policy", "c_g", cfg.policy.c_g);
    read(o, "policy", "weights", cfg.policy.weights);
  }
  if (j.contains("grid")) {
    const auto& o = j.at("grid");
    reject_unknown(o, "grid", {"t0", "geometric_end", "geometric_count", "dt"});
    read(o, "grid", "t0", cfg.grid.t0);
    read(o, "grid", "geometric_end", cfg.grid.geometric_end);
    read(o, "grid", "geometric_count", cfg.grid.geometric_count);
    read(o, "grid", "dt", cfg.grid.dt);
  }
  read(j, "", "reps", cfg.reps);
  read(j, "", "master_seed", cfg.master_seed);
  read(j, "", "workers", cfg.workers);
  if (j.contains("output")) {
    const auto& o = j.at("output");
    reject_unknown(o, "output", {"path", "format"});
    read(o, "output", "path", cfg.output.path);
    read(o, "output", "format", cfg.output.format);
  }
  if (j.contains("study")) {
    const auto& o = j.at("study");
    auto& s = cfg.study;
    reject_unknown(o, "study", {"mode", "integrator", "n", "nu_mode", "family", "gaps", "cs", "delta", "bins", "beta",
                                "eps", "eta", "times", "per_path", "reference_grid"});
    read(o, "study", "mode", s.mode);
    read(o, "study", "integrator", s.integrator);
    read(o, "study", "n", s.n);
    read(o, "study", "nu_mode", s.nu_mode);
    read(o, "study", "family", s.family);
    read(o, "study", "gaps", s.gaps);
    read(o, "study", "cs", s.cs);
    read(o, "study", "delta", s.delta);
    read(o, "study", "bins", s.bins);
    read(o, "study", "beta", s.beta);
    read(o, "study", "eps", s.eps);
    read(o, "study", "eta", s.eta);
    read(o, "study", "times", s.times);
    read(o, "study", "per_path", s.per_path);
    read(o, "study", "reference_grid", s.reference_grid);
  }
  return cfg;
}

inline ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return from_json(j, std::move(base));
}

inline ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str(), std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

inline std::string dump_config(const ExperimentConfig& cfg) { return to_json(cfg).dump(2); }

}  // namespace difflim

#endif  // DIFFLIM_CONFIG_HPP
