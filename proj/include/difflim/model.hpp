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

// Domain types shared by the simulators, integrators and analytics.
//
// Means are stored in limit units: an arm with mean mu_k has per-period
// mean mu_k / sqrt(n) at horizon n, and standard deviation sigma_k at every
// horizon. A single-arm instance (K = 1) is the one-armed bandit: the arm is
// compared against an outside option that pays exactly zero, and any
// probability mass a policy does not put on the arm goes to that option.

#ifndef DIFFLIM_MODEL_HPP
#define DIFFLIM_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "difflim/error.hpp"

namespace difflim {

enum class RewardFamily { gaussian, shifted_bernoulli, shifted_uniform };

inline std::string_view to_string(RewardFamily f) {
  switch (f) {
    case RewardFamily::gaussian: return "gaussian";
    case RewardFamily::shifted_bernoulli: return "shifted-bernoulli";
    case RewardFamily::shifted_uniform: return "shifted-uniform";
  }
  return "?";
}

inline RewardFamily parse_reward_family(std::string_view name) {
  if (name == "gaussian") return RewardFamily::gaussian;
  if (name == "shifted-bernoulli") return RewardFamily::shifted_bernoulli;
  if (name == "shifted-uniform") return RewardFamily::shifted_uniform;
  throw ConfigError("unknown reward family '" + std::string(name) + "'");
}

struct BanditInstance {
  std::vector<double> mu;
  std::vector<double> sigma;
  RewardFamily family = RewardFamily::gaussian;

  std::size_t arms() const noexcept { return mu.size(); }
  bool has_outside_option() const noexcept { return mu.size() == 1; }

  /// max_k mu_k, including the zero-reward outside option when K = 1.
  double best_mean() const {
    double best = *std::max_element(mu.begin(), mu.end());
    if (has_outside_option()) best = std::max(best, 0.0);
    return best;
  }

  friend bool operator==(const BanditInstance&, const BanditInstance&) = default;
};

/// Throws ConfigError naming the first violated field.
inline void validate_instance(const BanditInstance& inst) {
  detail::require(!inst.mu.empty(), "K must be >= 1 (mu is empty)");
  detail::require(inst.sigma.size() == inst.mu.size(),
                  "sigma must have K = " + std::to_string(inst.mu.size()) + " entries");
  for (std::size_t k = 0; k < inst.mu.size(); ++k) {
    detail::require(std::isfinite(inst.mu[k]), "mu[" + std::to_string(k) + "] must be finite");
    detail::require(std::isfinite(inst.sigma[k]) && inst.sigma[k] > 0.0,
                    "sigma must be positive (sigma[" + std::to_string(k) + "])");
  }
}

/// Per-period mean of arm k (0-based) at horizon n: mu_k / sqrt(n).
inline double prelimit_mean(const BanditInstance& inst, long long n, std::size_t k) {
  detail::require(k < inst.arms(), "arm index " + std::to_string(k) + " out of range");
  detail::require(n >= 1, "horizon n must be >= 1");
  return inst.mu[k] / std::sqrt(static_cast<double>(n));
}

/// Scaled state: q = Q / n (pull fractions), s = S / sqrt(n).
struct ScaledState {
  double t = 0.0;
  std::vector<double> q;
  std::vector<double> s;

  double pulled() const noexcept {
    double total = 0.0;
    for (double v : q) total += v;
    return total;
  }
  /// Time spent on the outside option (zero unless K = 1).
  double idle() const noexcept { return t - pulled(); }
};

enum class PolicyKind {
  ts_one_arm,
  ts_two_arm,
  tempered_greedy,
  luce,
  explore_ts_one_arm,
  explore_ts_two_arm,
  constant,  // fixed probabilities; used to test the integrators
};

enum class PolicyForm { finite, limit };

inline std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::ts_one_arm: return "ts1";
    case PolicyKind::ts_two_arm: return "ts2";
    case PolicyKind::tempered_greedy: return "greedy";
    case PolicyKind::luce: return "luce";
    case PolicyKind::explore_ts_one_arm: return "explore-ts1";
    case PolicyKind::explore_ts_two_arm: return "explore-ts2";
    case PolicyKind::constant: return "constant";
  }
  return "?";
}

inline PolicyKind parse_policy_kind(std::string_view name) {
  for (auto kind : {PolicyKind::ts_one_arm, PolicyKind::ts_two_arm, PolicyKind::tempered_greedy,
                    PolicyKind::luce, PolicyKind::explore_ts_one_arm, PolicyKind::explore_ts_two_arm,
                    PolicyKind::constant}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown policy kind '" + std::string(name) + "'");
}

inline std::string_view to_string(PolicyForm form) { return form == PolicyForm::finite ? "finite" : "limit"; }

inline PolicyForm parse_policy_form(std::string_view name) {
  if (name == "finite") return PolicyForm::finite;
  if (name == "limit") return PolicyForm::limit;
  throw ConfigError("unknown policy form '" + std::string(name) + "'");
}

/// A sampling rule and its parameters.
///
/// Limit-form parameters: c (prior smoothing), d (two-arm tempering),
/// alpha (greedy / Luce strength), c_g (greedy offset). Finite-form Thompson
/// rules additionally use nu (prior sd) and zeta (tempering sd); when they
/// are unset they are derived from c and d at the horizon, see
/// finite_prior_sd() and finite_tempering_sd().
struct PolicySpec {
  PolicyKind kind = PolicyKind::ts_one_arm;
  PolicyForm form = PolicyForm::limit;
  double c = 0.0;
  double d = 0.0;
  std::optional<double> nu;
  std::optional<double> zeta;
  double alpha = 1.0;
  double c_g = 0.0;
  std::vector<double> weights;  // constant kind only

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

inline bool is_one_arm(PolicyKind kind) {
  return kind == PolicyKind::ts_one_arm || kind == PolicyKind::explore_ts_one_arm;
}
inline bool is_two_arm(PolicyKind kind) {
  return kind == PolicyKind::ts_two_arm || kind == PolicyKind::explore_ts_two_arm;
}

/// Checks parameter ranges and that the policy fits an instance with K arms.
inline void validate_policy(const PolicySpec& p, std::size_t arms) {
  detail::require(p.c >= 0.0 && std::isfinite(p.c), "policy.c must be >= 0");
  detail::require(p.d >= 0.0 && std::isfinite(p.d), "policy.d must be >= 0");
  detail::require(p.alpha >= 0.0 && std::isfinite(p.alpha), "policy.alpha must be >= 0");
  detail::require(p.c_g >= 0.0 && std::isfinite(p.c_g), "policy.c_g must be >= 0");
  detail::require(!p.nu || *p.nu > 0.0, "policy.nu must be > 0");
  detail::require(!p.zeta || *p.zeta > 0.0, "policy.zeta must be > 0");
  if (is_one_arm(p.kind)) {
    detail::require(arms == 1, std::string(to_string(p.kind)) + " requires K = 1");
  }
  if (is_two_arm(p.kind)) {
    detail::require(arms == 2, std::string(to_string(p.kind)) + " requires K = 2");
  }
  if (p.kind == PolicyKind::constant) {
    detail::require(p.weights.size() == arms, "policy.weights must have K entries");
    double total = 0.0;
    for (double w : p.weights) {
      detail::require(w >= 0.0, "policy.weights must be nonnegative");
      total += w;
    }
    detail::require(arms == 1 ? total <= 1.0 + 1e-12 : std::abs(total - 1.0) <= 1e-12,
                    "policy.weights must sum to 1 (<= 1 when K = 1)");
  }
}

/// Finite-horizon prior sd: nu^-2 = n c, and nu = 1 when c = 0.
inline double finite_prior_sd(const PolicySpec& p, long long n) {
  if (p.nu) return *p.nu;
  if (p.c == 0.0) return 1.0;
  return 1.0 / std::sqrt(static_cast<double>(n) * p.c);
}

/// Finite-horizon tempering sd: zeta^-2 = n d; none when d = 0.
inline std::optional<double> finite_tempering_sd(const PolicySpec& p, long long n) {
  if (p.zeta) return p.zeta;
  if (p.d == 0.0) return std::nullopt;
  return 1.0 / std::sqrt(static_cast<double>(n) * p.d);
}

/// One trajectory on an aligned time grid.
struct Path {
  std::vector<double> grid;
  std::vector<ScaledState> states;
  // pi_trace[j] holds the sampling probabilities in force at grid[j].
  std::vector<std::vector<double>> pi_trace;

  const ScaledState& final_state() const { return states.back(); }
};

}  // namespace difflim

#endif  // DIFFLIM_MODEL_HPP
