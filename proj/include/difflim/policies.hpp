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

// Sampling functions: the map from (pull counts, cumulative rewards) to the
// probability of pulling each arm. Each Thompson rule comes in a finite-n
// form, evaluated on raw counts and sums, and a limit form, evaluated on the
// scaled state (q, s) = (Q / n, S / sqrt(n)).

#ifndef DIFFLIM_POLICIES_HPP
#define DIFFLIM_POLICIES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "difflim/error.hpp"
#include "difflim/model.hpp"
#include "difflim/normal.hpp"

namespace difflim {

/// Probability vector over arms: nonnegative, sums to one.
class SimplexVector {
 public:
  SimplexVector() = default;
  explicit SimplexVector(std::vector<double> p) : p_(std::move(p)) {}

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t k) const { return p_[k]; }
  std::span<const double> values() const noexcept { return p_; }
  auto begin() const noexcept { return p_.begin(); }
  auto end() const noexcept { return p_.end(); }

 private:
  std::vector<double> p_;
};

/// One-armed Thompson sampling in the limit:
/// Phi(s / (sigma sqrt(q + sigma^2 c))). At q = c = 0 the ratio is 0/0 and
/// the rule returns 1/2, which is what the finite rule gives with no data.
inline double pi_ts_one_arm_limit(double q, double s, double sigma, double c) {
  detail::require(q >= 0.0, "pi_ts_one_arm_limit: q must be >= 0");
  detail::require(c >= 0.0, "pi_ts_one_arm_limit: c must be >= 0");
  const double var = q + sigma * sigma * c;
  if (var == 0.0) return 0.5;
  return normal_cdf(s / (sigma * std::sqrt(var)));
}

/// One-armed Thompson sampling with a N(0, nu^2) prior after `pulls` draws
/// summing to `reward_sum`.
inline double pi_ts_one_arm_finite(double pulls, double reward_sum, double sigma, double nu) {
  detail::require(pulls >= 0.0, "pi_ts_one_arm_finite: pulls must be >= 0");
  detail::require(sigma > 0.0 && nu > 0.0, "pi_ts_one_arm_finite: sigma and nu must be > 0");
  const double prec = 1.0 / (sigma * sigma);
  return normal_cdf(prec * reward_sum / std::sqrt(prec * pulls + 1.0 / (nu * nu)));
}

/// Translation-invariant two-armed Thompson sampling in the limit,
/// probability of pulling arm 1:
///
///   Phi( sigma^-2 (q2 s1 - q1 s2) / sqrt(sigma^-2 t q1 q2 + t^2 c + d) ),
///
/// with q2 = t - q1. The numerator is q1 q2 times the difference of the
/// empirical means. When the denominator vanishes (q1 q2 = 0, c = d = 0)
/// the rule takes its sign limit: 1/2 if the numerator is zero too,
/// otherwise 0 or 1.
inline double pi_ts_two_arm_limit(double t, double q1, double s1, double s2, double sigma, double c,
                                  double d) {
  detail::require(q1 >= 0.0 && q1 <= t, "pi_ts_two_arm_limit: q1 must lie in [0, t]");
  detail::require(c >= 0.0 && d >= 0.0, "pi_ts_two_arm_limit: c and d must be >= 0");
  const double q2 = t - q1;
  const double prec = 1.0 / (sigma * sigma);
  const double num = prec * (q2 * s1 - q1 * s2);
  const double var = prec * t * q1 * q2 + t * t * c + d;
  if (var == 0.0) {
    if (num == 0.0) return 0.5;
    return num > 0.0 ? 1.0 : 0.0;
  }
  return normal_cdf(num / std::sqrt(var));
}

/// Two-armed Thompson sampling at period i of a horizon-n experiment.
/// Optional tempering adds zeta^-2 (n / i)^2 to the posterior precision.
inline double pi_ts_two_arm_finite(double i, double pulls1, double pulls2, double sum1, double sum2,
                                   double sigma, double nu, std::optional<double> zeta, double n) {
  detail::require(pulls1 >= 1.0 && pulls2 >= 1.0,
                  "pi_ts_two_arm_finite: each arm needs at least one pull");
  detail::require(i == pulls1 + pulls2, "pi_ts_two_arm_finite: i must equal Q1 + Q2");
  detail::require(sigma > 0.0 && nu > 0.0, "pi_ts_two_arm_finite: sigma and nu must be > 0");
  const double inv_alpha2 = pulls1 * pulls2 / (sigma * sigma * i);
  const double gap = sum1 / pulls1 - sum2 / pulls2;
  double precision = inv_alpha2 + 1.0 / (nu * nu);
  if (zeta) {
    detail::require(*zeta > 0.0, "pi_ts_two_arm_finite: zeta must be > 0");
    precision += (n * n) / (*zeta * *zeta * i * i);
  }
  return normal_cdf(inv_alpha2 * gap / std::sqrt(precision));
}

namespace detail {

inline void softmax_into(std::span<const double> logits, std::span<double> out) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(logits[k] - top);
    total += out[k];
  }
  for (double& v : out) v /= total;
}

// Shared by the finite and limit forms.
inline void tempered_greedy_into(std::span<const double> q, std::span<const double> s, double alpha,
                                 double offset, std::span<double> out) {
  require(q.size() == s.size() && out.size() == q.size(), "pi_tempered_greedy: size mismatch");
  if (alpha == 0.0) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
    return;
  }
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double denom = q[k] + offset;
    if (!(denom > 0.0)) {
      throw IntegrationError("pi_tempered_greedy: q_k + c_g must be > 0 (arm " + std::to_string(k) + ")");
    }
    out[k] = alpha * s[k] / denom;
  }
  softmax_into(std::span<const double>(out.data(), out.size()), out);
}

inline void luce_into(std::span<const double> s, double floor, std::span<double> out) {
  require(out.size() == s.size(), "pi_luce: size mismatch");
  require(floor >= 0.0, "pi_luce: alpha must be >= 0");
  double total = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    out[k] = std::max(s[k], floor);
    total += out[k];
  }
  if (!(total > 0.0)) throw IntegrationError("pi_luce: all weights are zero");
  for (double& v : out) v /= total;
}

inline void exploration_into(std::span<const double> rho, std::span<double> out) {
  double total = 0.0;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    out[k] = rho[k] * (1.0 - rho[k]);
    total += out[k];
  }
  require(total > 0.0, "exploration_transform: degenerate posterior");
  for (double& v : out) v /= total;
}

}  // namespace detail

/// Tempered greedy: pi_k proportional to exp(alpha s_k / (q_k + c_g)).
inline SimplexVector pi_tempered_greedy(std::span<const double> q, std::span<const double> s, double alpha,
                                        double c_g) {
  std::vector<double> out(q.size());
  detail::tempered_greedy_into(q, s, alpha, c_g, out);
  return SimplexVector(std::move(out));
}

/// Luce's rule: pi_k proportional to max(s_k, alpha).
inline SimplexVector pi_luce(std::span<const double> s, double alpha) {
  std::vector<double> out(s.size());
  detail::luce_into(s, alpha, out);
  return SimplexVector(std::move(out));
}

/// Exploration sampling: pi_k proportional to rho_k (1 - rho_k).
inline SimplexVector exploration_transform(const SimplexVector& rho) {
  std::vector<double> out(rho.size());
  detail::exploration_into(rho.values(), out);
  return SimplexVector(std::move(out));
}

/// A PolicySpec bound to an instance, evaluated without allocation.
///
/// Output is the probability of pulling each of the K arms. For a
/// one-armed instance the remainder 1 - out[0] goes to the outside option.
class SamplingRule {
 public:
  SamplingRule(PolicySpec spec, const BanditInstance& inst) : spec_(std::move(spec)) {
    validate_instance(inst);
    validate_policy(spec_, inst.arms());
    arms_ = inst.arms();
    sigma_ = inst.sigma.front();
    if (is_two_arm(spec_.kind)) {
      detail::require(inst.sigma[0] == inst.sigma[1],
                      "two-armed Thompson sampling requires a common sigma");
    }
  }

  const PolicySpec& spec() const noexcept { return spec_; }
  std::size_t arms() const noexcept { return arms_; }

  /// Limit form at time t with scaled state (q, s).
  void limit([[maybe_unused]] double t, std::span<const double> q, std::span<const double> s, std::span<double> out) const {
    switch (spec_.kind) {
      case PolicyKind::ts_one_arm:
        out[0] = pi_ts_one_arm_limit(q[0], s[0], sigma_, spec_.c);
        return;
      case PolicyKind::explore_ts_one_arm:
        out[0] = explore_pair(pi_ts_one_arm_limit(q[0], s[0], sigma_, spec_.c));
        return;
      case PolicyKind::ts_two_arm:
      case PolicyKind::explore_ts_two_arm: {
        double p = pi_ts_two_arm_limit(q[0] + q[1], q[0], s[0], s[1], sigma_, spec_.c, spec_.d);
        if (spec_.kind == PolicyKind::explore_ts_two_arm) p = explore_pair(p);
        out[0] = p;
        out[1] = 1.0 - p;
        return;
      }
      case PolicyKind::tempered_greedy:
        detail::tempered_greedy_into(q, s, spec_.alpha, spec_.c_g, out);
        return;
      case PolicyKind::luce:
        detail::luce_into(s, spec_.alpha, out);
        return;
      case PolicyKind::constant:
        std::copy(spec_.weights.begin(), spec_.weights.end(), out.begin());
        return;
    }
  }

  /// Finite form at horizon n, from raw pull counts and reward sums.
  void finite(long long n, std::span<const double> pulls, std::span<const double> sums,
              std::span<double> out) const {
    const double nn = static_cast<double>(n);
    switch (spec_.kind) {
      case PolicyKind::ts_one_arm:
      case PolicyKind::explore_ts_one_arm: {
        const double p = pi_ts_one_arm_finite(pulls[0], sums[0], sigma_, finite_prior_sd(spec_, n));
        out[0] = spec_.kind == PolicyKind::ts_one_arm ? p : explore_pair(p);
        return;
      }
      case PolicyKind::ts_two_arm:
      case PolicyKind::explore_ts_two_arm: {
        double p = pi_ts_two_arm_finite(pulls[0] + pulls[1], pulls[0], pulls[1], sums[0], sums[1], sigma_,
                                        finite_prior_sd(spec_, n), finite_tempering_sd(spec_, n), nn);
        if (spec_.kind == PolicyKind::explore_ts_two_arm) p = explore_pair(p);
        out[0] = p;
        out[1] = 1.0 - p;
        return;
      }
      case PolicyKind::tempered_greedy:
        // alpha_n = alpha sqrt(n), c_n = n c_g: identical to the limit rule at (Q/n, S/sqrt(n)).
        detail::tempered_greedy_into(pulls, sums, spec_.alpha * std::sqrt(nn), spec_.c_g * nn, out);
        return;
      case PolicyKind::luce:
        detail::luce_into(sums, spec_.alpha * std::sqrt(nn), out);
        return;
      case PolicyKind::constant:
        std::copy(spec_.weights.begin(), spec_.weights.end(), out.begin());
        return;
    }
  }

 private:
  // Exploration sampling over a two-point posterior (arm vs. the other
  // action) is uniform whenever it is defined; at a vertex the uniform
  // value is also the continuous extension.
  static double explore_pair(double rho) {
    const double pair[2] = {rho, 1.0 - rho};
    double out[2];
    if (rho * (1.0 - rho) <= 0.0) return 0.5;
    detail::exploration_into(pair, out);
    return out[0];
  }

  PolicySpec spec_;
  std::size_t arms_ = 0;
  double sigma_ = 1.0;
};

}  // namespace difflim

#endif  // DIFFLIM_POLICIES_HPP
