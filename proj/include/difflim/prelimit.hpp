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

// Exact discrete-time simulation of a K-armed sequentially randomized
// Markov experiment at horizon n, and its scaling to path form.

#ifndef DIFFLIM_PRELIMIT_HPP
#define DIFFLIM_PRELIMIT_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "difflim/error.hpp"
#include "difflim/model.hpp"
#include "difflim/policies.hpp"
#include "difflim/random.hpp"

namespace difflim {

/// Actions, rewards and running state of one horizon-n experiment.
/// Action index K denotes the outside option of a one-armed experiment.
struct RawTrajectory {
  long long n = 0;
  std::size_t arms = 0;
  std::vector<int> actions;                // A_1..A_n
  std::vector<double> rewards;             // Y_1..Y_n (0 for the outside option)
  std::vector<double> running_pulls;       // Q_{k,i}, row-major (n + 1) x K
  std::vector<double> running_sums;        // S_{k,i}, row-major (n + 1) x K

  double pulls(long long i, std::size_t k) const { return running_pulls[static_cast<std::size_t>(i) * arms + k]; }
  double sums(long long i, std::size_t k) const { return running_sums[static_cast<std::size_t>(i) * arms + k]; }

  friend bool operator==(const RawTrajectory&, const RawTrajectory&) = default;
};

namespace detail {

inline double draw_reward(RewardFamily family, double mean, double sigma, RandomStream& rng) {
  switch (family) {
    case RewardFamily::gaussian:
      return mean + sigma * rng.normal();
    case RewardFamily::shifted_bernoulli: {
      // Two-point law on +-a with a^2 = sigma^2 + mean^2: mean and variance
      // match exactly when p = 1/2 + mean / (2a).
      const double a = std::sqrt(sigma * sigma + mean * mean);
      const double p = 0.5 + mean / (2.0 * a);
      if (!(p > 0.0 && p < 1.0)) throw ConfigError("shifted-bernoulli: success probability outside (0, 1)");
      return rng.uniform() < p ? a : -a;
    }
    case RewardFamily::shifted_uniform:
      return mean + sigma * std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
  }
  return 0.0;
}

}  // namespace detail

/// Simulates n periods: A_i ~ Multinomial(psi(Q_{i-1}, S_{i-1})), then
/// Y_i from arm A_i with mean mu_k / sqrt(n) and sd sigma_k.
///
/// Each period consumes one uniform (action) then one reward variate from a
/// single stream, whether or not the draw is used. Two-armed Thompson
/// sampling pulls arm 1 then arm 2 in the first two periods.
inline RawTrajectory simulate_srme(const BanditInstance& inst, const PolicySpec& policy, long long n,
                                   std::uint64_t master_seed, std::uint64_t replication) {
  validate_instance(inst);
  detail::require(policy.form == PolicyForm::finite, "simulate_srme: policy must be in finite form");
  detail::require(n >= 1, "simulate_srme: n must be >= 1");
  const bool two_arm = is_two_arm(policy.kind);
  detail::require(!two_arm || n >= 2, "simulate_srme: two-armed Thompson sampling needs n >= 2");
  const SamplingRule rule(policy, inst);

  const std::size_t arms = inst.arms();
  RandomStream rng(StreamKey{master_seed, replication, component_id(StreamTag::prelimit)});
  std::vector<double> means(arms);
  for (std::size_t k = 0; k < arms; ++k) means[k] = prelimit_mean(inst, n, k);

  RawTrajectory raw;
  raw.n = n;
  raw.arms = arms;
  raw.actions.resize(static_cast<std::size_t>(n));
  raw.rewards.resize(static_cast<std::size_t>(n));
  raw.running_pulls.assign(static_cast<std::size_t>(n + 1) * arms, 0.0);
  raw.running_sums.assign(static_cast<std::size_t>(n + 1) * arms, 0.0);

  std::vector<double> pi(arms);
  for (long long i = 1; i <= n; ++i) {
    const std::size_t prev = static_cast<std::size_t>(i - 1) * arms;
    const std::span<const double> pulls(raw.running_pulls.data() + prev, arms);
    const std::span<const double> sums(raw.running_sums.data() + prev, arms);

    const double u = rng.uniform();
    std::size_t action = arms;  // outside option unless an arm is chosen
    if (two_arm && i <= 2) {
      action = static_cast<std::size_t>(i - 1);
    } else {
      rule.finite(n, pulls, sums, pi);
      double cum = 0.0;
      for (std::size_t k = 0; k < arms; ++k) {
        cum += pi[k];
        if (u < cum) {
          action = k;
          break;
        }
      }
      // Rounding can leave sum(pi) a hair below 1 with no outside option.
      if (action == arms && arms > 1) action = arms - 1;
    }

    const double y = detail::draw_reward(inst.family, action < arms ? means[action] : 0.0,
                                         action < arms ? inst.sigma[action] : 1.0, rng);
    const std::size_t cur = static_cast<std::size_t>(i) * arms;
    for (std::size_t k = 0; k < arms; ++k) {
      raw.running_pulls[cur + k] = raw.running_pulls[prev + k];
      raw.running_sums[cur + k] = raw.running_sums[prev + k];
    }
    raw.actions[static_cast<std::size_t>(i - 1)] = static_cast<int>(action);
    if (action < arms) {
      raw.rewards[static_cast<std::size_t>(i - 1)] = y;
      raw.running_pulls[cur + action] += 1.0;
      raw.running_sums[cur + action] += y;
    } else {
      raw.rewards[static_cast<std::size_t>(i - 1)] = 0.0;
    }
  }
  return raw;
}

/// Path form: q = Q / n and s = S / sqrt(n), linearly interpolated between
/// periods at each requested time in [0, 1].
inline Path scale_trajectory(const RawTrajectory& raw, std::span<const double> times) {
  const double n = static_cast<double>(raw.n);
  const double root_n = std::sqrt(n);
  Path path;
  path.grid.assign(times.begin(), times.end());
  path.states.reserve(times.size());
  for (double t : times) {
    detail::require(t >= 0.0 && t <= 1.0, "scale_trajectory: times must lie in [0, 1]");
    double x = t * n;
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, n)) x = nearest;
    auto i = static_cast<long long>(std::floor(x));
    double w = x - static_cast<double>(i);
    if (i >= raw.n) {
      i = raw.n;
      w = 0.0;
    }
    ScaledState st{t, std::vector<double>(raw.arms), std::vector<double>(raw.arms)};
    for (std::size_t k = 0; k < raw.arms; ++k) {
      const double q_lo = raw.pulls(i, k);
      const double s_lo = raw.sums(i, k);
      const double q_hi = w > 0.0 ? raw.pulls(i + 1, k) : q_lo;
      const double s_hi = w > 0.0 ? raw.sums(i + 1, k) : s_lo;
      st.q[k] = ((1.0 - w) * q_lo + w * q_hi) / n;
      st.s[k] = ((1.0 - w) * s_lo + w * s_hi) / root_n;
    }
    path.states.push_back(std::move(st));
  }
  return path;
}

/// Realized regret in limit units: max_k mu_k - sum_k mu_k Q_{k,n} / n,
/// i.e. R^n / sqrt(n) with R^n = n max mu^n - sum_i mu^n_{A_i}.
inline double raw_regret(const RawTrajectory& raw, const BanditInstance& inst) {
  detail::require(raw.arms == inst.arms(), "raw_regret: arm count mismatch");
  double earned = 0.0;
  for (std::size_t k = 0; k < raw.arms; ++k) earned += inst.mu[k] * raw.pulls(raw.n, k);
  return inst.best_mean() - earned / static_cast<double>(raw.n);
}

}  // namespace difflim

#endif  // DIFFLIM_PRELIMIT_HPP
