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

// Integrators for the diffusion limit of a sequentially randomized
// experiment with sampling function psi:
//
//   dQ_k = psi_k(Q, S) dt,   dS_k = psi_k mu_k dt + sigma_k sqrt(psi_k) dB_k.
//
// integrate_time_change() uses the equivalent random-time-change form
// S_k = mu_k Q_k + sigma_k W_k(Q_k), where each arm's Brownian motion W_k is
// run on the clock of its own cumulative pulls; only dQ is stepped (forward
// Euler) and S is exact given Q. integrate_sde_em() is plain Euler-Maruyama
// on the SDE and serves as an independent cross-check.

#ifndef DIFFLIM_DIFFUSION_HPP
#define DIFFLIM_DIFFUSION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "difflim/error.hpp"
#include "difflim/grid.hpp"
#include "difflim/model.hpp"
#include "difflim/policies.hpp"
#include "difflim/random.hpp"

namespace difflim {

/// Per-arm Brownian motions sampled forward along nondecreasing clocks.
class ArmClockNoise {
 public:
  ArmClockNoise(std::uint64_t master_seed, std::uint64_t replication, std::size_t arms,
                bool mirrored = false) {
    arms_.reserve(arms);
    for (std::size_t k = 0; k < arms; ++k) {
      const std::size_t source = mirrored ? arms - 1 - k : k;
      arms_.push_back(Arm{0.0, 0.0,
                          RandomStream(StreamKey{master_seed, replication,
                                                 component_id(StreamTag::clock_noise, source)})});
    }
  }

  /// Same streams with the arm order reversed.
  static ArmClockNoise mirrored(std::uint64_t master_seed, std::uint64_t replication, std::size_t arms) {
    return ArmClockNoise(master_seed, replication, arms, true);
  }

  std::size_t arms() const noexcept { return arms_.size(); }
  double clock(std::size_t arm) const { return arms_.at(arm).clock; }

  /// W_arm(clock). Clocks may only move forward; a repeated clock value
  /// returns the previous value unchanged.
  double at(std::size_t arm, double clock) {
    Arm& a = arms_[arm];
    if (clock == a.clock) return a.value;
    if (!(clock > a.clock)) {
      std::ostringstream msg;
      msg << "ArmClockNoise: clock for arm " << arm << " moved backwards (" << a.clock << " -> " << clock << ")";
      throw IntegrationError(msg.str());
    }
    a.value += std::sqrt(clock - a.clock) * a.stream.normal();
    a.clock = clock;
    return a.value;
  }

 private:
  struct Arm {
    double clock;
    double value;
    RandomStream stream;
  };
  std::vector<Arm> arms_;
};

/// Called at every grid point with (t, q, s, pi).
using PathObserver = std::function<void(double, std::span<const double>, std::span<const double>,
                                        std::span<const double>)>;

struct IntegrationOptions {
  // Full paths keep every grid point; otherwise only the first and last.
  bool record_states = true;
  bool record_pi = false;
  PathObserver observer;
};

namespace detail {

// Warm start at t0: an even split across arms, or no pulls at all for a
// one-armed experiment (where the rule at q = 0 is the no-data rule).
inline void warm_start(const BanditInstance& inst, double t0, std::span<double> q) {
  const double share = inst.has_outside_option() ? 0.0 : t0 / static_cast<double>(inst.arms());
  std::fill(q.begin(), q.end(), share);
}

inline void check_drift(double t, std::span<const double> q, std::span<const double> s,
                        std::span<const double> pi) {
  for (double p : pi) {
    if (!(p >= 0.0 && p <= 1.0)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "non-finite or out-of-range drift at t=" << t << ": q=(";
      for (double v : q) msg << v << ' ';
      msg << ") s=(";
      for (double v : s) msg << v << ' ';
      msg << ") pi=(";
      for (double v : pi) msg << v << ' ';
      msg << ')';
      throw IntegrationError(msg.str());
    }
  }
}

class PathRecorder {
 public:
  PathRecorder(const IntegrationOptions& opt, std::size_t points) : opt_(opt) {
    if (opt_.record_states || opt_.record_pi) {
      const std::size_t n = opt_.record_states ? points : 2;
      path_.grid.reserve(n);
      path_.states.reserve(n);
      if (opt_.record_pi) path_.pi_trace.reserve(n);
    }
  }

  void record(bool last, double t, std::span<const double> q, std::span<const double> s,
              std::span<const double> pi) {
    if (opt_.observer) opt_.observer(t, q, s, pi);
    if (opt_.record_states || first_ || last) {
      path_.grid.push_back(t);
      path_.states.push_back(ScaledState{t, {q.begin(), q.end()}, {s.begin(), s.end()}});
      if (opt_.record_pi) path_.pi_trace.emplace_back(pi.begin(), pi.end());
    }
    first_ = false;
  }

  Path take() { return std::move(path_); }

 private:
  const IntegrationOptions& opt_;
  Path path_;
  bool first_ = true;
};

}  // namespace detail

/// Forward Euler on dQ_k = psi_k(mu Q + sigma W(Q), Q) dt over `grid`.
inline Path integrate_time_change(const SamplingRule& rule, const BanditInstance& inst,
                                  std::span<const double> grid, ArmClockNoise& noise,
                                  const IntegrationOptions& opt = {}) {
  detail::require(rule.spec().form == PolicyForm::limit, "integrate_time_change: policy must be in limit form");
  detail::require(grid.size() >= 2, "integrate_time_change: grid needs at least two points");
  detail::require(noise.arms() == inst.arms(), "integrate_time_change: noise/instance arm mismatch");
  const std::size_t arms = inst.arms();
  std::vector<double> buf(3 * arms);
  std::span<double> q(buf.data(), arms), s(buf.data() + arms, arms), pi(buf.data() + 2 * arms, arms);

  detail::PathRecorder recorder(opt, grid.size());
  detail::warm_start(inst, grid[0], q);
  for (std::size_t k = 0; k < arms; ++k) s[k] = inst.mu[k] * q[k] + inst.sigma[k] * noise.at(k, q[k]);
  rule.limit(grid[0], q, s, pi);
  detail::check_drift(grid[0], q, s, pi);
  recorder.record(false, grid[0], q, s, pi);

  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double dt = grid[j] - grid[j - 1];
    for (std::size_t k = 0; k < arms; ++k) {
      q[k] += pi[k] * dt;
      s[k] = inst.mu[k] * q[k] + inst.sigma[k] * noise.at(k, q[k]);
    }
    rule.limit(grid[j], q, s, pi);
    detail::check_drift(grid[j], q, s, pi);
    recorder.record(j + 1 == grid.size(), grid[j], q, s, pi);
  }
  return recorder.take();
}

inline Path integrate_time_change(const PolicySpec& policy, const BanditInstance& inst, const TimeGrid& grid,
                                  ArmClockNoise& noise, const IntegrationOptions& opt = {}) {
  const auto pts = grid.points();
  return integrate_time_change(SamplingRule(policy, inst), inst, pts, noise, opt);
}

/// Euler-Maruyama: dS_k = pi_k mu_k dt + sigma_k sqrt(pi_k dt) xi_k with
/// independent standard normals per arm and step. The warm-start S is drawn
/// from its exact law N(mu q, sigma^2 q).
inline Path integrate_sde_em(const SamplingRule& rule, const BanditInstance& inst, std::span<const double> grid,
                             std::uint64_t master_seed, std::uint64_t replication,
                             const IntegrationOptions& opt = {}) {
  detail::require(rule.spec().form == PolicyForm::limit, "integrate_sde_em: policy must be in limit form");
  detail::require(grid.size() >= 2, "integrate_sde_em: grid needs at least two points");
  const std::size_t arms = inst.arms();
  std::vector<RandomStream> streams;
  streams.reserve(arms);
  for (std::size_t k = 0; k < arms; ++k) {
    streams.emplace_back(StreamKey{master_seed, replication, component_id(StreamTag::euler_maruyama, k)});
  }
  std::vector<double> buf(3 * arms);
  std::span<double> q(buf.data(), arms), s(buf.data() + arms, arms), pi(buf.data() + 2 * arms, arms);

  detail::PathRecorder recorder(opt, grid.size());
  detail::warm_start(inst, grid[0], q);
  for (std::size_t k = 0; k < arms; ++k) {
    s[k] = inst.mu[k] * q[k] + inst.sigma[k] * std::sqrt(q[k]) * streams[k].normal();
  }
  rule.limit(grid[0], q, s, pi);
  detail::check_drift(grid[0], q, s, pi);
  recorder.record(false, grid[0], q, s, pi);

  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double dt = grid[j] - grid[j - 1];
    for (std::size_t k = 0; k < arms; ++k) {
      const double xi = streams[k].normal();
      s[k] += pi[k] * inst.mu[k] * dt + inst.sigma[k] * std::sqrt(pi[k] * dt) * xi;
      q[k] += pi[k] * dt;
    }
    rule.limit(grid[j], q, s, pi);
    detail::check_drift(grid[j], q, s, pi);
    recorder.record(j + 1 == grid.size(), grid[j], q, s, pi);
  }
  return recorder.take();
}

inline Path integrate_sde_em(const PolicySpec& policy, const BanditInstance& inst, const TimeGrid& grid,
                             std::uint64_t master_seed, std::uint64_t replication,
                             const IntegrationOptions& opt = {}) {
  const auto pts = grid.points();
  return integrate_sde_em(SamplingRule(policy, inst), inst, pts, master_seed, replication, opt);
}

/// R = max_k mu_k - <q, mu>, with the outside option (mean 0) included in
/// the max for a one-armed experiment.
inline double scaled_regret(std::span<const double> q_final, std::span<const double> mu) {
  detail::require(q_final.size() == mu.size() && !mu.empty(), "scaled_regret: size mismatch");
  double best = *std::max_element(mu.begin(), mu.end());
  if (mu.size() == 1) best = std::max(best, 0.0);
  double earned = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) earned += q_final[k] * mu[k];
  return best - earned;
}

inline double scaled_regret(const Path& path, std::span<const double> mu) {
  detail::require(!path.states.empty() && path.states.back().t == 1.0, "scaled_regret: path must reach t = 1");
  return scaled_regret(path.states.back().q, mu);
}

/// (t, pi_t) for the first arm along a path recorded with record_pi.
inline std::vector<std::pair<double, double>> pi_path(const Path& path) {
  if (path.pi_trace.empty()) throw ConfigError("pi_path: path was recorded without a pi trace");
  std::vector<std::pair<double, double>> out;
  out.reserve(path.pi_trace.size());
  for (std::size_t j = 0; j < path.pi_trace.size(); ++j) out.emplace_back(path.grid[j], path.pi_trace[j][0]);
  return out;
}

/// Linear interpolation of a recorded path at time t (clamped to its range).
inline ScaledState interpolate(const Path& path, double t) {
  detail::require(!path.states.empty(), "interpolate: empty path");
  if (t <= path.grid.front()) return path.states.front();
  if (t >= path.grid.back()) return path.states.back();
  const auto it = std::upper_bound(path.grid.begin(), path.grid.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - path.grid.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - path.grid[lo]) / (path.grid[hi] - path.grid[lo]);
  ScaledState out{t, path.states[lo].q, path.states[lo].s};
  for (std::size_t k = 0; k < out.q.size(); ++k) {
    out.q[k] += w * (path.states[hi].q[k] - path.states[lo].q[k]);
    out.s[k] += w * (path.states[hi].s[k] - path.states[lo].s[k]);
  }
  return out;
}

}  // namespace difflim

#endif  // DIFFLIM_DIFFUSION_HPP
