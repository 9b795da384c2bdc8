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

// Monte Carlo orchestration. Replication r always draws from streams keyed
// by (master_seed, r, component), results are stored by replication index,
// and aggregation is a fixed pairwise tree over that index. Output is
// therefore bit-identical for any worker count.

#ifndef DIFFLIM_HARNESS_HPP
#define DIFFLIM_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "difflim/diffusion.hpp"
#include "difflim/error.hpp"
#include "difflim/grid.hpp"
#include "difflim/model.hpp"
#include "difflim/stats.hpp"

namespace difflim {

inline constexpr const char* kWorkersEnv = "DIFFLIM_WORKERS";

/// Worker count from DIFFLIM_WORKERS, else the hardware concurrency.
inline std::size_t default_workers() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates fn(i) for i in [0, count) on `workers` threads; out[i] = fn(i).
/// The first exception thrown by any task is rethrown after all workers join.
template <class Fn>
auto parallel_map(std::size_t count, std::size_t workers, Fn&& fn) {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out(count);
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  constexpr std::size_t kChunk = 16;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      const std::size_t end = std::min(count, begin + kChunk);
      try {
        for (std::size_t i = begin; i < end; ++i) out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

enum class Integrator { time_change, euler_maruyama };

struct ReplicationJob {
  BanditInstance instance;
  PolicySpec policy;
  TimeGrid grid;
  std::size_t reps = 1;
  std::uint64_t master_seed = 0;
  Integrator integrator = Integrator::time_change;
  bool keep_samples = false;
};

/// Outcome of one replication: final regret and q_1(1), or a failure.
struct PathOutcome {
  double regret = 0.0;
  double q1 = 0.0;
  std::optional<std::string> failure;
};

struct ReplicationResult {
  Aggregate regret;
  Aggregate q1;
  std::size_t failures = 0;
  std::vector<std::string> failure_messages;  // first few only
};

/// Largest tolerated share of failed paths.
inline constexpr double kMaxFailureFraction = 1e-3;

inline PathOutcome run_one(const ReplicationJob& job, const SamplingRule& rule, std::span<const double> grid,
                           std::uint64_t replication) {
  IntegrationOptions opt;
  opt.record_states = false;
  try {
    Path path;
    if (job.integrator == Integrator::time_change) {
      ArmClockNoise noise(job.master_seed, replication, job.instance.arms());
      path = integrate_time_change(rule, job.instance, grid, noise, opt);
    } else {
      path = integrate_sde_em(rule, job.instance, grid, job.master_seed, replication, opt);
    }
    const auto& last = path.final_state();
    return PathOutcome{scaled_regret(last.q, job.instance.mu), last.q[0], std::nullopt};
  } catch (const IntegrationError& e) {
    return PathOutcome{0.0, 0.0, std::string(e.what())};
  }
}

/// Collects per-replication outcomes into aggregates; throws
/// IntegrationError if more than 0.1% of paths failed.
inline ReplicationResult summarize_outcomes(const std::vector<PathOutcome>& outcomes, bool keep_samples) {
  ReplicationResult result;
  std::vector<double> regret, q1;
  regret.reserve(outcomes.size());
  q1.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    if (o.failure) {
      ++result.failures;
      if (result.failure_messages.size() < 5) result.failure_messages.push_back(*o.failure);
      continue;
    }
    regret.push_back(o.regret);
    q1.push_back(o.q1);
  }
  if (static_cast<double>(result.failures) > kMaxFailureFraction * static_cast<double>(outcomes.size())) {
    std::string msg = std::to_string(result.failures) + " of " + std::to_string(outcomes.size()) +
                      " paths failed";
    if (!result.failure_messages.empty()) msg += "; first: " + result.failure_messages.front();
    throw IntegrationError(msg);
  }
  result.regret = aggregate_pairwise(regret, keep_samples);
  result.q1 = aggregate_pairwise(q1, keep_samples);
  return result;
}

/// Aggregate final regret and q_1(1) over replications 0..reps-1.
inline ReplicationResult run_replications(const ReplicationJob& job, std::size_t workers = default_workers()) {
  detail::require(job.reps >= 1, "run_replications: reps must be >= 1");
  detail::require(workers >= 1, "run_replications: workers must be >= 1");
  const SamplingRule rule(job.policy, job.instance);
  const auto grid = job.grid.points();
  const auto outcomes = parallel_map(job.reps, workers, [&](std::size_t r) {
    return run_one(job, rule, grid, static_cast<std::uint64_t>(r));
  });
  return summarize_outcomes(outcomes, job.keep_samples);
}

}  // namespace difflim

#endif  // DIFFLIM_HARNESS_HPP
