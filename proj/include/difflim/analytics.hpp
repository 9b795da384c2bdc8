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

// Derived quantities for one- and two-armed Thompson sampling: regret
// profiles, regret distributions, large-gap scaling trends, early-time
// instability frequencies, finite-sample bound formulas, and matched
// pre-limit versus diffusion comparisons.
//
// Profiles use common random numbers: every cell with the same base seed
// drives replication r with the same Brownian streams, so columns of a
// profile table are positively correlated.

#ifndef DIFFLIM_ANALYTICS_HPP
#define DIFFLIM_ANALYTICS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "difflim/diffusion.hpp"
#include "difflim/error.hpp"
#include "difflim/grid.hpp"
#include "difflim/harness.hpp"
#include "difflim/model.hpp"
#include "difflim/prelimit.hpp"
#include "difflim/stats.hpp"

namespace difflim {

enum class Family { ts1, ts2 };

inline std::string_view to_string(Family f) { return f == Family::ts1 ? "ts1" : "ts2"; }

inline Family parse_family(std::string_view name) {
  if (name == "ts1") return Family::ts1;
  if (name == "ts2") return Family::ts2;
  throw ConfigError("unknown family '" + std::string(name) + "' (expected ts1 or ts2)");
}

/// Default two-arm tempering: d = 1e-8 for the undersmoothed rule, none otherwise.
inline double default_tempering(Family family, double c) {
  return family == Family::ts2 && c == 0.0 ? 1e-8 : 0.0;
}

/// sigma = 1 instances: one arm with mean `gap` against a zero outside
/// option, or two arms with means (gap, 0).
inline BanditInstance family_instance(Family family, double gap) {
  if (family == Family::ts1) return BanditInstance{{gap}, {1.0}, RewardFamily::gaussian};
  return BanditInstance{{gap, 0.0}, {1.0, 1.0}, RewardFamily::gaussian};
}

inline PolicySpec family_policy(Family family, double c, std::optional<double> d = std::nullopt) {
  PolicySpec p;
  p.kind = family == Family::ts1 ? PolicyKind::ts_one_arm : PolicyKind::ts_two_arm;
  p.form = PolicyForm::limit;
  p.c = c;
  p.d = family == Family::ts2 ? d.value_or(default_tempering(family, c)) : 0.0;
  return p;
}

/// Shared Monte Carlo settings.
struct MonteCarlo {
  std::size_t reps = 10000;
  std::uint64_t seed = 0;
  TimeGrid grid{};
  std::size_t workers = default_workers();
};

// ---------------------------------------------------------------------------
// Regret profiles

struct ProfileRow {
  Family family = Family::ts1;
  double gap = 0.0;
  double c = 0.0;
  double mean_regret = 0.0;
  double stderr_regret = 0.0;
  double mean_q1 = 0.0;
  std::size_t reps = 0;
};

/// Monte Carlo E[R] and E[q_1(1)] on every (gap, c) cell, gaps outermost.
inline std::vector<ProfileRow> regret_profile(Family family, std::span<const double> gaps, std::span<const double> cs,
                                              const MonteCarlo& mc, std::optional<double> d = std::nullopt) {
  detail::require(mc.reps >= 2, "regret_profile: reps must be >= 2");
  std::vector<ProfileRow> rows;
  rows.reserve(gaps.size() * cs.size());
  for (double gap : gaps) {
    for (double c : cs) {
      ReplicationJob job{family_instance(family, gap), family_policy(family, c, d), mc.grid, mc.reps, mc.seed};
      ReplicationResult res;
      try {
        res = run_replications(job, mc.workers);
      } catch (const IntegrationError& e) {
        throw IntegrationError("profile cell gap=" + std::to_string(gap) + " c=" + std::to_string(c) + ": " +
                               e.what());
      }
      rows.push_back(ProfileRow{family, gap, c, res.regret.mean(), res.regret.stderr_mean(), res.q1.mean(),
                                res.regret.count()});
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Regret distribution

/// Final-regret samples of two-armed Thompson sampling at gap delta.
inline std::vector<double> two_arm_regret_samples(double delta, double c, const MonteCarlo& mc,
                                                  std::optional<double> d = std::nullopt) {
  ReplicationJob job{family_instance(Family::ts2, delta), family_policy(Family::ts2, c, d), mc.grid, mc.reps,
                     mc.seed};
  job.keep_samples = true;
  return run_replications(job, mc.workers).regret.samples();
}

/// Histogram of two-armed regret on [0, delta]. R = delta q_2(1), so every
/// sample lies in that range; delta = 0 gives a single degenerate bin of zeros.
inline Histogram regret_histogram(double delta, double c, std::size_t bins, const MonteCarlo& mc,
                                  std::optional<double> d = std::nullopt) {
  detail::require(delta >= 0.0, "regret_histogram: delta must be >= 0");
  const auto samples = two_arm_regret_samples(delta, c, mc, d);
  return make_histogram(samples, 0.0, delta, bins);
}

// ---------------------------------------------------------------------------
// Large-gap trends

struct ScalingRow {
  double gap = 0.0;
  double mean_regret = 0.0;
  double stderr_regret = 0.0;
  double product = 0.0;  // mean_regret * |gap|^beta
};

struct ScalingReport {
  Family family = Family::ts1;
  double c = 0.0;
  double beta = 0.5;
  std::vector<ScalingRow> rows;
  bool product_decreasing = false;    // consistent with R decaying faster than 1/|gap|^beta
  bool regret_increasing = false;     // mean regret strictly increasing along the grid

  std::string verdict() const {
    return product_decreasing ? "consistent (R * |gap|^beta strictly decreasing)"
                              : "not consistent (R * |gap|^beta not strictly decreasing)";
  }
};

/// Mean regret along a grid of gaps ordered by increasing |gap|, with the
/// products R * |gap|^beta. Finite-gap Monte Carlo can only show a trend.
inline ScalingReport superdiffusive_check(Family family, double c, std::span<const double> gaps, double beta,
                                          const MonteCarlo& mc, std::optional<double> d = std::nullopt) {
  detail::require(beta > 0.0 && beta < 1.0, "superdiffusive_check: beta must lie in (0, 1)");
  detail::require(gaps.size() >= 2, "superdiffusive_check: need at least two gaps");
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    detail::require(std::abs(gaps[i]) > std::abs(gaps[i - 1]), "superdiffusive_check: |gap| must increase");
  }
  ScalingReport report{family, c, beta, {}, true, true};
  const auto profile = regret_profile(family, gaps, std::span<const double>(&c, 1), mc, d);
  for (const auto& row : profile) {
    report.rows.push_back(
        ScalingRow{row.gap, row.mean_regret, row.stderr_regret, row.mean_regret * std::pow(std::abs(row.gap), beta)});
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    report.product_decreasing = report.product_decreasing && report.rows[i].product < report.rows[i - 1].product;
    report.regret_increasing =
        report.regret_increasing && report.rows[i].mean_regret > report.rows[i - 1].mean_regret;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Early-time instability of undersmoothed one-armed Thompson sampling

struct InstabilityResult {
  double p_high = 0.0;  // sup pi >= 1 - eta on [t0, eps)
  double p_low = 0.0;   // inf pi <= eta on [t0, eps)
  double p_both = 0.0;
  std::size_t reps = 0;
};

inline InstabilityResult instability_frequencies(double mu, double eps, double eta, const MonteCarlo& mc) {
  detail::require(eps > 0.0 && eps < 1.0, "instability: eps must lie in (0, 1)");
  detail::require(eta > 0.0 && eta < 0.5, "instability: eta must lie in (0, 0.5)");
  detail::require(mc.grid.t0 < eps, "instability: grid must start below eps");
  const BanditInstance inst = family_instance(Family::ts1, mu);
  const SamplingRule rule(family_policy(Family::ts1, 0.0), inst);
  const auto grid = mc.grid.points();

  struct Extremes {
    bool high = false;
    bool low = false;
  };
  const auto hits = parallel_map(mc.reps, mc.workers, [&](std::size_t r) {
    Extremes e;
    IntegrationOptions opt;
    opt.record_states = false;
    opt.observer = [&](double t, std::span<const double>, std::span<const double>, std::span<const double> pi) {
      if (t >= eps) return;
      e.high = e.high || pi[0] >= 1.0 - eta;
      e.low = e.low || pi[0] <= eta;
    };
    ArmClockNoise noise(mc.seed, r, 1);
    integrate_time_change(rule, inst, grid, noise, opt);
    return e;
  });
  InstabilityResult out;
  out.reps = mc.reps;
  std::size_t high = 0, low = 0, both = 0;
  for (const auto& e : hits) {
    high += e.high;
    low += e.low;
    both += e.high && e.low;
  }
  const double n = static_cast<double>(mc.reps);
  out.p_high = static_cast<double>(high) / n;
  out.p_low = static_cast<double>(low) / n;
  out.p_both = static_cast<double>(both) / n;
  return out;
}

// ---------------------------------------------------------------------------
// Finite-sample regret bounds for two-armed bandits, original and under
// diffusion scaling (Delta_n = delta / sqrt(n), divided by sqrt(n)).

enum class BoundAlgorithm { ucb, thompson_ag17, moss, improved_ucb, oracle_etc };

inline constexpr BoundAlgorithm kAllBounds[] = {BoundAlgorithm::ucb, BoundAlgorithm::thompson_ag17,
                                                BoundAlgorithm::moss, BoundAlgorithm::improved_ucb,
                                                BoundAlgorithm::oracle_etc};

inline std::string_view to_string(BoundAlgorithm a) {
  switch (a) {
    case BoundAlgorithm::ucb: return "ucb";
    case BoundAlgorithm::thompson_ag17: return "thompson-ag17";
    case BoundAlgorithm::moss: return "moss";
    case BoundAlgorithm::improved_ucb: return "improved-ucb";
    case BoundAlgorithm::oracle_etc: return "oracle-etc";
  }
  return "?";
}

inline BoundAlgorithm parse_bound_algorithm(std::string_view name) {
  for (auto a : kAllBounds) {
    if (to_string(a) == name) return a;
  }
  throw ConfigError("unknown bound algorithm '" + std::string(name) + "'");
}

/// Bound on scaled regret at scaled gap delta; +inf where the bound diverges.
inline double bound_scaled(BoundAlgorithm algo, double delta) {
  detail::require(delta > 0.0, "bound_scaled: delta must be > 0");
  switch (algo) {
    case BoundAlgorithm::ucb:
    case BoundAlgorithm::thompson_ag17:
      return std::numeric_limits<double>::infinity();
    case BoundAlgorithm::moss:
      return 39.0 * std::sqrt(2.0);
    case BoundAlgorithm::improved_ucb:
      return std::min(64.0 * std::log(delta) / delta + 96.0 / delta, delta);
    case BoundAlgorithm::oracle_etc:
      return std::min(4.0 / delta * (1.0 + std::max(0.0, std::log(delta * delta / 4.0))), delta);
  }
  return 0.0;
}

/// Bound on raw regret at gap `gap` and horizon n. Thompson sampling uses
/// the Gaussian divergence D = gap^2 / (2 sigma^2).
inline double bound_raw(BoundAlgorithm algo, double gap, double n, double sigma = 1.0) {
  detail::require(gap > 0.0, "bound_raw: gap must be > 0");
  detail::require(n >= 1.0, "bound_raw: n must be >= 1");
  switch (algo) {
    case BoundAlgorithm::ucb:
      return 3.0 * gap + 16.0 * std::log(n) / gap;
    case BoundAlgorithm::thompson_ag17: {
      const double divergence = gap * gap / (2.0 * sigma * sigma);
      return std::log(n) * gap / divergence;
    }
    case BoundAlgorithm::moss:
      return 39.0 * std::sqrt(2.0 * n) + gap;
    case BoundAlgorithm::improved_ucb:
      return std::min(gap + 32.0 * std::log(gap * gap * n) / gap + 96.0 / gap, n * gap);
    case BoundAlgorithm::oracle_etc:
      return std::min(4.0 / gap * (1.0 + std::max(0.0, std::log(n * gap * gap / 4.0))), n * gap);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// State slices at fixed times, for bands and pre-limit comparisons

/// slices[r][j] is replication r's scaled state at times[j].
using StateSlices = std::vector<std::vector<ScaledState>>;

inline StateSlices sample_prelimit(const BanditInstance& inst, const PolicySpec& finite_policy, long long n,
                                   std::span<const double> times, std::size_t reps, std::uint64_t seed,
                                   std::size_t workers) {
  return parallel_map(reps, workers, [&](std::size_t r) {
    const auto raw = simulate_srme(inst, finite_policy, n, seed, r);
    return scale_trajectory(raw, times).states;
  });
}

/// Diffusion states at `times`, linearly interpolated between grid points;
/// times before the warm start map to the warm-start state.
inline StateSlices sample_diffusion(const BanditInstance& inst, const PolicySpec& policy, std::span<const double> times,
                                    const MonteCarlo& mc, Integrator integrator = Integrator::time_change) {
  const SamplingRule rule(policy, inst);
  const auto grid = mc.grid.points();
  return parallel_map(mc.reps, mc.workers, [&](std::size_t r) {
    std::vector<ScaledState> out(times.size());
    std::size_t next = 0;
    ScaledState prev;
    IntegrationOptions opt;
    opt.record_states = false;
    opt.observer = [&](double t, std::span<const double> q, std::span<const double> s, std::span<const double>) {
      while (next < times.size() && times[next] <= t) {
        ScaledState st{times[next], {q.begin(), q.end()}, {s.begin(), s.end()}};
        if (!prev.q.empty() && times[next] > prev.t) {
          const double w = (times[next] - prev.t) / (t - prev.t);
          for (std::size_t k = 0; k < st.q.size(); ++k) {
            st.q[k] = prev.q[k] + w * (q[k] - prev.q[k]);
            st.s[k] = prev.s[k] + w * (s[k] - prev.s[k]);
          }
        }
        out[next++] = std::move(st);
      }
      prev.t = t;
      prev.q.assign(q.begin(), q.end());
      prev.s.assign(s.begin(), s.end());
    };
    if (integrator == Integrator::time_change) {
      ArmClockNoise noise(mc.seed, r, inst.arms());
      integrate_time_change(rule, inst, grid, noise, opt);
    } else {
      integrate_sde_em(rule, inst, grid, mc.seed, r, opt);
    }
    return out;
  });
}

struct BandRow {
  double t = 0.0;
  std::size_t arm = 0;
  double mean_q = 0.0;
  double sd_q = 0.0;
  double mean_s = 0.0;
  double sd_s = 0.0;
  std::size_t reps = 0;
};

/// Per-time, per-arm mean and standard deviation across replications.
inline std::vector<BandRow> path_bands(const StateSlices& slices) {
  std::vector<BandRow> rows;
  if (slices.empty()) return rows;
  const std::size_t times = slices.front().size();
  const std::size_t arms = times ? slices.front().front().q.size() : 0;
  std::vector<double> qv(slices.size()), sv(slices.size());
  for (std::size_t j = 0; j < times; ++j) {
    for (std::size_t k = 0; k < arms; ++k) {
      for (std::size_t r = 0; r < slices.size(); ++r) {
        qv[r] = slices[r][j].q[k];
        sv[r] = slices[r][j].s[k];
      }
      const auto qa = aggregate_pairwise(qv);
      const auto sa = aggregate_pairwise(sv);
      rows.push_back(BandRow{slices.front()[j].t, k, qa.mean(), qa.stddev(), sa.mean(), sa.stddev(), slices.size()});
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Pre-limit versus diffusion

struct ConvergenceRow {
  long long n = 0;
  double t = 0.0;
  double mean_prelimit = 0.0;   // E[S^n_{1,t}]
  double mean_diffusion = 0.0;  // E[S_{1,t}]
  double mean_diff = 0.0;
  double combined_stderr = 0.0;
  double ks_q_final = 0.0;      // KS distance of q_1(1) laws at this n
};

/// For each horizon n, compares mean scaled reward of arm 1 at `times` and
/// the law of q_1(1) between `prelimit_reps` simulated experiments and
/// `mc.reps` diffusion paths. The finite-horizon rule is the limit policy
/// with nu and zeta derived from (c, d) at each n.
inline std::vector<ConvergenceRow> convergence_study(const BanditInstance& inst, const PolicySpec& limit_policy,
                                                     std::span<const long long> ns, std::span<const double> times,
                                                     std::size_t prelimit_reps, const MonteCarlo& mc) {
  detail::require(limit_policy.form == PolicyForm::limit, "convergence_study: policy must be in limit form");
  detail::require(!times.empty() && times.back() == 1.0, "convergence_study: times must end at 1");
  const auto diffusion = sample_diffusion(inst, limit_policy, times, mc);
  PolicySpec finite = limit_policy;
  finite.form = PolicyForm::finite;

  auto column = [](const StateSlices& slices, std::size_t j) {
    std::vector<double> v(slices.size());
    for (std::size_t r = 0; r < slices.size(); ++r) v[r] = slices[r][j].s[0];
    return v;
  };
  auto final_q = [](const StateSlices& slices) {
    std::vector<double> v(slices.size());
    for (std::size_t r = 0; r < slices.size(); ++r) v[r] = slices[r].back().q[0];
    return v;
  };

  std::vector<ConvergenceRow> rows;
  const auto diff_q = final_q(diffusion);
  for (long long n : ns) {
    const auto pre = sample_prelimit(inst, finite, n, times, prelimit_reps, mc.seed, mc.workers);
    const double ks = ks_distance(final_q(pre), diff_q);
    for (std::size_t j = 0; j < times.size(); ++j) {
      const auto a = aggregate_pairwise(column(pre, j));
      const auto b = aggregate_pairwise(column(diffusion, j));
      const double se = std::sqrt(a.stderr_mean() * a.stderr_mean() + b.stderr_mean() * b.stderr_mean());
      rows.push_back(ConvergenceRow{n, times[j], a.mean(), b.mean(), a.mean() - b.mean(), se, ks});
    }
  }
  return rows;
}

}  // namespace difflim

#endif  // DIFFLIM_ANALYTICS_HPP
