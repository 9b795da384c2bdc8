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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "difflim/diffusion.hpp"
#include "difflim/stats.hpp"

namespace difflim {
namespace {

const TimeGrid kCoarse{1e-6, 1e-3, 16, 1.0 / 1024};

PolicySpec constant_policy(std::vector<double> w) {
  PolicySpec p;
  p.kind = PolicyKind::constant;
  p.weights = std::move(w);
  return p;
}

PolicySpec ts(PolicyKind kind, double c, double d = 0.0) {
  PolicySpec p;
  p.kind = kind;
  p.c = c;
  p.d = d;
  return p;
}

TEST(ArmClockNoise, RepeatedClockAndForwardOnly) {
  ArmClockNoise noise(1, 2, 2);
  const double a = noise.at(0, 0.1);
  EXPECT_EQ(noise.at(0, 0.1), a);
  EXPECT_NE(noise.at(0, 0.3), a);
  EXPECT_THROW(noise.at(0, 0.2), IntegrationError);
  EXPECT_EQ(noise.clock(1), 0.0);
}

TEST(ArmClockNoise, IncrementsHaveBrownianLaw) {
  // W(0.1) and W(0.3) - W(0.1) over 1e5 replications.
  constexpr int kReps = 100000;
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int r = 0; r < kReps; ++r) {
    ArmClockNoise noise(7, r, 1);
    const double w1 = noise.at(0, 0.1);
    const double inc = noise.at(0, 0.3) - w1;
    sa += w1;
    sb += inc;
    saa += w1 * w1;
    sbb += inc * inc;
    sab += w1 * inc;
  }
  const double n = kReps;
  const double va = saa / n - (sa / n) * (sa / n), vb = sbb / n - (sb / n) * (sb / n);
  EXPECT_NEAR(va, 0.1, 5 * 0.1 * std::sqrt(2.0 / n));
  EXPECT_NEAR(vb, 0.2, 5 * 0.2 * std::sqrt(2.0 / n));
  EXPECT_LT(std::abs((sab / n - sa / n * sb / n) / std::sqrt(va * vb)), 0.02);
}

TEST(ArmClockNoise, MirroredSwapsStreams) {
  ArmClockNoise a(3, 4, 2), b = ArmClockNoise::mirrored(3, 4, 2);
  EXPECT_EQ(a.at(0, 0.5), b.at(1, 0.5));
  EXPECT_EQ(a.at(1, 0.5), b.at(0, 0.5));
}

TEST(TimeChange, ConstantPolicyIsLinear) {
  const BanditInstance inst{{0.5, -1.0, 2.0}, {1, 1, 1}, RewardFamily::gaussian};
  const std::vector<double> w{0.2, 0.5, 0.3};
  ArmClockNoise noise(1, 0, 3);
  const auto path = integrate_time_change(constant_policy(w), inst, kCoarse, noise);
  const double t0 = kCoarse.t0;
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(path.final_state().q[k], w[k] * (1 - t0) + t0 / 3, 1e-12);
  }
}

TEST(TimeChange, ConservationAndMonotonicity) {
  const BanditInstance inst{{3.0, 0.0}, {1, 1}, RewardFamily::gaussian};
  for (std::uint64_t r = 0; r < 50; ++r) {
    ArmClockNoise noise(5, r, 2);
    const auto path = integrate_time_change(ts(PolicyKind::ts_two_arm, 0.0, 1e-8), inst, kCoarse, noise);
    ASSERT_EQ(path.states.size(), path.grid.size());
    for (std::size_t j = 0; j < path.states.size(); ++j) {
      const auto& st = path.states[j];
      ASSERT_EQ(st.t, path.grid[j]);
      ASSERT_NEAR(st.q[0] + st.q[1], st.t, 1e-9);
      if (j > 0) {
        ASSERT_GE(st.q[0], path.states[j - 1].q[0]);
        ASSERT_GE(st.q[1], path.states[j - 1].q[1]);
      }
    }
  }
}

TEST(TimeChange, OneArmStaysBelowTime) {
  const BanditInstance inst{{1.0}, {1}, RewardFamily::gaussian};
  ArmClockNoise noise(2, 0, 1);
  IntegrationOptions opt;
  opt.record_pi = true;
  const auto path = integrate_time_change(ts(PolicyKind::ts_one_arm, 0.0), inst, kCoarse, noise, opt);
  for (const auto& st : path.states) ASSERT_LE(st.q[0], st.t + 1e-15);
  const auto pis = pi_path(path);
  EXPECT_EQ(pis.front().second, 0.5);  // warm start has no pulls
  for (std::size_t j = 1; j < pis.size(); ++j) {
    ASSERT_GT(pis[j].second, 0.0);
    ASSERT_LT(pis[j].second, 1.0);
  }
}

TEST(TimeChange, ZeroMeansGiveZeroRegret) {
  const BanditInstance inst{{0.0, 0.0}, {1, 1}, RewardFamily::gaussian};
  for (std::uint64_t r = 0; r < 20; ++r) {
    ArmClockNoise noise(6, r, 2);
    const auto path = integrate_time_change(ts(PolicyKind::ts_two_arm, 0.0, 1e-8), inst, kCoarse, noise);
    EXPECT_EQ(scaled_regret(path, inst.mu), 0.0);
  }
}

TEST(TimeChange, RecordsOnlyEndpointsWhenAsked) {
  const BanditInstance inst{{1.0}, {1}, RewardFamily::gaussian};
  ArmClockNoise noise(2, 0, 1);
  IntegrationOptions opt;
  opt.record_states = false;
  const auto path = integrate_time_change(ts(PolicyKind::ts_one_arm, 0.0), inst, kCoarse, noise, opt);
  ASSERT_EQ(path.states.size(), 2u);
  EXPECT_EQ(path.final_state().t, 1.0);
  EXPECT_THROW(pi_path(path), ConfigError);
}

TEST(TimeChange, RejectsFiniteForm) {
  PolicySpec p = ts(PolicyKind::ts_one_arm, 0.0);
  p.form = PolicyForm::finite;
  const BanditInstance inst{{1.0}, {1}, RewardFamily::gaussian};
  ArmClockNoise noise(2, 0, 1);
  EXPECT_THROW(integrate_time_change(p, inst, kCoarse, noise), ConfigError);
}

TEST(TimeChange, TwoArmSymmetryUnderMirroredNoise) {
  // Swapping the arms and their Brownian motions swaps the pull fractions.
  const BanditInstance ab{{2.0, -1.0}, {1, 1}, RewardFamily::gaussian};
  const BanditInstance ba{{-1.0, 2.0}, {1, 1}, RewardFamily::gaussian};
  const auto policy = ts(PolicyKind::ts_two_arm, 0.1, 0.0);
  for (std::uint64_t r = 0; r < 20; ++r) {
    ArmClockNoise n1(8, r, 2);
    auto n2 = ArmClockNoise::mirrored(8, r, 2);
    const auto p1 = integrate_time_change(policy, ab, kCoarse, n1);
    const auto p2 = integrate_time_change(policy, ba, kCoarse, n2);
    EXPECT_NEAR(p1.final_state().q[0], p2.final_state().q[1], 1e-9);
    EXPECT_NEAR(scaled_regret(p1, ab.mu), scaled_regret(p2, ba.mu), 1e-9);
  }
}

TEST(EulerMaruyama, ConstantPolicyGaussianLaw) {
  const BanditInstance inst{{1.5, -0.5}, {2.0, 1.0}, RewardFamily::gaussian};
  const std::vector<double> w{0.3, 0.7};
  const auto rule = SamplingRule(constant_policy(w), inst);
  const auto grid = TimeGrid{1e-6, 1e-3, 4, 1.0 / 64}.points();
  constexpr int kReps = 100000;
  Aggregate s0, s1;
  IntegrationOptions opt;
  opt.record_states = false;
  for (int r = 0; r < kReps; ++r) {
    const auto path = integrate_sde_em(rule, inst, grid, 9, r, opt);
    s0.push(path.final_state().s[0]);
    s1.push(path.final_state().s[1]);
  }
  const double t0 = grid.front();
  for (int k = 0; k < 2; ++k) {
    const auto& agg = k == 0 ? s0 : s1;
    const double q = w[k] * (1 - t0) + t0 / 2;
    const double mean = inst.mu[k] * q, var = inst.sigma[k] * inst.sigma[k] * q;
    EXPECT_NEAR(agg.mean(), mean, 4 * std::sqrt(var / kReps));
    EXPECT_NEAR(agg.variance(), var, 4 * var * std::sqrt(2.0 / kReps));
  }
}

TEST(EulerMaruyama, ConservationAndZeroRegret) {
  const BanditInstance inst{{0.0, 0.0}, {1, 1}, RewardFamily::gaussian};
  for (std::uint64_t r = 0; r < 20; ++r) {
    const auto path = integrate_sde_em(ts(PolicyKind::ts_two_arm, 0.0, 1e-8), inst, kCoarse, 3, r);
    for (const auto& st : path.states) ASSERT_NEAR(st.q[0] + st.q[1], st.t, 1e-9);
    EXPECT_EQ(scaled_regret(path, inst.mu), 0.0);
  }
}

TEST(ScaledRegret, Examples) {
  const std::vector<double> mu{5.0, 0.0};
  EXPECT_EQ(scaled_regret(std::vector<double>{1, 0}, mu), 0.0);
  EXPECT_EQ(scaled_regret(std::vector<double>{0, 1}, mu), 5.0);
  EXPECT_NEAR(scaled_regret(std::vector<double>{0.22}, std::vector<double>{-2.0}), 0.44, 1e-15);
}

TEST(Interpolate, Midpoint) {
  Path p;
  p.grid = {0.5, 1.0};
  p.states = {{0.5, {0.2}, {1.0}}, {1.0, {0.6}, {3.0}}};
  const auto mid = interpolate(p, 0.75);
  EXPECT_DOUBLE_EQ(mid.q[0], 0.4);
  EXPECT_DOUBLE_EQ(mid.s[0], 2.0);
  EXPECT_EQ(interpolate(p, 0.1).q[0], 0.2);
}

}  // namespace
}  // namespace difflim
