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

#include "difflim/prelimit.hpp"
#include "difflim/stats.hpp"

namespace difflim {
namespace {

PolicySpec finite(PolicyKind kind, double c = 0.0) {
  PolicySpec p;
  p.kind = kind;
  p.form = PolicyForm::finite;
  p.c = c;
  return p;
}

TEST(Srme, DeterministicGivenSeed) {
  const BanditInstance inst{{10.0}, {1.0}, RewardFamily::gaussian};
  const auto a = simulate_srme(inst, finite(PolicyKind::ts_one_arm), 500, 1, 2);
  const auto b = simulate_srme(inst, finite(PolicyKind::ts_one_arm), 500, 1, 2);
  const auto c = simulate_srme(inst, finite(PolicyKind::ts_one_arm), 500, 1, 3);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
}

TEST(Srme, StateRecursionFromActionsAndRewards) {
  for (auto family : {RewardFamily::gaussian, RewardFamily::shifted_bernoulli, RewardFamily::shifted_uniform}) {
    const BanditInstance inst{{2.0, -1.0}, {1.0, 1.0}, family};
    PolicySpec p = finite(PolicyKind::ts_two_arm);
    const auto raw = simulate_srme(inst, p, 400, 4, 0);
    std::vector<double> q(2, 0.0), s(2, 0.0);
    EXPECT_EQ(raw.actions[0], 0);
    EXPECT_EQ(raw.actions[1], 1);
    for (long long i = 1; i <= raw.n; ++i) {
      const int a = raw.actions[static_cast<std::size_t>(i - 1)];
      q[static_cast<std::size_t>(a)] += 1;
      s[static_cast<std::size_t>(a)] += raw.rewards[static_cast<std::size_t>(i - 1)];
      for (std::size_t k = 0; k < 2; ++k) {
        ASSERT_EQ(raw.pulls(i, k), q[k]);
        ASSERT_EQ(raw.sums(i, k), s[k]);
      }
      ASSERT_EQ(raw.pulls(i, 0) + raw.pulls(i, 1), static_cast<double>(i));
    }
  }
}

TEST(Srme, OneArmOutsideOptionEarnsNothing) {
  const BanditInstance inst{{-5.0}, {1.0}, RewardFamily::gaussian};
  const auto raw = simulate_srme(inst, finite(PolicyKind::ts_one_arm), 300, 5, 0);
  for (std::size_t i = 0; i < raw.actions.size(); ++i) {
    if (raw.actions[i] == 1) {
      ASSERT_EQ(raw.rewards[i], 0.0);
    }
  }
  EXPECT_LE(raw.pulls(raw.n, 0), 300.0);
}

TEST(Srme, ForcedPullsWithUniformGreedy) {
  // Tempered greedy with alpha = 0 is uniform; for K = 1 that is always pull.
  PolicySpec p = finite(PolicyKind::tempered_greedy);
  p.alpha = 0.0;
  const BanditInstance inst{{1.0}, {1.0}, RewardFamily::gaussian};
  const auto raw = simulate_srme(inst, p, 200, 1, 0);
  EXPECT_EQ(raw.pulls(200, 0), 200.0);
}

TEST(Srme, ZeroMeansZeroRegret) {
  const BanditInstance inst{{0.0, 0.0, 0.0}, {1, 1, 1}, RewardFamily::gaussian};
  PolicySpec p = finite(PolicyKind::luce);
  p.alpha = 0.5;
  EXPECT_EQ(raw_regret(simulate_srme(inst, p, 200, 2, 0), inst), 0.0);
}

TEST(Srme, RewardFamiliesMatchMoments) {
  for (auto family : {RewardFamily::shifted_bernoulli, RewardFamily::shifted_uniform, RewardFamily::gaussian}) {
    PolicySpec p = finite(PolicyKind::constant);
    p.weights = {1.0};
    const BanditInstance inst{{20.0}, {1.5}, family};
    const long long n = 100;
    Aggregate y;
    for (std::uint64_t r = 0; r < 400; ++r) {
      const auto raw = simulate_srme(inst, p, n, 8, r);
      for (double v : raw.rewards) y.push(v);
    }
    EXPECT_NEAR(y.mean(), 2.0, 5 * 1.5 / std::sqrt(40000.0)) << to_string(family);
    EXPECT_NEAR(y.variance(), 2.25, 0.1) << to_string(family);
  }
}

TEST(Srme, ShiftedBernoulliRejectsInfeasibleProbability) {
  RandomStream rng(StreamKey{0, 0, component_id(StreamTag::test)});
  EXPECT_THROW(detail::draw_reward(RewardFamily::shifted_bernoulli, 1.0, 0.0, rng), ConfigError);
}

TEST(ScaleTrajectory, ExactAndHalfwayPoints) {
  const BanditInstance inst{{1.0, 0.0}, {1.0, 1.0}, RewardFamily::gaussian};
  const auto raw = simulate_srme(inst, finite(PolicyKind::ts_two_arm), 10, 1, 0);
  const std::vector<double> times{0.3, 0.35, 1.0};
  const auto path = scale_trajectory(raw, times);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_DOUBLE_EQ(path.states[0].q[k], raw.pulls(3, k) / 10.0);
    EXPECT_DOUBLE_EQ(path.states[0].s[k], raw.sums(3, k) / std::sqrt(10.0));
    EXPECT_DOUBLE_EQ(path.states[1].q[k], 0.5 * (raw.pulls(3, k) + raw.pulls(4, k)) / 10.0);
  }
  EXPECT_EQ(path.states[2].q[0] + path.states[2].q[1], 1.0);
}

TEST(RawRegret, Extremes) {
  RawTrajectory raw;
  raw.n = 4;
  raw.arms = 2;
  raw.running_pulls.assign(10, 0.0);
  raw.running_sums.assign(10, 0.0);
  const BanditInstance inst{{3.0, 0.0}, {1, 1}, RewardFamily::gaussian};
  raw.running_pulls[8] = 4;
  EXPECT_EQ(raw_regret(raw, inst), 0.0);
  raw.running_pulls[8] = 0;
  raw.running_pulls[9] = 4;
  EXPECT_EQ(raw_regret(raw, inst), 3.0);
}

TEST(Srme, RejectsLimitForm) {
  PolicySpec p;
  const BanditInstance inst{{1.0}, {1.0}, RewardFamily::gaussian};
  EXPECT_THROW(simulate_srme(inst, p, 10, 0, 0), ConfigError);
}

}  // namespace
}  // namespace difflim
