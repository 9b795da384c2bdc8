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
#include <limits>

#include <gtest/gtest.h>

#include "difflim/normal.hpp"

namespace difflim {
namespace {

// Reference values computed with 40-digit arithmetic.
struct CdfCase {
  double x;
  double phi;
};

constexpr CdfCase kCdf[] = {
    {-20.0, 2.7536241186062336951e-89}, {-8.5, 9.4795348222033183542e-18}, {-5.0, 2.8665157187919391167e-7},
    {-1.0, 0.15865525393145705141},     {-0.5, 0.30853753872598689636},    {0.0, 0.5},
    {0.5, 0.69146246127401310364},      {1.959963984540054, 0.975},        {3.0, 0.99865010196836990547},
    {8.0, 0.9999999999999993779},
};

TEST(NormalCdf, MatchesHighPrecisionReference) {
  for (const auto& c : kCdf) {
    if (std::abs(c.x) > 8.0) continue;
    EXPECT_NEAR(normal_cdf(c.x), c.phi, 1e-14 * c.phi) << "x = " << c.x;
  }
}

TEST(NormalCdf, LowerTailKeepsRelativeAccuracy) {
  // Rounding x / sqrt(2) costs about x^2 ulps of relative accuracy in the tail.
  EXPECT_NEAR(normal_cdf(-20.0) / 2.7536241186062336951e-89, 1.0, 1e-13);
  EXPECT_GT(normal_cdf(-37.0), 0.0);
}

TEST(NormalCdf, SymmetryAndLimits) {
  for (double x = -6.0; x <= 6.0; x += 0.37) {
    EXPECT_NEAR(normal_cdf(x) + normal_cdf(-x), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(normal_sf(x), normal_cdf(-x));
  }
  EXPECT_EQ(normal_cdf(std::numeric_limits<double>::infinity()), 1.0);
  EXPECT_EQ(normal_cdf(-std::numeric_limits<double>::infinity()), 0.0);
}

TEST(NormalCdf, MillsRatioTailBounds) {
  // x/(1+x^2) phi(x) <= 1 - Phi(x) <= phi(x)/x for x > 0.
  for (double x = 0.5; x < 30.0; x *= 1.3) {
    const double tail = normal_sf(x);
    EXPECT_LE(tail, normal_pdf(x) / x * (1.0 + 1e-14));
    EXPECT_GE(tail, x / (1.0 + x * x) * normal_pdf(x) * (1.0 - 1e-14));
  }
}

TEST(NormalCdf, Monotone) {
  double prev = 0.0;
  for (double x = -10.0; x <= 10.0; x += 0.01) {
    const double v = normal_cdf(x);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

}  // namespace
}  // namespace difflim
