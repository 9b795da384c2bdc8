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

#ifndef DIFFLIM_NORMAL_HPP
#define DIFFLIM_NORMAL_HPP

#include <cmath>
#include <numbers>

namespace difflim {

/// Standard Gaussian CDF.
///
/// Evaluated through erfc on the side of the tail that is small, so the
/// result keeps full relative accuracy deep in the lower tail (Phi(-37) is
/// ~1e-300, not 0) and the upper tail is never computed as 1 - tiny by
/// cancellation inside the caller.
inline double normal_cdf(double x) noexcept {
  constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
  if (x < 0.0) return 0.5 * std::erfc(-x * kInvSqrt2);
  return 1.0 - 0.5 * std::erfc(x * kInvSqrt2);
}

/// Upper tail 1 - Phi(x), accurate for large positive x.
inline double normal_sf(double x) noexcept { return normal_cdf(-x); }

inline double normal_pdf(double x) noexcept {
  constexpr double kInvSqrt2Pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

}  // namespace difflim

#endif  // DIFFLIM_NORMAL_HPP
