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

#ifndef DIFFLIM_GRID_HPP
#define DIFFLIM_GRID_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "difflim/error.hpp"

namespace difflim {

/// Integration grid on [t0, 1]: geometric_count points spaced geometrically
/// from t0 to geometric_end, then uniform steps of (at most) dt up to 1.
/// With geometric_count < 2 the grid is uniform from t0.
///
/// Thompson drifts are singular at t = 0, so integration starts from a
/// small warm-start time and resolves the early log-time scale
/// geometrically.
struct TimeGrid {
  double t0 = 1e-6;
  double geometric_end = 1e-3;
  std::size_t geometric_count = 64;
  double dt = 1.0 / 8192.0;

  /// Fine near-zero grid used for instability statistics.
  static TimeGrid reference_near_zero() { return TimeGrid{1e-9, 1e-3, 512, 1.0 / 8192.0}; }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

  void validate() const {
    detail::require(t0 > 0.0 && t0 < 1.0, "grid.t0 must lie in (0, 1)");
    detail::require(dt > 0.0 && dt <= 1.0, "grid.dt must lie in (0, 1]");
    if (geometric_count >= 2) {
      detail::require(geometric_end > t0 && geometric_end < 1.0,
                      "grid.geometric_end must lie in (t0, 1)");
    }
  }

  std::vector<double> points() const {
    validate();
    std::vector<double> pts;
    double start = t0;
    if (geometric_count >= 2) {
      const double log_ratio = std::log(geometric_end / t0) / static_cast<double>(geometric_count - 1);
      pts.reserve(geometric_count);
      for (std::size_t j = 0; j + 1 < geometric_count; ++j) {
        pts.push_back(t0 * std::exp(log_ratio * static_cast<double>(j)));
      }
      pts.push_back(geometric_end);
      start = geometric_end;
    } else {
      pts.push_back(t0);
    }
    const auto steps = static_cast<std::size_t>(std::ceil((1.0 - start) / dt - 1e-9));
    const double step = (1.0 - start) / static_cast<double>(steps);
    pts.reserve(pts.size() + steps);
    for (std::size_t j = 1; j < steps; ++j) pts.push_back(start + step * static_cast<double>(j));
    pts.push_back(1.0);
    return pts;
  }
};

}  // namespace difflim

#endif  // DIFFLIM_GRID_HPP
