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

// Scaled regret of one-armed Thompson sampling against a zero outside
// option, for a few prior smoothing levels, followed by a finite-horizon
// experiment compared with its diffusion limit.

#include <cstdio>
#include <vector>

#include "difflim/analytics.hpp"

int main() {
  using namespace difflim;

  MonteCarlo mc;
  mc.reps = 4000;

  const std::vector<double> gaps{-4.0, -2.0, 0.0, 2.0};
  const std::vector<double> cs{0.0, 0.25, 1.0};
  std::printf("%6s %6s %10s %9s %8s\n", "mu", "c", "E[R]", "stderr", "E[q1]");
  for (const auto& row : regret_profile(Family::ts1, gaps, cs, mc)) {
    std::printf("%6.2f %6.2f %10.4f %9.4f %8.4f\n", row.gap, row.c, row.mean_regret, row.stderr_regret, row.mean_q1);
  }

  // Same policy run for n = 1500 periods, rescaled, next to the limit.
  const auto inst = family_instance(Family::ts1, -2.0);
  const std::vector<long long> ns{1500};
  const std::vector<double> times{0.25, 0.5, 1.0};
  mc.reps = 1000;
  std::printf("\n%6s %12s %12s %10s\n", "t", "E[S] n=1500", "E[S] limit", "stderr");
  for (const auto& row : convergence_study(inst, family_policy(Family::ts1, 0.0), ns, times, 1000, mc)) {
    std::printf("%6.2f %12.4f %12.4f %10.4f\n", row.t, row.mean_prelimit, row.mean_diffusion, row.combined_stderr);
  }
  return 0;
}
