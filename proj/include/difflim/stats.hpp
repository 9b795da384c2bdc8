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

#ifndef DIFFLIM_STATS_HPP
#define DIFFLIM_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "difflim/error.hpp"

namespace difflim {

/// Streaming moments with an optional reservoir of the raw samples.
///
/// push() is Welford's update; merge() is the pairwise (Chan et al.)
/// combination, so partial aggregates can be built independently and
/// combined in any grouping.
class Aggregate {
 public:
  Aggregate() = default;
  explicit Aggregate(bool keep_samples) : keep_samples_(keep_samples) {}

  void push(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
    if (keep_samples_) samples_.push_back(x);
  }

  void merge(const Aggregate& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      const bool keep = keep_samples_ || other.keep_samples_;
      *this = other;
      keep_samples_ = keep;
      return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    const double delta = other.mean_ - mean_;
    mean_ += delta * (nb / n);
    m2_ += other.m2_ + delta * delta * (na * nb / n);
    count_ += other.count_;
    min_ = std::min(min_, other.min_);
    max_ = std::max(max_, other.max_);
    if (keep_samples_ || other.keep_samples_) {
      keep_samples_ = true;
      samples_.insert(samples_.end(), other.samples_.begin(), other.samples_.end());
    }
  }

  std::size_t count() const noexcept { return count_; }
  double mean() const noexcept { return count_ ? mean_ : std::numeric_limits<double>::quiet_NaN(); }
  double m2() const noexcept { return m2_; }
  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }

  /// Unbiased sample variance; 0 for a single sample.
  double variance() const noexcept {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }
  double stddev() const noexcept { return std::sqrt(variance()); }
  double stderr_mean() const noexcept {
    return count_ ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
  }

  bool keeps_samples() const noexcept { return keep_samples_; }
  const std::vector<double>& samples() const noexcept { return samples_; }

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
  bool keep_samples_ = false;
  std::vector<double> samples_;
};

/// Aggregates values by a balanced binary merge tree over their index
/// order. The result depends only on the sequence, never on how it was
/// produced.
inline Aggregate aggregate_pairwise(std::span<const double> values, bool keep_samples = false) {
  if (values.empty()) return Aggregate(keep_samples);
  if (values.size() <= 8) {
    Aggregate leaf(keep_samples);
    for (double v : values) leaf.push(v);
    return leaf;
  }
  const std::size_t half = values.size() / 2;
  Aggregate left = aggregate_pairwise(values.first(half), keep_samples);
  left.merge(aggregate_pairwise(values.subspan(half), keep_samples));
  return left;
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  detail::require(!a.empty() && !b.empty(), "ks_distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges
  std::vector<std::size_t> counts;

  std::size_t total() const noexcept {
    std::size_t n = 0;
    for (auto c : counts) n += c;
    return n;
  }
};

/// Equal-width histogram on [lo, hi]; values outside are clamped into the
/// end bins. A degenerate range (lo == hi) puts everything in bin 0.
inline Histogram make_histogram(std::span<const double> values, double lo, double hi, std::size_t bins) {
  detail::require(bins >= 1, "histogram: bins must be >= 1");
  detail::require(hi >= lo, "histogram: hi must be >= lo");
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    h.edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
  }
  h.edges[bins] = hi;
  h.counts.assign(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double v : values) {
    std::size_t b = 0;
    if (width > 0.0 && v > lo) {
      b = std::min(bins - 1, static_cast<std::size_t>((v - lo) / width));
    }
    ++h.counts[b];
  }
  return h;
}

}  // namespace difflim

#endif  // DIFFLIM_STATS_HPP
