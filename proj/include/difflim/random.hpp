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

// Counter-based random streams.
//
// Every stream is addressed by a StreamKey (master seed, replication,
// component). The key is hashed into a Philox4x32-10 key, and draws are the
// encryption of an incrementing counter. Replication r therefore sees the
// same randomness no matter how many replications precede it or which
// worker runs it, which is what makes common random numbers across
// experiment cells possible.

#ifndef DIFFLIM_RANDOM_HPP
#define DIFFLIM_RANDOM_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <cmath>

namespace difflim {

/// Component tags; the low 32 bits of a component id carry the arm index.
enum class StreamTag : std::uint64_t {
  clock_noise = 1,
  euler_maruyama = 2,
  prelimit = 3,
  test = 15,
};

inline constexpr std::uint64_t component_id(StreamTag tag, std::uint64_t arm = 0) noexcept {
  return (static_cast<std::uint64_t>(tag) << 32) | (arm & 0xffffffffULL);
}

struct StreamKey {
  std::uint64_t master_seed = 0;
  std::uint64_t replication_id = 0;
  std::uint64_t component_id = 0;

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// SplitMix64 finalizer (full avalanche on 64 bits).
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t hash_key(const StreamKey& key) noexcept {
  std::uint64_t h = mix64(key.master_seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ (key.replication_id + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (key.component_id + 0x85157af5f1a2b9c3ULL));
  return h;
}

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Block encrypt(Block ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
};

/// 64-bit uniform random bit generator over one Philox stream.
class PhiloxEngine {
 public:
  using result_type = std::uint64_t;

  PhiloxEngine() = default;
  explicit PhiloxEngine(std::uint64_t key) noexcept
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (lane_ == 0) {
      const Philox4x32::Block ctr{static_cast<std::uint32_t>(counter_),
                                  static_cast<std::uint32_t>(counter_ >> 32), 0, 0};
      block_ = Philox4x32::encrypt(ctr, key_);
      ++counter_;
    }
    const std::uint64_t out = (static_cast<std::uint64_t>(block_[2 * lane_ + 1]) << 32) | block_[2 * lane_];
    lane_ ^= 1;
    return out;
  }

  /// Number of 128-bit blocks consumed so far.
  std::uint64_t blocks_used() const noexcept { return counter_; }

 private:
  Philox4x32::Key key_{};
  std::uint64_t counter_ = 0;
  Philox4x32::Block block_{};
  unsigned lane_ = 0;
};

/// One deterministic stream: raw bits, uniforms in [0,1) and standard normals.
class RandomStream {
 public:
  RandomStream() = default;
  explicit RandomStream(const StreamKey& key) noexcept : engine_(hash_key(key)) {}

  std::uint64_t bits() noexcept { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal by the 128-layer ziggurat (Marsaglia & Tsang, in
  /// Doornik's double-precision form). One 64-bit draw per variate on the
  /// fast path: the top 53 bits give the abscissa, the low 7 the layer.
  double normal() noexcept {
    const auto& zig = Ziggurat::get();
    for (;;) {
      const std::uint64_t b = engine_();
      const double u = 2.0 * (static_cast<double>(b >> 11) * 0x1.0p-53) - 1.0;
      const unsigned layer = static_cast<unsigned>(b & 0x7f);
      if (std::abs(u) < zig.ratio[layer]) return u * zig.x[layer];
      if (layer == 0) return tail(u < 0.0);
      const double x = u * zig.x[layer];
      const double f0 = std::exp(-0.5 * (zig.x[layer] * zig.x[layer] - x * x));
      const double f1 = std::exp(-0.5 * (zig.x[layer + 1] * zig.x[layer + 1] - x * x));
      if (f1 + uniform() * (f0 - f1) < 1.0) return x;
    }
  }

 private:
  struct Ziggurat {
    static constexpr int kLayers = 128;
    static constexpr double kR = 3.442619855899;
    static constexpr double kV = 9.91256303526217e-3;
    std::array<double, kLayers + 1> x{};
    std::array<double, kLayers> ratio{};

    Ziggurat() {
      double f = std::exp(-0.5 * kR * kR);
      x[0] = kV / f;
      x[1] = kR;
      x[kLayers] = 0.0;
      for (int i = 2; i < kLayers; ++i) {
        x[i] = std::sqrt(-2.0 * std::log(kV / x[i - 1] + f));
        f = std::exp(-0.5 * x[i] * x[i]);
      }
      for (int i = 0; i < kLayers; ++i) ratio[i] = x[i + 1] / x[i];
    }

    static const Ziggurat& get() {
      static const Ziggurat table;
      return table;
    }
  };

  double tail(bool negative) noexcept {
    double x, y;
    do {
      x = std::log(1.0 - uniform()) / Ziggurat::kR;
      y = std::log(1.0 - uniform());
    } while (-2.0 * y < x * x);
    return negative ? x - Ziggurat::kR : Ziggurat::kR - x;
  }

  PhiloxEngine engine_;
};

inline RandomStream derive_stream(const StreamKey& key) { return RandomStream(key); }

}  // namespace difflim

#endif  // DIFFLIM_RANDOM_HPP
