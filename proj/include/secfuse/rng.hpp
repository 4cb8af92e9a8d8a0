/*
 * Copyright 2026 The secfuse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Counter-derived random streams. Every random draw in a simulation comes from
// a stream keyed by (seed, purpose, entity, step, channel), so results do not
// depend on the order in which entities are evaluated.
//
// Uniform and Gaussian variates are produced here rather than through
// <random> distributions, whose output is implementation-defined.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace secfuse {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Stream {
 public:
  explicit constexpr Stream(std::uint64_t key) : state_(key) {}

  constexpr std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// [0, 1) with 53 random bits.
  constexpr double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// [lo, hi]; the closed upper end only matters through rounding.
  double uniform(double lo, double hi) {
    const double v = lo + (hi - lo) * uniform01();
    return v > hi ? hi : v;
  }

  /// Uniform integer in [0, n) by rejection; n > 0.
  constexpr std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  /// Box-Muller, first variate only.
  double gaussian(double mean, double stddev) {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

enum class Purpose : std::uint64_t {
  kLateralJitter = 1,
  kMeasurementNoise = 2,
  kAttack = 3,
  kMaliciousSelection = 4,
  kStaticTruth = 5,
};

class StreamFactory {
 public:
  explicit constexpr StreamFactory(std::uint64_t seed) : seed_(seed) {}

  constexpr std::uint64_t seed() const { return seed_; }

  constexpr Stream stream(Purpose purpose, std::uint64_t entity_a, std::uint64_t entity_b, std::int64_t step,
                          std::uint64_t channel) const {
    std::uint64_t h = splitmix64(seed_);
    h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
    h = splitmix64(h ^ entity_a);
    h = splitmix64(h ^ entity_b);
    h = splitmix64(h ^ static_cast<std::uint64_t>(step));
    h = splitmix64(h ^ channel);
    return Stream(h);
  }

 private:
  std::uint64_t seed_;
};

}  // namespace secfuse
