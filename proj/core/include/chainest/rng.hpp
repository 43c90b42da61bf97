// Copyright 2026 The chainest Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHAINEST_RNG_HPP
#define CHAINEST_RNG_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace chainest {

/// SplitMix64 pseudo-random generator (Vigna 2015, public domain).
///
/// The state advances by the 64-bit golden-ratio increment and each output
/// is the avalanche-mixed state. It is splittable: `substream(seed, r)`
/// derives stream r from a master seed by running the state through the
/// mixer, so every replication of a simulation owns an independent stream
/// that depends only on (seed, r), never on execution order or thread
/// count. All derived quantities (bounded integers, doubles, normals) are
/// produced by explicit bit-level algorithms, so sequences are
/// bit-reproducible across platforms and standard-library versions.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  /// Finalizer: bijective avalanche mix of a 64-bit word.
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Stream r of master seed s starts from state mix(mix(s) + r). The outer
  /// mix is bijective and the inner +r is injective for fixed s, so distinct
  /// replication indices always map to distinct stream states.
  static constexpr SplitMix64 substream(std::uint64_t seed,
                                        std::uint64_t stream) {
    return SplitMix64(mix(mix(seed) + stream));
  }

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  constexpr std::uint64_t operator()() { return next(); }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~0ull; }

  /// Uniform integer in [0, n), n >= 1. Masked rejection: draw the low
  /// bits covering n and retry past the bound, which keeps the result
  /// exactly uniform.
  std::uint64_t next_bounded(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t m = n - 1;
    std::uint64_t mask = ~0ull >> std::countl_zero(m | 1);
    std::uint64_t r;
    do {
      r = next() & mask;
    } while (r > m);
    return r;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Pair of independent standard normals via the Box-Muller transform.
  /// Consumes exactly two 64-bit draws.
  std::pair<double, double> next_normal_pair() {
    // u1 in (0, 1] so log(u1) is finite.
    const double u1 =
        (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

 private:
  std::uint64_t state_;
};

}  // namespace chainest

#endif  // CHAINEST_RNG_HPP
