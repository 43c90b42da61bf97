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

#ifndef CHAINEST_DESIGN_HPP
#define CHAINEST_DESIGN_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chainest/population.hpp"
#include "chainest/rng.hpp"

namespace chainest {

/// Two-phase SRSWOR design: a first-phase sample of size n_first from N
/// units, then a nested second-phase subsample of size n_second.
struct DesignSpec {
  std::size_t n_population = 0;  // N
  std::size_t n_first = 0;       // n'
  std::size_t n_second = 0;      // n

  /// Enforces 2 <= n_second <= n_first <= n_population; throws
  /// ValidationError otherwise.
  void validate() const;
};

/// The reciprocal-difference variance factors of the design.
/// f1 = f2 + f3 holds exactly.
struct SampleFactors {
  double f1 = 0;  // 1/n  - 1/N
  double f2 = 0;  // 1/n' - 1/N
  double f3 = 0;  // 1/n  - 1/n'
};

SampleFactors factors(const DesignSpec& spec);

/// One realized two-phase draw. Index sets are sorted ascending;
/// second_indices is a subset of first_indices. Means are arithmetic means
/// over the respective index sets: y and x on the second phase, x and z on
/// the first phase (z is never read on the second phase).
struct TwoPhaseSample {
  std::vector<std::uint32_t> first_indices;
  std::vector<std::uint32_t> second_indices;
  double mean_y_second = 0;  // ybar
  double mean_x_second = 0;  // xbar
  double mean_x_first = 0;   // xbar'
  double mean_z_first = 0;   // zbar'
};

/// Draw a uniform two-phase sample: a random n'-subset of the population,
/// then a random n-subset of it. Both phases consume `stream` in that
/// order via partial Fisher-Yates shuffles, so one stream value fixes the
/// whole draw bit-reproducibly.
TwoPhaseSample draw_two_phase(const FinitePopulation& pop,
                              const DesignSpec& spec, SplitMix64& stream);

/// Reusable drawing workspace for hot loops (Monte Carlo replications).
/// Same draw semantics and stream consumption as draw_two_phase.
class TwoPhaseDrawer {
 public:
  TwoPhaseDrawer(const FinitePopulation& pop, const DesignSpec& spec);

  /// Draws into `out`, reusing its buffers.
  void draw(SplitMix64& stream, TwoPhaseSample& out);

 private:
  const FinitePopulation& pop_;
  DesignSpec spec_;
  std::vector<std::uint32_t> pool_;
  std::vector<std::uint32_t> second_pool_;
};

}  // namespace chainest

#endif  // CHAINEST_DESIGN_HPP
