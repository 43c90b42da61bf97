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

#include "chainest/design.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "chainest/accumulate.hpp"
#include "chainest/errors.hpp"

namespace chainest {

void DesignSpec::validate() const {
  if (!(2 <= n_second && n_second <= n_first && n_first <= n_population)) {
    throw ValidationError(
        "invalid two-phase design: need 2 <= n <= n' <= N, got N = " +
        std::to_string(n_population) + ", n' = " + std::to_string(n_first) +
        ", n = " + std::to_string(n_second));
  }
}

SampleFactors factors(const DesignSpec& spec) {
  spec.validate();
  const double N = static_cast<double>(spec.n_population);
  const double np = static_cast<double>(spec.n_first);
  const double n = static_cast<double>(spec.n_second);
  return SampleFactors{1.0 / n - 1.0 / N, 1.0 / np - 1.0 / N,
                       1.0 / n - 1.0 / np};
}

namespace {

// Mean over a sorted index set; fixed iteration order keeps the result
// bit-reproducible and makes census samples hit the population means
// exactly.
double mean_over(const std::vector<Unit>& units,
                 const std::vector<std::uint32_t>& indices,
                 double Unit::*field) {
  KahanSum acc;
  for (std::uint32_t i : indices) acc.add(units[i].*field);
  return acc.value() / static_cast<double>(indices.size());
}

}  // namespace

TwoPhaseDrawer::TwoPhaseDrawer(const FinitePopulation& pop,
                               const DesignSpec& spec)
    : pop_(pop), spec_(spec) {
  spec_.validate();
  if (spec_.n_population != pop_.size()) {
    throw ValidationError("design N = " + std::to_string(spec_.n_population) +
                          " does not match population size " +
                          std::to_string(pop_.size()));
  }
  pool_.resize(pop_.size());
  second_pool_.resize(spec_.n_first);
}

void TwoPhaseDrawer::draw(SplitMix64& stream, TwoPhaseSample& out) {
  const std::size_t N = spec_.n_population;
  const std::size_t np = spec_.n_first;
  const std::size_t n = spec_.n_second;

  // Phase 1: partial Fisher-Yates over all unit indices.
  std::iota(pool_.begin(), pool_.end(), 0u);
  for (std::size_t i = 0; i < np; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(stream.next_bounded(N - i));
    std::swap(pool_[i], pool_[j]);
  }
  out.first_indices.assign(pool_.begin(),
                           pool_.begin() + static_cast<std::ptrdiff_t>(np));

  // Phase 2: partial Fisher-Yates over the first-phase indices, consuming
  // the same stream.
  std::copy(out.first_indices.begin(), out.first_indices.end(),
            second_pool_.begin());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(stream.next_bounded(np - i));
    std::swap(second_pool_[i], second_pool_[j]);
  }
  out.second_indices.assign(
      second_pool_.begin(),
      second_pool_.begin() + static_cast<std::ptrdiff_t>(n));

  std::sort(out.first_indices.begin(), out.first_indices.end());
  std::sort(out.second_indices.begin(), out.second_indices.end());

  const std::vector<Unit>& units = pop_.units();
  out.mean_y_second = mean_over(units, out.second_indices, &Unit::y);
  out.mean_x_second = mean_over(units, out.second_indices, &Unit::x);
  out.mean_x_first = mean_over(units, out.first_indices, &Unit::x);
  out.mean_z_first = mean_over(units, out.first_indices, &Unit::z);
}

TwoPhaseSample draw_two_phase(const FinitePopulation& pop,
                              const DesignSpec& spec, SplitMix64& stream) {
  TwoPhaseDrawer drawer(pop, spec);
  TwoPhaseSample sample;
  drawer.draw(stream, sample);
  return sample;
}

}  // namespace chainest
