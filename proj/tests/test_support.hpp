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

#ifndef CHAINEST_TEST_SUPPORT_HPP
#define CHAINEST_TEST_SUPPORT_HPP

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "chainest/design.hpp"
#include "chainest/population.hpp"
#include "chainest/rng.hpp"

namespace chainest::testing {

/// Five-row dataset with hand-computed moments; the expected values in the
/// population tests were worked out independently from these rows.
inline FinitePopulation tiny_population() {
  return FinitePopulation({{2, 1, 10},
                           {4, 3, 12},
                           {4, 5, 11},
                           {7, 7, 15},
                           {8, 9, 17}},
                          "tiny");
}

/// The published head-measurement parameter set used by the golden tests.
inline PopulationSummary anderson_summary() {
  PopulationSummary s;
  s.n_population = 25;
  s.mean_y = 183.84;
  s.mean_x = 185.72;
  s.mean_z = 151.12;
  s.cv_y = 0.0546;
  s.cv_x = 0.0526;
  s.cv_z = 0.0488;
  s.rho_xy = 0.7108;
  s.rho_xz = 0.7346;
  s.rho_yz = 0.6932;
  s.sigma_z = 7.224;
  s.beta1_z = 0.002;
  s.beta2_z = 2.6519;
  const double sy = s.cv_y * s.mean_y;
  const double sx = s.cv_x * s.mean_x;
  const double sz = s.cv_z * s.mean_z;
  s.s2_y = sy * sy;
  s.s2_x = sx * sx;
  s.s2_z = sz * sz;
  s.s_xy = s.rho_xy * sx * sy;
  s.s_xz = s.rho_xz * sx * sz;
  s.s_yz = s.rho_yz * sy * sz;
  return s;
}

/// Random summary with a guaranteed-PSD correlation structure: the rhos
/// are pairwise dot products of random unit vectors (a Gram matrix).
inline PopulationSummary random_summary(SplitMix64& rng) {
  const auto unit3 = [&rng]() {
    double v[3];
    for (;;) {
      const auto [a, b] = rng.next_normal_pair();
      const auto [c, unused] = rng.next_normal_pair();
      v[0] = a;
      v[1] = b;
      v[2] = c;
      const double norm =
          std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      if (norm > 1e-6) {
        v[0] /= norm;
        v[1] /= norm;
        v[2] /= norm;
        return std::array<double, 3>{v[0], v[1], v[2]};
      }
    }
  };
  const auto uy = unit3();
  const auto ux = unit3();
  const auto uz = unit3();
  const auto dot = [](const std::array<double, 3>& a,
                      const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  };

  PopulationSummary s;
  s.n_population = 50 + rng.next_bounded(200);
  s.mean_y = 50.0 + 400.0 * rng.next_double();
  s.mean_x = 50.0 + 400.0 * rng.next_double();
  s.mean_z = 50.0 + 400.0 * rng.next_double();
  s.cv_y = 0.01 + 0.3 * rng.next_double();
  s.cv_x = 0.01 + 0.3 * rng.next_double();
  s.cv_z = 0.01 + 0.3 * rng.next_double();
  s.rho_xy = dot(ux, uy);
  s.rho_xz = dot(ux, uz);
  s.rho_yz = dot(uy, uz);
  s.sigma_z = s.cv_z * s.mean_z;
  s.beta1_z = 2.0 * rng.next_double();
  s.beta2_z = 1.0 + 5.0 * rng.next_double();
  const double sy = s.cv_y * s.mean_y;
  const double sx = s.cv_x * s.mean_x;
  const double sz = s.cv_z * s.mean_z;
  s.s2_y = sy * sy;
  s.s2_x = sx * sx;
  s.s2_z = sz * sz;
  s.s_xy = s.rho_xy * sx * sy;
  s.s_xz = s.rho_xz * sx * sz;
  s.s_yz = s.rho_yz * sy * sz;
  return s;
}

/// Random design with 2 <= n <= n' <= N.
inline DesignSpec random_design(SplitMix64& rng) {
  const std::size_t N = 5 + rng.next_bounded(196);
  const std::size_t np = 3 + rng.next_bounded(N - 2);
  const std::size_t n = 2 + rng.next_bounded(np - 1);
  return DesignSpec{N, np, n};
}

}  // namespace chainest::testing

#endif  // CHAINEST_TEST_SUPPORT_HPP
