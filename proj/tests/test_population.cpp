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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <sstream>

#include "chainest/errors.hpp"
#include "chainest/population.hpp"
#include "test_support.hpp"

using namespace chainest;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("load_population parses a small CSV") {
  std::istringstream csv("y,x,z\n1,2,3\n4,5,6\n7,8,9\n");
  const FinitePopulation pop = load_population(csv);
  REQUIRE(pop.size() == 3);
  CHECK(pop.units()[0].y == 1.0);
  CHECK(pop.units()[2].z == 9.0);
  const double mean_y =
      (pop.units()[0].y + pop.units()[1].y + pop.units()[2].y) / 3.0;
  CHECK(mean_y == 4.0);
}

TEST_CASE("load_population rejects degenerate input") {
  SECTION("empty file") {
    std::istringstream csv("");
    CHECK_THROWS_MATCHES(load_population(csv), DataError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("N < 2")));
  }
  SECTION("single row") {
    std::istringstream csv("y,x,z\n1,2,3\n");
    CHECK_THROWS_MATCHES(load_population(csv), DataError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("N < 2")));
  }
  SECTION("non-numeric field names the row") {
    std::istringstream csv("y,x,z\n1,abc,3\n4,5,6\n");
    CHECK_THROWS_MATCHES(load_population(csv), DataError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("row 1")));
  }
  SECTION("bad header") {
    std::istringstream csv("a,b,c\n1,2,3\n4,5,6\n");
    CHECK_THROWS_AS(load_population(csv), DataError);
  }
  SECTION("wrong field count") {
    std::istringstream csv("y,x,z\n1,2\n4,5,6\n");
    CHECK_THROWS_MATCHES(load_population(csv), DataError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("row 1")));
  }
  SECTION("non-finite value") {
    std::istringstream csv("y,x,z\n1,inf,3\n4,5,6\n");
    CHECK_THROWS_AS(load_population(csv), DataError);
  }
}

TEST_CASE("summarize matches hand-computed moments on the tiny dataset") {
  // Expected values computed by hand from the five rows.
  const PopulationSummary s = summarize(testing::tiny_population());
  CHECK(s.n_population == 5);
  CHECK(s.mean_y == Approx(5.0).epsilon(1e-14));
  CHECK(s.mean_x == Approx(5.0).epsilon(1e-14));
  CHECK(s.mean_z == Approx(13.0).epsilon(1e-14));
  CHECK(s.s2_y == Approx(6.0).epsilon(1e-14));
  CHECK(s.s2_x == Approx(10.0).epsilon(1e-14));
  CHECK(s.s2_z == Approx(8.5).epsilon(1e-14));
  CHECK(s.s_xy == Approx(7.5).epsilon(1e-14));
  CHECK(s.s_xz == Approx(8.5).epsilon(1e-14));
  CHECK(s.s_yz == Approx(7.0).epsilon(1e-14));
  CHECK(s.cv_y == Approx(0.4898979485566356).epsilon(1e-13));
  CHECK(s.cv_x == Approx(0.6324555320336759).epsilon(1e-13));
  CHECK(s.cv_z == Approx(0.22426738057097312).epsilon(1e-13));
  CHECK(s.rho_xy == Approx(0.9682458365518541).epsilon(1e-13));
  CHECK(s.rho_xz == Approx(0.9219544457292888).epsilon(1e-13));
  CHECK(s.rho_yz == Approx(0.9801960588196068).epsilon(1e-13));
  CHECK(s.sigma_z == Approx(2.9154759474226504).epsilon(1e-13));
  CHECK(s.beta1_z == Approx(0.16486871565235095).epsilon(1e-13));
  CHECK(s.beta2_z == Approx(1.6003460207612459).epsilon(1e-13));
}

TEST_CASE("summarize forces beta1 to zero for symmetric z") {
  std::vector<Unit> units;
  for (int rep = 0; rep < 3; ++rep) {
    for (int z = 1; z <= 5; ++z) {
      units.push_back({static_cast<double>(z + rep), 2.0 * z + rep,
                       static_cast<double>(z)});
    }
  }
  const PopulationSummary s = summarize(FinitePopulation(std::move(units)));
  CHECK(s.beta1_z == 0.0);
}

TEST_CASE("summarize correlations respect the Cauchy-Schwarz bound") {
  SplitMix64 rng(91);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Unit> units;
    const std::size_t n = 3 + rng.next_bounded(40);
    for (std::size_t i = 0; i < n; ++i) {
      units.push_back({1.0 + rng.next_double(), 1.0 + rng.next_double(),
                       1.0 + rng.next_double()});
    }
    const PopulationSummary s = summarize(FinitePopulation(std::move(units)));
    CHECK(std::abs(s.rho_xy) <= 1.0 + 1e-12);
    CHECK(std::abs(s.rho_xz) <= 1.0 + 1e-12);
    CHECK(std::abs(s.rho_yz) <= 1.0 + 1e-12);
    // Moment bound m4 >= m2^2.
    CHECK(s.beta2_z >= 1.0 - 1e-12);
  }
}

TEST_CASE("population CSV round-trips values exactly") {
  SplitMix64 rng(37);
  std::vector<Unit> units;
  for (int i = 0; i < 25; ++i) {
    units.push_back({100.0 * rng.next_double(), 100.0 * rng.next_double(),
                     100.0 * rng.next_double()});
  }
  const FinitePopulation pop(units);

  std::ostringstream out;
  write_population(pop, out);
  std::istringstream in(out.str());
  const FinitePopulation back = load_population(in);

  REQUIRE(back.size() == pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    CHECK(back.units()[i].y == pop.units()[i].y);
    CHECK(back.units()[i].x == pop.units()[i].x);
    CHECK(back.units()[i].z == pop.units()[i].z);
  }
}

TEST_CASE("summarize is permutation invariant") {
  SplitMix64 rng(17);
  std::vector<Unit> units;
  for (int i = 0; i < 200; ++i) {
    units.push_back({10.0 + rng.next_double(), 20.0 + rng.next_double(),
                     30.0 + rng.next_double()});
  }
  const PopulationSummary a = summarize(FinitePopulation(units));

  std::mt19937 shuffler(99);
  std::shuffle(units.begin(), units.end(), shuffler);
  const PopulationSummary b = summarize(FinitePopulation(units));

  const auto close = [](double u, double v) {
    return std::abs(u - v) <= 1e-12 * std::max(std::abs(u), std::abs(v));
  };
  CHECK(close(a.mean_y, b.mean_y));
  CHECK(close(a.s2_y, b.s2_y));
  CHECK(close(a.rho_xy, b.rho_xy));
  CHECK(close(a.rho_yz, b.rho_yz));
  CHECK(close(a.beta1_z, b.beta1_z));
  CHECK(close(a.beta2_z, b.beta2_z));
}

TEST_CASE("z shift and scale behave as expected") {
  SplitMix64 rng(23);
  std::vector<Unit> units;
  for (int i = 0; i < 60; ++i) {
    units.push_back({5.0 + rng.next_double(), 6.0 + rng.next_double(),
                     7.0 + 3.0 * rng.next_double()});
  }
  const PopulationSummary base = summarize(FinitePopulation(units));

  SECTION("shifting z leaves dispersion and shape unchanged") {
    std::vector<Unit> shifted = units;
    for (Unit& u : shifted) u.z += 100.0;
    const PopulationSummary s = summarize(FinitePopulation(shifted));
    CHECK(s.s2_z == Approx(base.s2_z).epsilon(1e-9));
    CHECK(s.sigma_z == Approx(base.sigma_z).epsilon(1e-9));
    CHECK(s.beta1_z == Approx(base.beta1_z).margin(1e-9));
    CHECK(s.beta2_z == Approx(base.beta2_z).epsilon(1e-9));
  }

  SECTION("scaling z by c > 0 preserves shape, scales sigma") {
    const double c = 3.5;
    std::vector<Unit> scaled = units;
    for (Unit& u : scaled) u.z *= c;
    const PopulationSummary s = summarize(FinitePopulation(scaled));
    CHECK(s.beta1_z == Approx(base.beta1_z).margin(1e-9));
    CHECK(s.beta2_z == Approx(base.beta2_z).epsilon(1e-9));
    CHECK(s.cv_z == Approx(base.cv_z).epsilon(1e-9));
    CHECK(s.sigma_z == Approx(c * base.sigma_z).epsilon(1e-9));
  }
}

TEST_CASE("summarize error paths") {
  SECTION("zero mean") {
    const FinitePopulation pop({{1, 2, 3}, {-1, 4, 5}}, "zero-mean-y");
    CHECK_THROWS_AS(summarize(pop), DataError);
  }
  SECTION("zero z variance names beta") {
    const FinitePopulation pop({{1, 2, 3}, {4, 5, 3}, {6, 7, 3}});
    CHECK_THROWS_MATCHES(summarize(pop), DataError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("beta")));
  }
}

TEST_CASE("summary write/load round-trips exactly") {
  const PopulationSummary s = summarize(testing::tiny_population());
  std::ostringstream out;
  write_summary(s, out);
  std::istringstream in(out.str());
  const PopulationSummary r = load_summary(in);

  CHECK(r.n_population == s.n_population);
  CHECK(r.mean_y == Approx(s.mean_y).epsilon(1e-12));
  CHECK(r.mean_z == Approx(s.mean_z).epsilon(1e-12));
  CHECK(r.cv_y == Approx(s.cv_y).epsilon(1e-12));
  CHECK(r.cv_z == Approx(s.cv_z).epsilon(1e-12));
  CHECK(r.rho_xy == Approx(s.rho_xy).epsilon(1e-12));
  CHECK(r.rho_yz == Approx(s.rho_yz).epsilon(1e-12));
  CHECK(r.sigma_z == Approx(s.sigma_z).epsilon(1e-12));
  CHECK(r.beta1_z == Approx(s.beta1_z).epsilon(1e-12));
  CHECK(r.beta2_z == Approx(s.beta2_z).epsilon(1e-12));
  CHECK(r.s2_y == Approx(s.s2_y).epsilon(1e-12));
  CHECK(r.s_yz == Approx(s.s_yz).epsilon(1e-12));
}

TEST_CASE("load_summary accepts the published parameter file verbatim") {
  std::istringstream in(
      "# comment line\n"
      "N = 25\n"
      "mean_y = 183.84\n"
      "mean_x = 185.72\n"
      "mean_z = 151.12\n"
      "cv_y = 0.0546\n"
      "cv_x = 0.0526\n"
      "cv_z = 0.0488\n"
      "rho_xy = 0.7108\n"
      "rho_xz = 0.7346\n"
      "rho_yz = 0.6932\n"
      "sigma_z = 7.224\n"
      "beta1_z = 0.002\n"
      "beta2_z = 2.6519\n");
  const PopulationSummary s = load_summary(in);
  CHECK(s.mean_z == 151.12);
  CHECK(s.cv_z == 0.0488);
  CHECK(s.sigma_z == 7.224);  // kept verbatim, not recomputed from cv_z
  CHECK(s.n_population == 25);

  // The file is internally inconsistent (sigma_z != cv_z * mean_z): that
  // is a warning, never an error.
  const auto warnings = consistency_warnings(s);
  REQUIRE_FALSE(warnings.empty());
  CHECK_THAT(warnings.front(), ContainsSubstring("sigma_z"));
}

TEST_CASE("load_summary validation") {
  SECTION("missing key is named") {
    std::istringstream in(
        "N = 25\nmean_y = 1\nmean_x = 1\nmean_z = 1\ncv_y = 0.1\n"
        "cv_x = 0.1\ncv_z = 0.1\nrho_xy = 0.5\nrho_xz = 0.5\n"
        "sigma_z = 1\nbeta1_z = 0\nbeta2_z = 3\n");
    CHECK_THROWS_MATCHES(load_summary(in), DataError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("rho_yz")));
  }
  SECTION("correlation out of range") {
    std::istringstream in(
        "N = 25\nmean_y = 1\nmean_x = 1\nmean_z = 1\ncv_y = 0.1\n"
        "cv_x = 0.1\ncv_z = 0.1\nrho_xy = 1.5\nrho_xz = 0.5\n"
        "rho_yz = 0.5\nsigma_z = 1\nbeta1_z = 0\nbeta2_z = 3\n");
    CHECK_THROWS_MATCHES(load_summary(in), DataError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("rho_xy")));
  }
  SECTION("non-numeric value") {
    std::istringstream in("N = twenty\n");
    CHECK_THROWS_AS(load_summary(in), DataError);
  }
  SECTION("non-positive cv") {
    std::istringstream in(
        "N = 25\nmean_y = 1\nmean_x = 1\nmean_z = 1\ncv_y = -0.1\n"
        "cv_x = 0.1\ncv_z = 0.1\nrho_xy = 0.5\nrho_xz = 0.5\n"
        "rho_yz = 0.5\nsigma_z = 1\nbeta1_z = 0\nbeta2_z = 3\n");
    CHECK_THROWS_MATCHES(load_summary(in), DataError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("cv_y")));
  }
}
