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

#ifndef CHAINEST_POPULATION_HPP
#define CHAINEST_POPULATION_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace chainest {

/// One population unit: study variable y, first auxiliary x, second
/// auxiliary z.
struct Unit {
  double y;
  double x;
  double z;
};

/// A fixed finite population of (y, x, z) records. Immutable after
/// construction and safe to share across threads. Requires N >= 2 and all
/// values finite.
class FinitePopulation {
 public:
  FinitePopulation(std::vector<Unit> units, std::string label = "");

  std::size_t size() const { return units_.size(); }
  const std::vector<Unit>& units() const { return units_; }
  const std::string& label() const { return label_; }

 private:
  std::vector<Unit> units_;
  std::string label_;
};

/// Every population parameter the estimator and MSE formulas consume.
///
/// S^2 quantities and covariances use divisor N-1; the central moments
/// behind beta1_z / beta2_z use divisor N. beta1_z follows the Pearson
/// convention beta1 = m3^2 / m2^3 (non-negative); beta2_z = m4 / m2^2.
/// sigma_z equals S_z when derived from raw data, but summary files may
/// carry an independent (even mutually inconsistent) value, which is
/// accepted verbatim.
struct PopulationSummary {
  std::size_t n_population = 0;
  double mean_y = 0, mean_x = 0, mean_z = 0;
  double s2_y = 0, s2_x = 0, s2_z = 0;
  double s_xy = 0, s_xz = 0, s_yz = 0;
  double cv_y = 0, cv_x = 0, cv_z = 0;
  double rho_xy = 0, rho_xz = 0, rho_yz = 0;
  double sigma_z = 0;
  double beta1_z = 0, beta2_z = 0;
};

/// Parse a population from CSV with mandatory header `y,x,z`. Row order is
/// preserved. Throws DataError naming the offending row for malformed
/// input, non-finite values, or N < 2.
FinitePopulation load_population(std::istream& in, std::string label = "");
FinitePopulation load_population_file(const std::filesystem::path& path);

/// Write a population as CSV with header `y,x,z`, full double precision.
void write_population(const FinitePopulation& pop, std::ostream& out);
void write_population_file(const FinitePopulation& pop,
                           const std::filesystem::path& path);

/// Compute every summary parameter from raw data. Requires nonzero means
/// (CVs), nonzero variances (correlations), and positive z-variance
/// (beta1/beta2).
PopulationSummary summarize(const FinitePopulation& pop);

/// Parse a summary from a line-oriented `key = value` file (`#` comments
/// allowed). All 13 keys are required:
///   N, mean_y, mean_x, mean_z, cv_y, cv_x, cv_z,
///   rho_xy, rho_xz, rho_yz, sigma_z, beta1_z, beta2_z
/// Given values are taken verbatim; variances and covariances are
/// back-filled from the CVs, means, and correlations. Values are not
/// cross-checked for mutual consistency (see consistency_warnings).
PopulationSummary load_summary(std::istream& in);
PopulationSummary load_summary_file(const std::filesystem::path& path);

/// Write the 13-key summary file at full double precision; round-trips
/// through load_summary exactly.
void write_summary(const PopulationSummary& s, std::ostream& out);
void write_summary_file(const PopulationSummary& s,
                        const std::filesystem::path& path);

/// Optional cross-checks of a summary's internal consistency, e.g.
/// sigma_z vs cv_z * |mean_z|. Inconsistencies are reported as warnings,
/// never errors: published parameter sets are sometimes internally
/// inconsistent and each tabled value is used exactly where its symbol
/// appears.
std::vector<std::string> consistency_warnings(const PopulationSummary& s,
                                              double rel_tol = 1e-6);

}  // namespace chainest

#endif  // CHAINEST_POPULATION_HPP
