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

#ifndef CHAINEST_MSE_THEORY_HPP
#define CHAINEST_MSE_THEORY_HPP

#include <iosfwd>
#include <optional>
#include <vector>

#include "chainest/design.hpp"
#include "chainest/estimators.hpp"
#include "chainest/population.hpp"

namespace chainest {

// First-order (O(1/n)) mean squared errors of the two-phase estimators,
// in squared y-units. All are pure functions of the population summary and
// the design factors.

/// Var(ybar) = f1 * S_y^2 = Ybar^2 * f1 * C_y^2; the PRE base.
double var_ybar(const PopulationSummary& s, const SampleFactors& f);

/// MSE(rd) = Ybar^2 [f1 C_y^2 + f3 (C_x^2 - 2 rho_yx C_y C_x)].
double mse_two_phase_ratio(const PopulationSummary& s, const SampleFactors& f);

/// MSE of a chain estimator with shrinkage factor theta:
/// Ybar^2 [f1 C_y^2 + f2 (theta^2 C_z^2 - 2 theta rho_yz C_y C_z)
///         + f3 (C_x^2 - 2 rho_yx C_y C_x)].
/// theta = 1 gives the plain chain ratio (t1); theta = 0 reduces to
/// mse_two_phase_ratio.
double mse_chain(const PopulationSummary& s, const SampleFactors& f,
                 double theta);

/// MSE of the alpha-combined estimator with effective z-exponent
/// g = alpha + theta (1 - alpha):
/// Ybar^2 [f1 C_y^2 + f3 C_x^2 + g^2 f2 C_z^2
///         - 2 f3 rho_yx C_y C_x - 2 g f2 rho_yz C_y C_z].
double mse_combined(const PopulationSummary& s, const SampleFactors& f,
                    double theta, double alpha);

/// Minimum MSE of the combined estimator over alpha, independent of theta:
/// Ybar^2 [f1 C_y^2 + f3 (C_x^2 - 2 rho_yx C_y C_x) - f2 rho_yz^2 C_y^2].
double min_mse_combined(const PopulationSummary& s, const SampleFactors& f);

/// MSE(t_theta) - min MSE = f2 (theta C_z - rho_yz C_y)^2 Ybar^2 >= 0.
double efficiency_gap(const PopulationSummary& s, const SampleFactors& f,
                      double theta);

/// One row of the analytic comparison table. theta is absent for ybar, rd
/// and the combined-optimum row; pre is absent when the base variance is
/// zero (census design).
struct EvaluationRow {
  EstimatorId estimator = EstimatorId::Ybar;
  std::optional<double> theta;
  double mse = 0;
  std::optional<double> pre;  // percent: 100 * Var(ybar) / mse
};

/// Analytic MSE/PRE table for one design: rows ybar, rd, t1..t7, tstar.
struct EvaluationTable {
  std::vector<EvaluationRow> rows;
  double base_variance = 0;  // Var(ybar)
  SampleFactors factors;
  DesignSpec design;

  const EvaluationRow* find(EstimatorId id) const;
};

/// Build the full analytic table. Throws if the summary cannot supply a
/// required transform (propagated from transform_for / theta). On a census
/// design every MSE is zero and PREs are marked not applicable.
EvaluationTable analytic_table(const PopulationSummary& s,
                               const DesignSpec& design);

/// Serialization: aligned text (4-decimal presentation), CSV, and JSON
/// (full double precision).
void write_table_text(const EvaluationTable& t, std::ostream& out);
void write_table_csv(const EvaluationTable& t, std::ostream& out);
std::string table_to_json(const EvaluationTable& t);

}  // namespace chainest

#endif  // CHAINEST_MSE_THEORY_HPP
