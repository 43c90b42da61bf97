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

#ifndef CHAINEST_ESTIMATORS_HPP
#define CHAINEST_ESTIMATORS_HPP

#include <optional>
#include <string>
#include <string_view>

#include "chainest/design.hpp"
#include "chainest/population.hpp"

namespace chainest {

/// Every point estimator of the population mean this toolkit evaluates.
///
///   Ybar    plain sample mean ybar
///   Ratio   classical ratio estimator (ybar/xbar) * Xbar
///   Rd      two-phase ratio estimator (ybar/xbar) * xbar'
///   T1..T7  chain ratio family with the tabled (a, b) choices
///   Tstar   the alpha-combined estimator at its optimum (analytic row;
///           the minimum MSE does not depend on which Ti is combined)
///   Tstar2..Tstar7  alpha-combined estimators alpha*t1 + (1-alpha)*ti
enum class EstimatorId {
  Ybar,
  Ratio,
  Rd,
  T1,
  T2,
  T3,
  T4,
  T5,
  T6,
  T7,
  Tstar,
  Tstar2,
  Tstar3,
  Tstar4,
  Tstar5,
  Tstar6,
  Tstar7,
};

/// CLI-facing name: ybar, ratio, rd, t1..t7, tstar, tstar2..tstar7.
std::string_view to_string(EstimatorId id);
std::optional<EstimatorId> estimator_from_string(std::string_view name);

/// True for T1..T7.
bool is_chain(EstimatorId id);
/// True for Tstar2..Tstar7 (not the generic Tstar).
bool is_tstar(EstimatorId id);
/// For T1..T7 returns 1..7; for Tstar2..Tstar7 returns 2..7.
int chain_index(EstimatorId id);

/// Affine transform z -> a*z + b of the second auxiliary variable,
/// selecting one member of the chain estimator family. Requires a != 0 and
/// a*Zbar + b != 0 for the population it is used with.
struct AuxTransform {
  double a = 1.0;
  double b = 0.0;
  std::string label = "custom";  // "t1".."t7" or "custom"
};

/// The tabled (a, b) choice for T1..T7:
///   T1 (1, 0)            T2 (1, C_z)        T3 (beta2(z), C_z)
///   T4 (C_z, beta2(z))   T5 (1, sigma_z)    T6 (beta1(z), sigma_z)
///   T7 (beta2(z), sigma_z)
/// Throws ValidationError if the substituted a is zero (e.g. T6 on a
/// population with beta1(z) = 0).
AuxTransform transform_for(EstimatorId id, const PopulationSummary& summary);

/// Shrinkage factor theta = a*Zbar / (a*Zbar + b). Equals 1 whenever b = 0.
/// Throws ValidationError on a zero denominator.
double theta(const AuxTransform& t, double mean_z);

/// (ybar/xbar) * Xbar. Throws ValidationError when xbar = 0.
double classical_ratio(double mean_y, double mean_x, double pop_mean_x);

/// (ybar/xbar) * xbar'. Throws ValidationError when xbar = 0.
double two_phase_ratio(double mean_y, double mean_x, double mean_x_first);

/// Chain ratio estimate ybar * (xbar'/xbar) * ((a*Zbar+b)/(a*zbar'+b)).
/// With (a, b) = (1, 0) this is the plain chain ratio ybar * (xbar'/xbar) *
/// (Zbar/zbar'). Throws ValidationError on a degenerate denominator; the
/// simulation layer uses try_chain_estimate to apply its own rejection
/// policy instead.
double chain_estimate(const TwoPhaseSample& sample, double pop_mean_z,
                      const AuxTransform& t);
std::optional<double> try_chain_estimate(const TwoPhaseSample& sample,
                                         double pop_mean_z,
                                         const AuxTransform& t);

/// alpha * t1 + (1 - alpha) * ti on the same sample. alpha is an
/// unconstrained real. At alpha = 1 the result is sample-identical to t1,
/// at alpha = 0 to ti.
double combined_estimate(const TwoPhaseSample& sample, double pop_mean_z,
                         const AuxTransform& t, double alpha);
std::optional<double> try_combined_estimate(const TwoPhaseSample& sample,
                                            double pop_mean_z,
                                            const AuxTransform& t,
                                            double alpha);

/// K_yz = rho_yz * C_y / C_z.
double k_yz(const PopulationSummary& summary);

/// Optimal mixing weight alpha_opt = (K_yz - theta) / (1 - theta).
/// Throws ValidationError at theta = 1 (T1's theta), where the mixture
/// direction vanishes and no combination is possible.
double alpha_opt(double theta, double k_yz);

}  // namespace chainest

#endif  // CHAINEST_ESTIMATORS_HPP
