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

#ifndef CHAINEST_SIMULATE_HPP
#define CHAINEST_SIMULATE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chainest/design.hpp"
#include "chainest/estimators.hpp"
#include "chainest/mse_theory.hpp"
#include "chainest/population.hpp"

namespace chainest {

/// Target parameters for synthetic population generation. Values are drawn
/// from a trivariate Gaussian whose correlation structure is imposed via a
/// Cholesky factor of the target correlation matrix. The realized summary
/// of the generated rows, not the targets, is what downstream analytics
/// consume.
struct GenSpec {
  std::size_t n_population = 0;
  double mean_y = 0, mean_x = 0, mean_z = 0;
  double cv_y = 0, cv_x = 0, cv_z = 0;
  double rho_xy = 0, rho_xz = 0, rho_yz = 0;
  std::uint64_t seed = 0;
  /// Round values to integers (head-measurement realism). Realized
  /// parameters are always recomputed from the final rows either way.
  bool round_to_int = false;

  /// Checks cvs > 0, means != 0, |rho| <= 1 and positive semi-definiteness
  /// of the 3x3 correlation matrix; throws ValidationError otherwise.
  void validate() const;
};

/// What to do when an estimator hits a degenerate denominator on a drawn
/// sample: fail the whole run, or drop that outcome for that estimator and
/// renormalize over the retained ones.
enum class RejectionPolicy { Error, SkipAndCount };

struct SimConfig {
  std::uint64_t replications = 1;
  std::uint64_t seed = 0;
  RejectionPolicy rejection_policy = RejectionPolicy::SkipAndCount;
  /// Worker threads. Results are bit-identical for any value: replications
  /// are chunked at a fixed width and chunk accumulators merge in index
  /// order.
  unsigned threads = 1;
  /// Max tolerated per-estimator rejection fraction under SkipAndCount;
  /// above it the run aborts with GuardError.
  double rejection_ceiling = 1e-3;
  /// Emit percentage progress to stderr.
  bool progress = false;
};

/// How Tstar rows pick their mixing weight: the population-true optimum
/// alpha_opt(theta_i, K_yz) from the realized summary, or one fixed alpha
/// for all of them.
struct AlphaRule {
  enum class Kind { Optimal, Fixed };
  Kind kind = Kind::Optimal;
  double fixed_value = 0.0;

  static AlphaRule optimal() { return {}; }
  static AlphaRule fixed(double alpha) {
    return {Kind::Fixed, alpha};
  }
};

/// Per-estimator empirical (or exact) moments of the sampling distribution.
struct EstimatorStats {
  EstimatorId estimator = EstimatorId::Ybar;
  double empirical_mean = 0;
  double empirical_bias = 0;  // empirical_mean - Ybar
  double empirical_mse = 0;
  std::optional<double> empirical_pre;  // 100 * base_var / mse
  /// Monte Carlo standard error of empirical_mse (0 for exact results).
  double mse_se = 0;
  std::uint64_t rejected_count = 0;
  std::uint64_t used_count = 0;
};

struct SimResult {
  std::vector<EstimatorStats> estimators;
  std::uint64_t replications_used = 0;
  double base_empirical_var = 0;  // empirical MSE of ybar
  double pop_mean_y = 0;
  DesignSpec design;
  std::uint64_t seed = 0;
};

/// Same statistics computed as exact expectations over all
/// C(N,n') * C(n',n) equiprobable two-phase samples.
struct ExactResult {
  std::vector<EstimatorStats> estimators;
  std::uint64_t outcome_count = 0;
  double base_exact_var = 0;  // exact Var(ybar) under the design
  double pop_mean_y = 0;
  DesignSpec design;
};

/// Generate a synthetic finite population matching the GenSpec targets.
/// Deterministic in the seed.
FinitePopulation generate_population(const GenSpec& spec);

/// Exact enumeration of the two-phase design: iterates every (first-phase
/// subset, second-phase subset) pair in lexicographic order, accumulating
/// with compensated summation. Guarded against combinatorial explosion:
/// throws GuardError when C(N,n') * C(n',n) exceeds max_outcomes.
ExactResult enumerate_exact(const FinitePopulation& pop,
                            const DesignSpec& design,
                            std::span<const EstimatorId> estimators,
                            AlphaRule alpha_rule = AlphaRule::optimal(),
                            RejectionPolicy policy =
                                RejectionPolicy::SkipAndCount,
                            std::uint64_t max_outcomes = 10'000'000);

/// Monte Carlo over cfg.replications independent two-phase draws.
/// Replication r uses the substream derived from (cfg.seed, r), so results
/// do not depend on execution order or thread count.
SimResult run_monte_carlo(const FinitePopulation& pop,
                          const DesignSpec& design,
                          std::span<const EstimatorId> estimators,
                          const SimConfig& cfg,
                          AlphaRule alpha_rule = AlphaRule::optimal());

/// Per-estimator relative deviation of empirical vs analytic MSE and PRE.
struct ComparisonRow {
  EstimatorId estimator = EstimatorId::Ybar;
  double analytic_mse = 0;
  double empirical_mse = 0;
  /// |empirical - analytic| / analytic; absent when analytic is 0 and
  /// empirical is too (census: deviation counts as 0, ratio undefined).
  std::optional<double> mse_rel_dev;
  std::optional<double> analytic_pre;
  std::optional<double> empirical_pre;
  std::optional<double> pre_rel_dev;
  bool flagged = false;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  double tolerance = 0;
  bool any_flagged = false;
};

/// Match empirical rows to analytic rows (Tstar2..7 compare against the
/// single analytic Tstar row) and flag deviations above tolerance. Throws
/// ValidationError if designs differ or an empirical estimator has no
/// analytic counterpart.
ComparisonReport compare(const EvaluationTable& analytic,
                         const SimResult& empirical, double tolerance);
ComparisonReport compare(const EvaluationTable& analytic,
                         const ExactResult& empirical, double tolerance);

// Serialization (text report, CSV, JSON at full precision).
void write_sim_text(const SimResult& r, std::ostream& out);
void write_sim_csv(const SimResult& r, std::ostream& out);
std::string sim_to_json(const SimResult& r);
void write_exact_text(const ExactResult& r, std::ostream& out);
void write_exact_csv(const ExactResult& r, std::ostream& out);
std::string exact_to_json(const ExactResult& r);
void write_comparison_text(const ComparisonReport& r, std::ostream& out);
void write_comparison_csv(const ComparisonReport& r, std::ostream& out);
std::string comparison_to_json(const ComparisonReport& r);

/// Default estimator set for simulation runs: ybar, rd, t1..t7,
/// tstar2..tstar7. (The classical ratio estimator has no analytic MSE row
/// under the two-phase design, so it is opt-in.)
std::vector<EstimatorId> default_simulation_estimators();

}  // namespace chainest

#endif  // CHAINEST_SIMULATE_HPP
