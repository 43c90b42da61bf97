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

#include "chainest/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "chainest/accumulate.hpp"
#include "chainest/errors.hpp"
#include "chainest/rng.hpp"

namespace chainest {

namespace {

// ---------------------------------------------------------------------
// Synthetic population generation
// ---------------------------------------------------------------------

// Lower-triangular Cholesky factor of the 3x3 correlation matrix for
// variable order (y, x, z). Pivots may be zero for singular PSD targets.
struct Chol3 {
  double l11, l21, l22, l31, l32, l33;
};

Chol3 cholesky3(double rho_xy, double rho_xz, double rho_yz) {
  const double l11 = 1.0;
  const double l21 = rho_xy;
  const double d22 = 1.0 - l21 * l21;
  const double l22 = d22 > 0.0 ? std::sqrt(d22) : 0.0;
  const double l31 = rho_yz;
  const double l32 = l22 > 0.0 ? (rho_xz - l21 * l31) / l22 : 0.0;
  const double d33 = 1.0 - l31 * l31 - l32 * l32;
  const double l33 = d33 > 0.0 ? std::sqrt(d33) : 0.0;
  return {l11, l21, l22, l31, l32, l33};
}

}  // namespace

void GenSpec::validate() const {
  if (n_population < 2) {
    throw ValidationError("generator: need N >= 2");
  }
  if (mean_y == 0.0 || mean_x == 0.0 || mean_z == 0.0) {
    throw ValidationError("generator: target means must be nonzero");
  }
  if (cv_y <= 0.0 || cv_x <= 0.0 || cv_z <= 0.0) {
    throw ValidationError("generator: target CVs must be > 0");
  }
  for (double rho : {rho_xy, rho_xz, rho_yz}) {
    if (std::abs(rho) > 1.0) {
      throw ValidationError("generator: |rho| must be <= 1");
    }
  }
  // PSD test for a 3x3 correlation matrix with unit diagonal: all 2x2
  // principal minors are 1 - rho^2 >= 0 (checked above), so PSD reduces
  // to det >= 0.
  const double det = 1.0 + 2.0 * rho_xy * rho_xz * rho_yz - rho_xy * rho_xy -
                     rho_xz * rho_xz - rho_yz * rho_yz;
  if (det < -1e-12) {
    std::ostringstream os;
    os << "generator: target correlation matrix (rho_xy = " << rho_xy
       << ", rho_xz = " << rho_xz << ", rho_yz = " << rho_yz
       << ") is not positive semi-definite (det = " << det << ")";
    throw ValidationError(os.str());
  }
}

FinitePopulation generate_population(const GenSpec& spec) {
  spec.validate();
  const Chol3 L = cholesky3(spec.rho_xy, spec.rho_xz, spec.rho_yz);
  const double sd_y = spec.cv_y * std::abs(spec.mean_y);
  const double sd_x = spec.cv_x * std::abs(spec.mean_x);
  const double sd_z = spec.cv_z * std::abs(spec.mean_z);

  SplitMix64 rng = SplitMix64::substream(spec.seed, 0);
  std::vector<Unit> units;
  units.reserve(spec.n_population);
  for (std::size_t i = 0; i < spec.n_population; ++i) {
    const auto [u1, u2] = rng.next_normal_pair();
    const auto [u3, unused] = rng.next_normal_pair();
    const double wy = L.l11 * u1;
    const double wx = L.l21 * u1 + L.l22 * u2;
    const double wz = L.l31 * u1 + L.l32 * u2 + L.l33 * u3;
    Unit u{spec.mean_y + sd_y * wy, spec.mean_x + sd_x * wx,
           spec.mean_z + sd_z * wz};
    if (spec.round_to_int) {
      u.y = std::round(u.y);
      u.x = std::round(u.x);
      u.z = std::round(u.z);
    }
    units.push_back(u);
  }
  return FinitePopulation(std::move(units), "synthetic");
}

// ---------------------------------------------------------------------
// Shared estimator evaluation
// ---------------------------------------------------------------------

namespace {

struct Plan {
  EstimatorId id;
  AuxTransform transform;  // chain / tstar only
  double alpha = 0.0;      // tstar only
};

std::vector<Plan> build_plans(std::span<const EstimatorId> ids,
                              const PopulationSummary& summary,
                              const AlphaRule& rule) {
  std::vector<Plan> plans;
  plans.reserve(ids.size());
  for (EstimatorId id : ids) {
    Plan p;
    p.id = id;
    if (id == EstimatorId::Tstar) {
      throw ValidationError("'tstar' is the analytic optimum row; simulate "
                            "tstar2..tstar7 instead");
    }
    if (is_chain(id)) {
      p.transform = transform_for(id, summary);
    } else if (is_tstar(id)) {
      const auto base = static_cast<EstimatorId>(
          static_cast<int>(EstimatorId::T1) + chain_index(id) - 1);
      p.transform = transform_for(base, summary);
      if (rule.kind == AlphaRule::Kind::Fixed) {
        p.alpha = rule.fixed_value;
      } else {
        p.alpha = alpha_opt(theta(p.transform, summary.mean_z),
                            k_yz(summary));
      }
    }
    plans.push_back(std::move(p));
  }
  return plans;
}

std::optional<double> evaluate_plan(const Plan& plan,
                                    const TwoPhaseSample& sample,
                                    double pop_mean_x, double pop_mean_z) {
  switch (plan.id) {
    case EstimatorId::Ybar:
      return sample.mean_y_second;
    case EstimatorId::Ratio:
      if (sample.mean_x_second == 0.0) return std::nullopt;
      return sample.mean_y_second * (pop_mean_x / sample.mean_x_second);
    case EstimatorId::Rd:
      if (sample.mean_x_second == 0.0) return std::nullopt;
      return sample.mean_y_second *
             (sample.mean_x_first / sample.mean_x_second);
    default:
      break;
  }
  if (is_chain(plan.id)) {
    return try_chain_estimate(sample, pop_mean_z, plan.transform);
  }
  return try_combined_estimate(sample, pop_mean_z, plan.transform,
                               plan.alpha);
}

// Running moments of one estimator's sampling distribution.
struct Accum {
  KahanSum sum_t;   // estimates
  KahanSum sum_d;   // squared errors (t - Ybar)^2
  KahanSum sum_d2;  // fourth-power errors, for the MC SE of the MSE
  std::uint64_t used = 0;
  std::uint64_t rejected = 0;

  void add(double t, double pop_mean_y) {
    const double d = t - pop_mean_y;
    const double d2 = d * d;
    sum_t.add(t);
    sum_d.add(d2);
    sum_d2.add(d2 * d2);
    ++used;
  }

  void merge(const Accum& o) {
    sum_t.merge(o.sum_t);
    sum_d.merge(o.sum_d);
    sum_d2.merge(o.sum_d2);
    used += o.used;
    rejected += o.rejected;
  }
};

EstimatorStats finalize(EstimatorId id, const Accum& a, double pop_mean_y,
                        double base_var, bool with_se) {
  EstimatorStats st;
  st.estimator = id;
  st.rejected_count = a.rejected;
  st.used_count = a.used;
  if (a.used == 0) {
    return st;
  }
  const double n = static_cast<double>(a.used);
  st.empirical_mean = a.sum_t.value() / n;
  st.empirical_bias = st.empirical_mean - pop_mean_y;
  st.empirical_mse = a.sum_d.value() / n;
  if (base_var != 0.0 && st.empirical_mse != 0.0) {
    st.empirical_pre = 100.0 * base_var / st.empirical_mse;
  }
  if (with_se) {
    const double m1 = st.empirical_mse;
    const double m2 = a.sum_d2.value() / n;
    st.mse_se = std::sqrt(std::max(0.0, m2 - m1 * m1) / n);
  }
  return st;
}

std::string design_string(const DesignSpec& d) {
  return "N = " + std::to_string(d.n_population) +
         ", n' = " + std::to_string(d.n_first) +
         ", n = " + std::to_string(d.n_second);
}

}  // namespace

// ---------------------------------------------------------------------
// Exact enumeration
// ---------------------------------------------------------------------

namespace {

// Advance a k-subset of {0..n-1} in lexicographic order; false at the end.
bool next_combination(std::vector<std::uint32_t>& c, std::uint32_t n) {
  const auto k = static_cast<std::uint32_t>(c.size());
  for (std::uint32_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::uint32_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// C(n, k) capped at `cap`; returns cap + 1 once the count passes the cap.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k,
                              std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // The running product is C(n-k+i, i), so this division is exact.
    result = result * (n - k + i) / i;
    if (result > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(result);
}

}  // namespace

ExactResult enumerate_exact(const FinitePopulation& pop,
                            const DesignSpec& design,
                            std::span<const EstimatorId> estimators,
                            AlphaRule alpha_rule, RejectionPolicy policy,
                            std::uint64_t max_outcomes) {
  design.validate();
  if (design.n_population != pop.size()) {
    throw ValidationError("design N does not match population size");
  }

  const std::uint64_t first_count =
      binomial_capped(design.n_population, design.n_first, max_outcomes);
  const std::uint64_t second_count =
      binomial_capped(design.n_first, design.n_second, max_outcomes);
  if (first_count > max_outcomes || second_count > max_outcomes ||
      first_count > max_outcomes / second_count) {
    throw GuardError(
        "enumeration would exceed the outcome guard of " +
        std::to_string(max_outcomes) + " (design " + design_string(design) +
        ")");
  }
  const std::uint64_t outcome_count = first_count * second_count;

  const PopulationSummary summary = summarize(pop);
  const std::vector<Plan> plans = build_plans(estimators, summary, alpha_rule);

  const auto N = static_cast<std::uint32_t>(design.n_population);
  const auto np = static_cast<std::uint32_t>(design.n_first);
  const auto n = static_cast<std::uint32_t>(design.n_second);
  const std::vector<Unit>& units = pop.units();

  std::vector<Accum> accums(plans.size());
  Accum base;  // plain ybar, always tracked

  std::vector<std::uint32_t> first(np);
  std::iota(first.begin(), first.end(), 0u);
  std::vector<double> fy(np), fx(np);
  std::vector<std::uint32_t> second(n);

  TwoPhaseSample sample;
  do {
    double sum_x1 = 0.0, sum_z1 = 0.0;
    for (std::uint32_t i = 0; i < np; ++i) {
      const Unit& u = units[first[i]];
      fy[i] = u.y;
      fx[i] = u.x;
      sum_x1 += u.x;
      sum_z1 += u.z;
    }
    sample.mean_x_first = sum_x1 / np;
    sample.mean_z_first = sum_z1 / np;

    std::iota(second.begin(), second.end(), 0u);
    do {
      double sum_y2 = 0.0, sum_x2 = 0.0;
      for (std::uint32_t pos : second) {
        sum_y2 += fy[pos];
        sum_x2 += fx[pos];
      }
      sample.mean_y_second = sum_y2 / n;
      sample.mean_x_second = sum_x2 / n;

      base.add(sample.mean_y_second, summary.mean_y);
      for (std::size_t p = 0; p < plans.size(); ++p) {
        const auto value =
            evaluate_plan(plans[p], sample, summary.mean_x, summary.mean_z);
        if (value) {
          accums[p].add(*value, summary.mean_y);
        } else if (policy == RejectionPolicy::Error) {
          throw DataError("degenerate outcome for estimator '" +
                          std::string(to_string(plans[p].id)) +
                          "' during enumeration");
        } else {
          ++accums[p].rejected;
        }
      }
    } while (next_combination(second, np));
  } while (next_combination(first, N));

  ExactResult result;
  result.design = design;
  result.outcome_count = outcome_count;
  result.pop_mean_y = summary.mean_y;
  result.base_exact_var = base.sum_d.value() / static_cast<double>(base.used);
  for (std::size_t p = 0; p < plans.size(); ++p) {
    result.estimators.push_back(finalize(plans[p].id, accums[p],
                                         summary.mean_y,
                                         result.base_exact_var,
                                         /*with_se=*/false));
  }
  return result;
}

// ---------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------

namespace {

// Replications are grouped into fixed-width chunks. Chunk accumulators
// merge in chunk-index order, so results are bit-identical for any thread
// count.
constexpr std::uint64_t kChunkReps = 4096;

struct Chunk {
  std::vector<Accum> accums;
  Accum base;
};

}  // namespace

SimResult run_monte_carlo(const FinitePopulation& pop,
                          const DesignSpec& design,
                          std::span<const EstimatorId> estimators,
                          const SimConfig& cfg, AlphaRule alpha_rule) {
  design.validate();
  if (design.n_population != pop.size()) {
    throw ValidationError("design N = " + std::to_string(design.n_population) +
                          " does not match population size " +
                          std::to_string(pop.size()));
  }
  if (cfg.replications < 1) {
    throw ValidationError("replications must be >= 1");
  }

  // Everything that can throw happens before workers spawn; the drawer
  // constructor re-checks conditions validated here.
  const PopulationSummary summary = summarize(pop);
  const std::vector<Plan> plans = build_plans(estimators, summary, alpha_rule);

  const std::uint64_t reps = cfg.replications;
  const std::uint64_t n_chunks = (reps + kChunkReps - 1) / kChunkReps;
  std::vector<Chunk> chunks(n_chunks);
  for (Chunk& c : chunks) c.accums.resize(plans.size());

  std::atomic<std::uint64_t> next_chunk{0};
  std::atomic<std::uint64_t> chunks_done{0};

  const auto worker = [&]() {
    TwoPhaseDrawer drawer(pop, design);
    TwoPhaseSample sample;
    for (;;) {
      const std::uint64_t ci = next_chunk.fetch_add(1);
      if (ci >= n_chunks) break;
      Chunk& chunk = chunks[ci];
      const std::uint64_t lo = ci * kChunkReps;
      const std::uint64_t hi = std::min(reps, lo + kChunkReps);
      for (std::uint64_t r = lo; r < hi; ++r) {
        SplitMix64 rng = SplitMix64::substream(cfg.seed, r);
        drawer.draw(rng, sample);
        chunk.base.add(sample.mean_y_second, summary.mean_y);
        for (std::size_t p = 0; p < plans.size(); ++p) {
          const auto value = evaluate_plan(plans[p], sample, summary.mean_x,
                                           summary.mean_z);
          if (value) {
            chunk.accums[p].add(*value, summary.mean_y);
          } else {
            ++chunk.accums[p].rejected;
          }
        }
      }
      const std::uint64_t done = chunks_done.fetch_add(1) + 1;
      if (cfg.progress &&
          done * 10 / n_chunks != (done - 1) * 10 / n_chunks) {
        std::cerr << "[chainest] monte carlo: "
                  << (done * 100 / n_chunks) << "%\n";
      }
    }
  };

  const unsigned thread_count = std::max(1u, cfg.threads);
  if (thread_count == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (unsigned t = 0; t < thread_count; ++t) {
      threads.emplace_back(worker);
    }
    for (std::thread& t : threads) t.join();
  }

  // Order-fixed merge.
  std::vector<Accum> accums(plans.size());
  Accum base;
  for (const Chunk& chunk : chunks) {
    base.merge(chunk.base);
    for (std::size_t p = 0; p < plans.size(); ++p) {
      accums[p].merge(chunk.accums[p]);
    }
  }

  for (std::size_t p = 0; p < plans.size(); ++p) {
    if (accums[p].rejected == 0) continue;
    if (cfg.rejection_policy == RejectionPolicy::Error) {
      throw DataError("degenerate outcome for estimator '" +
                      std::string(to_string(plans[p].id)) +
                      "' during Monte Carlo");
    }
    const double rate = static_cast<double>(accums[p].rejected) /
                        static_cast<double>(reps);
    if (rate > cfg.rejection_ceiling) {
      std::ostringstream os;
      os << "rejection rate " << rate << " for estimator '"
         << to_string(plans[p].id) << "' exceeds the ceiling "
         << cfg.rejection_ceiling
         << "; the population/transform pairing is pathological";
      throw GuardError(os.str());
    }
  }

  SimResult result;
  result.design = design;
  result.seed = cfg.seed;
  result.replications_used = reps;
  result.pop_mean_y = summary.mean_y;
  result.base_empirical_var =
      base.sum_d.value() / static_cast<double>(base.used);
  for (std::size_t p = 0; p < plans.size(); ++p) {
    result.estimators.push_back(finalize(plans[p].id, accums[p],
                                         summary.mean_y,
                                         result.base_empirical_var,
                                         /*with_se=*/true));
  }
  return result;
}

// ---------------------------------------------------------------------
// Comparison
// ---------------------------------------------------------------------

namespace {

ComparisonReport compare_impl(const EvaluationTable& analytic,
                              const std::vector<EstimatorStats>& empirical,
                              const DesignSpec& design, double tolerance) {
  if (analytic.design.n_population != design.n_population ||
      analytic.design.n_first != design.n_first ||
      analytic.design.n_second != design.n_second) {
    throw ValidationError("comparison: analytic table and empirical run use "
                          "different designs");
  }

  ComparisonReport report;
  report.tolerance = tolerance;
  for (const EstimatorStats& st : empirical) {
    // Combined estimators all share the analytic minimum-MSE row.
    const EstimatorId key =
        is_tstar(st.estimator) ? EstimatorId::Tstar : st.estimator;
    const EvaluationRow* row = analytic.find(key);
    if (row == nullptr) {
      throw ValidationError("comparison: no analytic row for estimator '" +
                            std::string(to_string(st.estimator)) + "'");
    }

    ComparisonRow out;
    out.estimator = st.estimator;
    out.analytic_mse = row->mse;
    out.empirical_mse = st.empirical_mse;
    out.analytic_pre = row->pre;
    out.empirical_pre = st.empirical_pre;
    if (row->mse != 0.0) {
      out.mse_rel_dev = std::abs(st.empirical_mse - row->mse) / row->mse;
      out.flagged = *out.mse_rel_dev > tolerance;
    } else if (st.empirical_mse != 0.0) {
      out.flagged = true;  // analytic zero, empirical nonzero
    }
    if (row->pre && st.empirical_pre) {
      out.pre_rel_dev = std::abs(*st.empirical_pre - *row->pre) / *row->pre;
      out.flagged = out.flagged || *out.pre_rel_dev > tolerance;
    }
    report.any_flagged = report.any_flagged || out.flagged;
    report.rows.push_back(out);
  }
  return report;
}

}  // namespace

ComparisonReport compare(const EvaluationTable& analytic,
                         const SimResult& empirical, double tolerance) {
  return compare_impl(analytic, empirical.estimators, empirical.design,
                      tolerance);
}

ComparisonReport compare(const EvaluationTable& analytic,
                         const ExactResult& empirical, double tolerance) {
  return compare_impl(analytic, empirical.estimators, empirical.design,
                      tolerance);
}

// ---------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------

namespace {

std::string fixed6(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << v;
  return os.str();
}

std::string full(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_stats_text(const std::vector<EstimatorStats>& stats,
                      std::ostream& out) {
  out << std::setw(10) << std::left << "estimator" << std::right
      << std::setw(14) << "mean" << std::setw(14) << "bias" << std::setw(14)
      << "mse" << std::setw(12) << "pre" << std::setw(10) << "rejected"
      << "\n";
  for (const EstimatorStats& st : stats) {
    out << std::setw(10) << std::left << to_string(st.estimator)
        << std::right << std::setw(14) << fixed6(st.empirical_mean)
        << std::setw(14) << fixed6(st.empirical_bias) << std::setw(14)
        << fixed6(st.empirical_mse) << std::setw(12)
        << (st.empirical_pre ? fixed6(*st.empirical_pre) : std::string("n/a"))
        << std::setw(10) << st.rejected_count << "\n";
  }
}

void write_stats_csv(const std::vector<EstimatorStats>& stats,
                     std::ostream& out) {
  out << "estimator,mean,bias,mse,pre,mse_se,rejected,used\n";
  for (const EstimatorStats& st : stats) {
    out << to_string(st.estimator) << ',' << full(st.empirical_mean) << ','
        << full(st.empirical_bias) << ',' << full(st.empirical_mse) << ','
        << (st.empirical_pre ? full(*st.empirical_pre) : std::string())
        << ',' << full(st.mse_se) << ',' << st.rejected_count << ','
        << st.used_count << '\n';
  }
}

nlohmann::json stats_to_json(const std::vector<EstimatorStats>& stats) {
  nlohmann::json rows = nlohmann::json::array();
  for (const EstimatorStats& st : stats) {
    nlohmann::json r;
    r["estimator"] = to_string(st.estimator);
    r["mean"] = st.empirical_mean;
    r["bias"] = st.empirical_bias;
    r["mse"] = st.empirical_mse;
    if (st.empirical_pre) {
      r["pre"] = *st.empirical_pre;
    } else {
      r["pre"] = nullptr;
    }
    r["mse_se"] = st.mse_se;
    r["rejected"] = st.rejected_count;
    r["used"] = st.used_count;
    rows.push_back(std::move(r));
  }
  return rows;
}

nlohmann::json design_to_json(const DesignSpec& d) {
  return {{"N", d.n_population}, {"nprime", d.n_first}, {"n", d.n_second}};
}

}  // namespace

void write_sim_text(const SimResult& r, std::ostream& out) {
  out << "Monte Carlo: " << design_string(r.design)
      << ", replications = " << r.replications_used << ", seed = " << r.seed
      << "\n";
  out << "Empirical Var(ybar) = " << fixed6(r.base_empirical_var) << "\n\n";
  write_stats_text(r.estimators, out);
}

void write_sim_csv(const SimResult& r, std::ostream& out) {
  write_stats_csv(r.estimators, out);
}

std::string sim_to_json(const SimResult& r) {
  nlohmann::json j;
  j["design"] = design_to_json(r.design);
  j["replications"] = r.replications_used;
  j["seed"] = r.seed;
  j["base_empirical_var"] = r.base_empirical_var;
  j["pop_mean_y"] = r.pop_mean_y;
  j["estimators"] = stats_to_json(r.estimators);
  return j.dump(2);
}

void write_exact_text(const ExactResult& r, std::ostream& out) {
  out << "Exact enumeration: " << design_string(r.design)
      << ", outcomes = " << r.outcome_count << "\n";
  out << "Exact Var(ybar) = " << fixed6(r.base_exact_var) << "\n\n";
  write_stats_text(r.estimators, out);
}

void write_exact_csv(const ExactResult& r, std::ostream& out) {
  write_stats_csv(r.estimators, out);
}

std::string exact_to_json(const ExactResult& r) {
  nlohmann::json j;
  j["design"] = design_to_json(r.design);
  j["outcomes"] = r.outcome_count;
  j["base_exact_var"] = r.base_exact_var;
  j["pop_mean_y"] = r.pop_mean_y;
  j["estimators"] = stats_to_json(r.estimators);
  return j.dump(2);
}

void write_comparison_text(const ComparisonReport& r, std::ostream& out) {
  out << "Comparison (tolerance " << fixed6(r.tolerance) << "):\n";
  out << std::setw(10) << std::left << "estimator" << std::right
      << std::setw(15) << "analytic_mse" << std::setw(15) << "empirical_mse"
      << std::setw(12) << "rel_dev" << std::setw(8) << "flag" << "\n";
  for (const ComparisonRow& row : r.rows) {
    out << std::setw(10) << std::left << to_string(row.estimator)
        << std::right << std::setw(15) << fixed6(row.analytic_mse)
        << std::setw(15) << fixed6(row.empirical_mse) << std::setw(12)
        << (row.mse_rel_dev ? fixed6(*row.mse_rel_dev) : std::string("n/a"))
        << std::setw(8) << (row.flagged ? "FLAG" : "ok") << "\n";
  }
}

void write_comparison_csv(const ComparisonReport& r, std::ostream& out) {
  out << "estimator,analytic_mse,empirical_mse,mse_rel_dev,analytic_pre,"
         "empirical_pre,pre_rel_dev,flagged\n";
  for (const ComparisonRow& row : r.rows) {
    out << to_string(row.estimator) << ',' << full(row.analytic_mse) << ','
        << full(row.empirical_mse) << ','
        << (row.mse_rel_dev ? full(*row.mse_rel_dev) : std::string()) << ','
        << (row.analytic_pre ? full(*row.analytic_pre) : std::string())
        << ','
        << (row.empirical_pre ? full(*row.empirical_pre) : std::string())
        << ','
        << (row.pre_rel_dev ? full(*row.pre_rel_dev) : std::string()) << ','
        << (row.flagged ? 1 : 0) << '\n';
  }
}

std::string comparison_to_json(const ComparisonReport& r) {
  nlohmann::json j;
  j["tolerance"] = r.tolerance;
  j["any_flagged"] = r.any_flagged;
  nlohmann::json rows = nlohmann::json::array();
  for (const ComparisonRow& row : r.rows) {
    nlohmann::json jr;
    jr["estimator"] = to_string(row.estimator);
    jr["analytic_mse"] = row.analytic_mse;
    jr["empirical_mse"] = row.empirical_mse;
    jr["mse_rel_dev"] =
        row.mse_rel_dev ? nlohmann::json(*row.mse_rel_dev) : nullptr;
    jr["analytic_pre"] =
        row.analytic_pre ? nlohmann::json(*row.analytic_pre) : nullptr;
    jr["empirical_pre"] =
        row.empirical_pre ? nlohmann::json(*row.empirical_pre) : nullptr;
    jr["pre_rel_dev"] =
        row.pre_rel_dev ? nlohmann::json(*row.pre_rel_dev) : nullptr;
    jr["flagged"] = row.flagged;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j.dump(2);
}

std::vector<EstimatorId> default_simulation_estimators() {
  return {EstimatorId::Ybar,   EstimatorId::Rd,     EstimatorId::T1,
          EstimatorId::T2,     EstimatorId::T3,     EstimatorId::T4,
          EstimatorId::T5,     EstimatorId::T6,     EstimatorId::T7,
          EstimatorId::Tstar2, EstimatorId::Tstar3, EstimatorId::Tstar4,
          EstimatorId::Tstar5, EstimatorId::Tstar6, EstimatorId::Tstar7};
}

}  // namespace chainest
