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

#include "chainest/estimators.hpp"

#include <array>
#include <cmath>

#include "chainest/errors.hpp"

namespace chainest {

namespace {

constexpr std::array<std::string_view, 17> kNames = {
    "ybar",   "ratio",  "rd",     "t1",     "t2",     "t3",
    "t4",     "t5",     "t6",     "t7",     "tstar",  "tstar2",
    "tstar3", "tstar4", "tstar5", "tstar6", "tstar7"};

}  // namespace

std::string_view to_string(EstimatorId id) {
  return kNames[static_cast<std::size_t>(id)];
}

std::optional<EstimatorId> estimator_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<EstimatorId>(i);
  }
  return std::nullopt;
}

bool is_chain(EstimatorId id) {
  return id >= EstimatorId::T1 && id <= EstimatorId::T7;
}

bool is_tstar(EstimatorId id) {
  return id >= EstimatorId::Tstar2 && id <= EstimatorId::Tstar7;
}

int chain_index(EstimatorId id) {
  if (is_chain(id)) {
    return static_cast<int>(id) - static_cast<int>(EstimatorId::T1) + 1;
  }
  if (is_tstar(id)) {
    return static_cast<int>(id) - static_cast<int>(EstimatorId::Tstar2) + 2;
  }
  throw ValidationError(std::string("estimator '") +
                        std::string(to_string(id)) +
                        "' has no chain index");
}

AuxTransform transform_for(EstimatorId id, const PopulationSummary& s) {
  AuxTransform t;
  switch (id) {
    case EstimatorId::T1:
      t = {1.0, 0.0, "t1"};
      break;
    case EstimatorId::T2:
      t = {1.0, s.cv_z, "t2"};
      break;
    case EstimatorId::T3:
      t = {s.beta2_z, s.cv_z, "t3"};
      break;
    case EstimatorId::T4:
      t = {s.cv_z, s.beta2_z, "t4"};
      break;
    case EstimatorId::T5:
      t = {1.0, s.sigma_z, "t5"};
      break;
    case EstimatorId::T6:
      t = {s.beta1_z, s.sigma_z, "t6"};
      break;
    case EstimatorId::T7:
      t = {s.beta2_z, s.sigma_z, "t7"};
      break;
    default:
      throw ValidationError(std::string("no auxiliary transform for '") +
                            std::string(to_string(id)) + "'");
  }
  if (t.a == 0.0) {
    throw ValidationError("transform for " + t.label +
                          " has a = 0 after substitution");
  }
  return t;
}

double theta(const AuxTransform& t, double mean_z) {
  const double num = t.a * mean_z;
  const double den = num + t.b;
  if (den == 0.0) {
    throw ValidationError("theta denominator a*Zbar + b is zero");
  }
  return num / den;
}

double classical_ratio(double mean_y, double mean_x, double pop_mean_x) {
  if (mean_x == 0.0) {
    throw ValidationError("classical ratio: sample mean of x is zero");
  }
  return mean_y * (pop_mean_x / mean_x);
}

double two_phase_ratio(double mean_y, double mean_x, double mean_x_first) {
  if (mean_x == 0.0) {
    throw ValidationError("two-phase ratio: sample mean of x is zero");
  }
  return mean_y * (mean_x_first / mean_x);
}

std::optional<double> try_chain_estimate(const TwoPhaseSample& sample,
                                         double pop_mean_z,
                                         const AuxTransform& t) {
  if (sample.mean_x_second == 0.0) return std::nullopt;
  const double den = t.a * sample.mean_z_first + t.b;
  if (den == 0.0) return std::nullopt;
  const double num = t.a * pop_mean_z + t.b;
  return sample.mean_y_second *
         (sample.mean_x_first / sample.mean_x_second) * (num / den);
}

double chain_estimate(const TwoPhaseSample& sample, double pop_mean_z,
                      const AuxTransform& t) {
  if (sample.mean_x_second == 0.0) {
    throw ValidationError("chain estimate: sample mean of x is zero");
  }
  if (t.a * sample.mean_z_first + t.b == 0.0) {
    throw ValidationError("chain estimate: transformed zbar' is zero for " +
                          t.label);
  }
  return *try_chain_estimate(sample, pop_mean_z, t);
}

namespace {

// Blend with exact endpoints: alpha = 1 returns t1 itself, alpha = 0
// returns ti itself, and equal inputs pass through unchanged (census
// samples stay exactly Ybar).
double blend(double t1_value, double ti_value, double alpha) {
  if (alpha == 1.0) return t1_value;
  if (alpha == 0.0 || t1_value == ti_value) return ti_value;
  return alpha * t1_value + (1.0 - alpha) * ti_value;
}

}  // namespace

std::optional<double> try_combined_estimate(const TwoPhaseSample& sample,
                                            double pop_mean_z,
                                            const AuxTransform& t,
                                            double alpha) {
  static const AuxTransform kPlain{1.0, 0.0, "t1"};
  const auto t1_value = try_chain_estimate(sample, pop_mean_z, kPlain);
  if (!t1_value) return std::nullopt;
  const auto ti_value = try_chain_estimate(sample, pop_mean_z, t);
  if (!ti_value) return std::nullopt;
  return blend(*t1_value, *ti_value, alpha);
}

double combined_estimate(const TwoPhaseSample& sample, double pop_mean_z,
                         const AuxTransform& t, double alpha) {
  static const AuxTransform kPlain{1.0, 0.0, "t1"};
  const double t1_value = chain_estimate(sample, pop_mean_z, kPlain);
  const double ti_value = chain_estimate(sample, pop_mean_z, t);
  return blend(t1_value, ti_value, alpha);
}

double k_yz(const PopulationSummary& s) {
  if (s.cv_z == 0.0) {
    throw ValidationError("K_yz undefined: C_z is zero");
  }
  return s.rho_yz * s.cv_y / s.cv_z;
}

double alpha_opt(double theta, double k_yz) {
  if (theta == 1.0) {
    throw ValidationError("alpha_opt undefined at theta = 1: the mixture "
                          "direction vanishes (skip combination)");
  }
  return (k_yz - theta) / (1.0 - theta);
}

}  // namespace chainest
