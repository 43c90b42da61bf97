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

#include "chainest/mse_theory.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "chainest/errors.hpp"

namespace chainest {

double var_ybar(const PopulationSummary& s, const SampleFactors& f) {
  return s.mean_y * s.mean_y * f.f1 * s.cv_y * s.cv_y;
}

double mse_two_phase_ratio(const PopulationSummary& s,
                           const SampleFactors& f) {
  const double x_term =
      s.cv_x * s.cv_x - 2.0 * s.rho_xy * s.cv_y * s.cv_x;
  return s.mean_y * s.mean_y * (f.f1 * s.cv_y * s.cv_y + f.f3 * x_term);
}

double mse_chain(const PopulationSummary& s, const SampleFactors& f,
                 double theta) {
  const double z_term = theta * theta * s.cv_z * s.cv_z -
                        2.0 * theta * s.rho_yz * s.cv_y * s.cv_z;
  const double x_term =
      s.cv_x * s.cv_x - 2.0 * s.rho_xy * s.cv_y * s.cv_x;
  return s.mean_y * s.mean_y *
         (f.f1 * s.cv_y * s.cv_y + f.f2 * z_term + f.f3 * x_term);
}

double mse_combined(const PopulationSummary& s, const SampleFactors& f,
                    double theta, double alpha) {
  // Effective z-exponent; this form is exact at both alpha endpoints.
  const double g = alpha + theta * (1.0 - alpha);
  return s.mean_y * s.mean_y *
         (f.f1 * s.cv_y * s.cv_y + f.f3 * s.cv_x * s.cv_x +
          g * g * f.f2 * s.cv_z * s.cv_z -
          2.0 * f.f3 * s.rho_xy * s.cv_y * s.cv_x -
          2.0 * g * f.f2 * s.rho_yz * s.cv_y * s.cv_z);
}

double min_mse_combined(const PopulationSummary& s, const SampleFactors& f) {
  const double x_term =
      s.cv_x * s.cv_x - 2.0 * s.rho_xy * s.cv_y * s.cv_x;
  return s.mean_y * s.mean_y *
         (f.f1 * s.cv_y * s.cv_y + f.f3 * x_term -
          f.f2 * s.rho_yz * s.rho_yz * s.cv_y * s.cv_y);
}

double efficiency_gap(const PopulationSummary& s, const SampleFactors& f,
                      double theta) {
  const double d = theta * s.cv_z - s.rho_yz * s.cv_y;
  return f.f2 * d * d * s.mean_y * s.mean_y;
}

const EvaluationRow* EvaluationTable::find(EstimatorId id) const {
  for (const EvaluationRow& row : rows) {
    if (row.estimator == id) return &row;
  }
  return nullptr;
}

EvaluationTable analytic_table(const PopulationSummary& s,
                               const DesignSpec& design) {
  EvaluationTable table;
  table.design = design;
  table.factors = factors(design);
  table.base_variance = var_ybar(s, table.factors);

  const bool census = table.base_variance == 0.0;
  const auto pre_of = [&](double mse) -> std::optional<double> {
    if (census || mse == 0.0) return std::nullopt;
    return 100.0 * table.base_variance / mse;
  };

  table.rows.push_back({EstimatorId::Ybar, std::nullopt, table.base_variance,
                        census ? std::nullopt : std::optional<double>(100.0)});

  const double rd = mse_two_phase_ratio(s, table.factors);
  table.rows.push_back({EstimatorId::Rd, std::nullopt, rd, pre_of(rd)});

  for (int i = 1; i <= 7; ++i) {
    const auto id = static_cast<EstimatorId>(
        static_cast<int>(EstimatorId::T1) + i - 1);
    const AuxTransform t = transform_for(id, s);
    const double th = theta(t, s.mean_z);
    const double mse = mse_chain(s, table.factors, th);
    table.rows.push_back({id, th, mse, pre_of(mse)});
  }

  const double mo = min_mse_combined(s, table.factors);
  table.rows.push_back({EstimatorId::Tstar, std::nullopt, mo, pre_of(mo)});
  return table;
}

namespace {

std::string fixed4(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

std::string full(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

void write_table_text(const EvaluationTable& t, std::ostream& out) {
  out << "Two-phase design: N = " << t.design.n_population
      << ", n' = " << t.design.n_first << ", n = " << t.design.n_second
      << "\n";
  out << "Factors: f1 = " << fixed4(t.factors.f1)
      << ", f2 = " << fixed4(t.factors.f2)
      << ", f3 = " << fixed4(t.factors.f3) << "\n";
  out << "Var(ybar) = " << fixed4(t.base_variance) << "\n\n";

  out << std::setw(10) << std::left << "estimator" << std::right
      << std::setw(10) << "theta" << std::setw(14) << "mse" << std::setw(12)
      << "pre" << "\n";
  for (const EvaluationRow& row : t.rows) {
    out << std::setw(10) << std::left << to_string(row.estimator)
        << std::right << std::setw(10)
        << (row.theta ? fixed4(*row.theta) : std::string("-"))
        << std::setw(14) << fixed4(row.mse) << std::setw(12)
        << (row.pre ? fixed4(*row.pre) : std::string("n/a")) << "\n";
  }
}

void write_table_csv(const EvaluationTable& t, std::ostream& out) {
  out << "estimator,theta,mse,pre\n";
  for (const EvaluationRow& row : t.rows) {
    out << to_string(row.estimator) << ','
        << (row.theta ? full(*row.theta) : std::string()) << ','
        << full(row.mse) << ','
        << (row.pre ? full(*row.pre) : std::string()) << '\n';
  }
}

std::string table_to_json(const EvaluationTable& t) {
  nlohmann::json j;
  j["design"] = {{"N", t.design.n_population},
                 {"nprime", t.design.n_first},
                 {"n", t.design.n_second}};
  j["factors"] = {{"f1", t.factors.f1},
                  {"f2", t.factors.f2},
                  {"f3", t.factors.f3}};
  j["base_variance"] = t.base_variance;
  nlohmann::json rows = nlohmann::json::array();
  for (const EvaluationRow& row : t.rows) {
    nlohmann::json r;
    r["estimator"] = to_string(row.estimator);
    if (row.theta) {
      r["theta"] = *row.theta;
    } else {
      r["theta"] = nullptr;
    }
    r["mse"] = row.mse;
    if (row.pre) {
      r["pre"] = *row.pre;
    } else {
      r["pre"] = nullptr;
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2);
}

}  // namespace chainest
