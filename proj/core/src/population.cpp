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

#include "chainest/population.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

#include "chainest/accumulate.hpp"
#include "chainest/errors.hpp"

namespace chainest {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Strict, locale-independent double parse; the whole field must be
// consumed.
std::optional<double> parse_double(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  double value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

std::string format_full(double v) {
  std::array<char, 32> buf{};
  const int len = std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return std::string(buf.data(), static_cast<std::size_t>(len));
}

double mean_of(const std::vector<Unit>& units, double Unit::*field) {
  KahanSum acc;
  for (const Unit& u : units) acc.add(u.*field);
  return acc.value() / static_cast<double>(units.size());
}

}  // namespace

FinitePopulation::FinitePopulation(std::vector<Unit> units, std::string label)
    : units_(std::move(units)), label_(std::move(label)) {
  if (units_.size() < 2) {
    throw DataError("population has N = " + std::to_string(units_.size()) +
                    " units (N < 2)");
  }
  for (std::size_t i = 0; i < units_.size(); ++i) {
    const Unit& u = units_[i];
    if (!std::isfinite(u.y) || !std::isfinite(u.x) || !std::isfinite(u.z)) {
      throw DataError("non-finite value in population row " +
                      std::to_string(i + 1));
    }
  }
}

FinitePopulation load_population(std::istream& in, std::string label) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("population file is empty (N < 2)");
  }
  if (trim(line) != "y,x,z") {
    throw DataError("population CSV must start with header 'y,x,z', got '" +
                    std::string(trim(line)) + "'");
  }

  std::vector<Unit> units;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const std::string_view sv = trim(line);
    if (sv.empty()) continue;
    ++row;

    std::array<std::string_view, 3> fields;
    std::size_t start = 0, count = 0;
    for (std::size_t i = 0; i <= sv.size(); ++i) {
      if (i == sv.size() || sv[i] == ',') {
        if (count >= 3) {
          throw DataError("row " + std::to_string(row) +
                          ": expected 3 fields, got more");
        }
        fields[count++] = sv.substr(start, i - start);
        start = i + 1;
      }
    }
    if (count != 3) {
      throw DataError("row " + std::to_string(row) + ": expected 3 fields, got " +
                      std::to_string(count));
    }

    static constexpr std::array<const char*, 3> names = {"y", "x", "z"};
    std::array<double, 3> values{};
    for (std::size_t i = 0; i < 3; ++i) {
      const auto v = parse_double(fields[i]);
      if (!v) {
        throw DataError("row " + std::to_string(row) + ": field '" +
                        names[i] + "' is not numeric: '" +
                        std::string(trim(fields[i])) + "'");
      }
      if (!std::isfinite(*v)) {
        throw DataError("row " + std::to_string(row) + ": field '" +
                        names[i] + "' is not finite");
      }
      values[i] = *v;
    }
    units.push_back(Unit{values[0], values[1], values[2]});
  }

  if (units.size() < 2) {
    throw DataError("population has N = " + std::to_string(units.size()) +
                    " units (N < 2)");
  }
  return FinitePopulation(std::move(units), std::move(label));
}

FinitePopulation load_population_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open population file: " + path.string());
  }
  return load_population(in, path.filename().string());
}

void write_population(const FinitePopulation& pop, std::ostream& out) {
  out << "y,x,z\n";
  for (const Unit& u : pop.units()) {
    out << format_full(u.y) << ',' << format_full(u.x) << ','
        << format_full(u.z) << '\n';
  }
}

void write_population_file(const FinitePopulation& pop,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write population file: " + path.string());
  }
  write_population(pop, out);
}

PopulationSummary summarize(const FinitePopulation& pop) {
  const std::vector<Unit>& units = pop.units();
  const double n = static_cast<double>(units.size());

  PopulationSummary s;
  s.n_population = units.size();
  s.mean_y = mean_of(units, &Unit::y);
  s.mean_x = mean_of(units, &Unit::x);
  s.mean_z = mean_of(units, &Unit::z);
  if (s.mean_y == 0.0 || s.mean_x == 0.0 || s.mean_z == 0.0) {
    throw DataError("population mean is zero; coefficients of variation "
                    "are undefined");
  }

  // Central moments, two-pass with compensated sums.
  KahanSum syy, sxx, szz, sxy, sxz, syz, z3, z4;
  for (const Unit& u : units) {
    const double dy = u.y - s.mean_y;
    const double dx = u.x - s.mean_x;
    const double dz = u.z - s.mean_z;
    syy.add(dy * dy);
    sxx.add(dx * dx);
    szz.add(dz * dz);
    sxy.add(dx * dy);
    sxz.add(dx * dz);
    syz.add(dy * dz);
    z3.add(dz * dz * dz);
    z4.add(dz * dz * dz * dz);
  }

  s.s2_y = syy.value() / (n - 1.0);
  s.s2_x = sxx.value() / (n - 1.0);
  s.s2_z = szz.value() / (n - 1.0);
  s.s_xy = sxy.value() / (n - 1.0);
  s.s_xz = sxz.value() / (n - 1.0);
  s.s_yz = syz.value() / (n - 1.0);

  if (s.s2_z <= 0.0) {
    throw DataError("z has zero variance; beta1(z) and beta2(z) are "
                    "undefined");
  }
  if (s.s2_y <= 0.0 || s.s2_x <= 0.0) {
    throw DataError("y or x has zero variance; correlations are undefined");
  }

  s.cv_y = std::sqrt(s.s2_y) / std::abs(s.mean_y);
  s.cv_x = std::sqrt(s.s2_x) / std::abs(s.mean_x);
  s.cv_z = std::sqrt(s.s2_z) / std::abs(s.mean_z);
  s.rho_xy = s.s_xy / std::sqrt(s.s2_x * s.s2_y);
  s.rho_xz = s.s_xz / std::sqrt(s.s2_x * s.s2_z);
  s.rho_yz = s.s_yz / std::sqrt(s.s2_y * s.s2_z);
  s.sigma_z = std::sqrt(s.s2_z);

  // beta coefficients from divisor-N central moments.
  const double m2 = szz.value() / n;
  const double m3 = z3.value() / n;
  const double m4 = z4.value() / n;
  s.beta1_z = (m3 * m3) / (m2 * m2 * m2);
  s.beta2_z = m4 / (m2 * m2);

  return s;
}

namespace {

constexpr std::array<const char*, 13> kSummaryKeys = {
    "N",      "mean_y", "mean_x", "mean_z", "cv_y",    "cv_x",   "cv_z",
    "rho_xy", "rho_xz", "rho_yz", "sigma_z", "beta1_z", "beta2_z"};

}  // namespace

PopulationSummary load_summary(std::istream& in) {
  std::map<std::string, double, std::less<>> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = line;
    if (const auto hash = sv.find('#'); hash != std::string_view::npos) {
      sv = sv.substr(0, hash);
    }
    sv = trim(sv);
    if (sv.empty()) continue;

    const auto eq = sv.find('=');
    if (eq == std::string_view::npos) {
      throw DataError("summary line " + std::to_string(lineno) +
                      ": expected 'key = value'");
    }
    const std::string key{trim(sv.substr(0, eq))};
    const std::string_view value_field = trim(sv.substr(eq + 1));
    const auto v = parse_double(value_field);
    if (!v || !std::isfinite(*v)) {
      throw DataError("summary line " + std::to_string(lineno) + ": key '" +
                      key + "' has non-numeric value '" +
                      std::string(value_field) + "'");
    }
    values[key] = *v;
  }

  for (const char* key : kSummaryKeys) {
    if (!values.contains(key)) {
      throw DataError(std::string("summary file is missing key '") + key +
                      "'");
    }
  }

  PopulationSummary s;
  const double n_raw = values["N"];
  if (n_raw < 2.0 || n_raw != std::floor(n_raw)) {
    throw DataError("summary key 'N' must be an integer >= 2");
  }
  s.n_population = static_cast<std::size_t>(n_raw);
  s.mean_y = values["mean_y"];
  s.mean_x = values["mean_x"];
  s.mean_z = values["mean_z"];
  s.cv_y = values["cv_y"];
  s.cv_x = values["cv_x"];
  s.cv_z = values["cv_z"];
  s.rho_xy = values["rho_xy"];
  s.rho_xz = values["rho_xz"];
  s.rho_yz = values["rho_yz"];
  s.sigma_z = values["sigma_z"];
  s.beta1_z = values["beta1_z"];
  s.beta2_z = values["beta2_z"];

  if (s.mean_y == 0.0 || s.mean_x == 0.0 || s.mean_z == 0.0) {
    throw DataError("summary means must be nonzero");
  }
  for (const auto& [key, cv] : {std::pair{"cv_y", s.cv_y},
                                {"cv_x", s.cv_x},
                                {"cv_z", s.cv_z}}) {
    if (cv <= 0.0) {
      throw DataError(std::string("summary key '") + key +
                      "' must be > 0, got " + format_full(cv));
    }
  }
  for (const auto& [key, rho] : {std::pair{"rho_xy", s.rho_xy},
                                 {"rho_xz", s.rho_xz},
                                 {"rho_yz", s.rho_yz}}) {
    if (std::abs(rho) > 1.0) {
      throw DataError(std::string("summary key '") + key +
                      "' out of range [-1, 1]: " + format_full(rho));
    }
  }
  if (s.sigma_z < 0.0) {
    throw DataError("summary key 'sigma_z' must be >= 0");
  }
  if (s.beta1_z < 0.0) {
    throw DataError("summary key 'beta1_z' must be >= 0");
  }
  if (s.beta2_z <= 0.0) {
    throw DataError("summary key 'beta2_z' must be > 0");
  }

  // Back-fill variances and covariances from the given CVs, means and
  // correlations. sigma_z stays exactly as given, even if it disagrees
  // with cv_z * |mean_z| (published parameter sets do this; see
  // consistency_warnings).
  const double sy = s.cv_y * std::abs(s.mean_y);
  const double sx = s.cv_x * std::abs(s.mean_x);
  const double sz = s.cv_z * std::abs(s.mean_z);
  s.s2_y = sy * sy;
  s.s2_x = sx * sx;
  s.s2_z = sz * sz;
  s.s_xy = s.rho_xy * sx * sy;
  s.s_xz = s.rho_xz * sx * sz;
  s.s_yz = s.rho_yz * sy * sz;
  return s;
}

PopulationSummary load_summary_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open summary file: " + path.string());
  }
  return load_summary(in);
}

void write_summary(const PopulationSummary& s, std::ostream& out) {
  out << "# chainest population summary\n";
  out << "N = " << s.n_population << '\n';
  out << "mean_y = " << format_full(s.mean_y) << '\n';
  out << "mean_x = " << format_full(s.mean_x) << '\n';
  out << "mean_z = " << format_full(s.mean_z) << '\n';
  out << "cv_y = " << format_full(s.cv_y) << '\n';
  out << "cv_x = " << format_full(s.cv_x) << '\n';
  out << "cv_z = " << format_full(s.cv_z) << '\n';
  out << "rho_xy = " << format_full(s.rho_xy) << '\n';
  out << "rho_xz = " << format_full(s.rho_xz) << '\n';
  out << "rho_yz = " << format_full(s.rho_yz) << '\n';
  out << "sigma_z = " << format_full(s.sigma_z) << '\n';
  out << "beta1_z = " << format_full(s.beta1_z) << '\n';
  out << "beta2_z = " << format_full(s.beta2_z) << '\n';
}

void write_summary_file(const PopulationSummary& s,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write summary file: " + path.string());
  }
  write_summary(s, out);
}

std::vector<std::string> consistency_warnings(const PopulationSummary& s,
                                              double rel_tol) {
  std::vector<std::string> warnings;
  const double sz_from_cv = s.cv_z * std::abs(s.mean_z);
  if (sz_from_cv > 0.0 &&
      std::abs(s.sigma_z - sz_from_cv) > rel_tol * sz_from_cv) {
    warnings.push_back("sigma_z = " + format_full(s.sigma_z) +
                       " disagrees with cv_z * |mean_z| = " +
                       format_full(sz_from_cv) +
                       "; each value is used where its symbol appears");
  }
  if (s.s2_z > 0.0 && s.beta2_z < 1.0) {
    warnings.push_back("beta2_z = " + format_full(s.beta2_z) +
                       " is below the moment bound beta2 >= 1");
  }
  const double det = 1.0 + 2.0 * s.rho_xy * s.rho_xz * s.rho_yz -
                     s.rho_xy * s.rho_xy - s.rho_xz * s.rho_xz -
                     s.rho_yz * s.rho_yz;
  if (det < -1e-12) {
    warnings.push_back("correlation matrix (rho_xy, rho_xz, rho_yz) is not "
                       "positive semi-definite (det = " +
                       format_full(det) + ")");
  }
  return warnings;
}

}  // namespace chainest
