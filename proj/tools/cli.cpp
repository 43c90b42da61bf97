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

#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "chainest/errors.hpp"
#include "chainest/mse_theory.hpp"
#include "chainest/population.hpp"
#include "chainest/simulate.hpp"
#include "chainest/version.hpp"

namespace chainest::cli {

namespace {

using nlohmann::json;

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Every run records what is needed to reproduce it: the full argument
// vector, inputs, design and seed. Written next to the main output (or to
// chainest-<command>.manifest.json when the output goes to stdout).
void write_manifest(const std::string& command,
                    const std::vector<std::string>& argv,
                    const std::vector<std::string>& inputs,
                    const std::optional<DesignSpec>& design,
                    std::optional<std::uint64_t> seed,
                    const std::string& out_path) {
  json m;
  m["command"] = command;
  m["argv"] = argv;
  m["inputs"] = inputs;
  if (design) {
    m["design"] = {{"N", design->n_population},
                   {"nprime", design->n_first},
                   {"n", design->n_second}};
  } else {
    m["design"] = nullptr;
  }
  if (seed) {
    m["seed"] = *seed;
  } else {
    m["seed"] = nullptr;
  }
  m["tool_version"] = kVersion;
  m["timestamp"] = utc_timestamp();

  const std::string path = out_path.empty()
                               ? "chainest-" + command + ".manifest.json"
                               : out_path + ".manifest.json";
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write manifest: " + path);
  }
  out << m.dump(2) << '\n';
}

// Route a rendering either to --out or stdout.
void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    throw DataError("cannot write output file: " + out_path);
  }
  out << content;
}

std::vector<EstimatorId> parse_estimators(
    const std::vector<std::string>& names) {
  if (names.empty()) return default_simulation_estimators();
  std::vector<EstimatorId> ids;
  for (const std::string& name : names) {
    const auto id = estimator_from_string(name);
    if (!id) {
      throw ValidationError("unknown estimator '" + name +
                            "' (use ybar, ratio, rd, t1..t7, "
                            "tstar2..tstar7)");
    }
    if (*id == EstimatorId::Tstar) {
      throw ValidationError("'tstar' is the analytic optimum row; simulate "
                            "tstar2..tstar7 instead");
    }
    if (*id == EstimatorId::Ratio) {
      throw ValidationError("'ratio' has no analytic MSE row under the "
                            "two-phase design and cannot be compared; "
                            "pick from ybar, rd, t1..t7, tstar2..tstar7");
    }
    ids.push_back(*id);
  }
  return ids;
}

struct GlobalOpts {
  std::string format = "text";
  std::string out;
  std::uint64_t seed = 0;
};

int cmd_summarize(const std::vector<std::string>& argv,
                  const std::string& input, const GlobalOpts& g) {
  const FinitePopulation pop = load_population_file(input);
  const PopulationSummary s = summarize(pop);

  const std::string summary_path =
      g.out.empty() ? input + ".summary" : g.out;
  write_summary_file(s, summary_path);

  std::ostringstream report;
  report << "Population: " << input << " (N = " << s.n_population << ")\n";
  write_summary(s, report);
  report << "# derived\n";
  report << "# s2_y = " << s.s2_y << ", s2_x = " << s.s2_x
         << ", s2_z = " << s.s2_z << "\n";
  report << "# s_xy = " << s.s_xy << ", s_xz = " << s.s_xz
         << ", s_yz = " << s.s_yz << "\n";
  report << "Summary written to " << summary_path << "\n";
  std::cout << report.str();

  for (const std::string& w : consistency_warnings(s)) {
    std::cerr << "warning: " << w << "\n";
  }

  write_manifest("summarize", argv, {input}, std::nullopt, std::nullopt,
                 summary_path);
  return 0;
}

int cmd_evaluate(const std::vector<std::string>& argv,
                 const std::string& summary_path, std::size_t n_override,
                 std::size_t nprime, std::size_t n, const GlobalOpts& g) {
  const PopulationSummary s = load_summary_file(summary_path);
  DesignSpec design{n_override == 0 ? s.n_population : n_override, nprime,
                    n};
  design.validate();

  for (const std::string& w : consistency_warnings(s)) {
    std::cerr << "warning: " << w << "\n";
  }

  const EvaluationTable table = analytic_table(s, design);
  std::ostringstream os;
  if (g.format == "text") {
    write_table_text(table, os);
  } else if (g.format == "csv") {
    write_table_csv(table, os);
  } else {
    os << table_to_json(table) << '\n';
  }
  emit(g.out, os.str());

  write_manifest("evaluate", argv, {summary_path}, design, std::nullopt,
                 g.out);
  return 0;
}

int cmd_simulate(const std::vector<std::string>& argv,
                 const std::string& population_path, std::size_t nprime,
                 std::size_t n, std::uint64_t reps, bool exact,
                 unsigned threads, const std::vector<std::string>& est_names,
                 const std::string& policy_name, double tolerance,
                 std::optional<double> fixed_alpha, bool quiet,
                 const GlobalOpts& g) {
  const FinitePopulation pop = load_population_file(population_path);
  const DesignSpec design{pop.size(), nprime, n};
  design.validate();

  const std::vector<EstimatorId> estimators = parse_estimators(est_names);
  const AlphaRule rule = fixed_alpha ? AlphaRule::fixed(*fixed_alpha)
                                     : AlphaRule::optimal();
  const RejectionPolicy policy = policy_name == "error"
                                     ? RejectionPolicy::Error
                                     : RejectionPolicy::SkipAndCount;

  const PopulationSummary s = summarize(pop);
  const EvaluationTable table = analytic_table(s, design);

  json doc;
  doc["design"] = {{"N", design.n_population},
                   {"nprime", design.n_first},
                   {"n", design.n_second}};
  doc["analytic"] = json::parse(table_to_json(table));

  std::ostringstream text;
  std::ostringstream csv;

  ComparisonReport report;
  if (exact) {
    const ExactResult result =
        enumerate_exact(pop, design, estimators, rule, policy);
    report = compare(table, result, tolerance);
    doc["exact"] = json::parse(exact_to_json(result));
    write_exact_text(result, text);
    write_exact_csv(result, csv);
  } else {
    SimConfig cfg;
    cfg.replications = reps;
    cfg.seed = g.seed;
    cfg.rejection_policy = policy;
    cfg.threads = threads;
    cfg.progress = !quiet && reps >= 1'000'000;
    const SimResult result =
        run_monte_carlo(pop, design, estimators, cfg, rule);
    report = compare(table, result, tolerance);
    doc["simulation"] = json::parse(sim_to_json(result));
    write_sim_text(result, text);
    write_sim_csv(result, csv);
  }
  doc["comparison"] = json::parse(comparison_to_json(report));

  std::ostringstream os;
  if (g.format == "text") {
    os << text.str() << '\n';
    write_table_text(table, os);
    os << '\n';
    write_comparison_text(report, os);
  } else if (g.format == "csv") {
    os << csv.str() << "\n# comparison\n";
    write_comparison_csv(report, os);
  } else {
    os << doc.dump(2) << '\n';
  }
  emit(g.out, os.str());

  if (report.any_flagged) {
    std::cerr << "warning: some estimators deviate from the analytic table "
                 "beyond tolerance "
              << tolerance << "\n";
  }

  write_manifest("simulate", argv, {population_path}, design,
                 exact ? std::optional<std::uint64_t>{} : g.seed, g.out);
  return 0;
}

int cmd_genpop(const std::vector<std::string>& argv, const GenSpec& spec,
               const GlobalOpts& g) {
  if (g.out.empty()) {
    throw ValidationError("genpop requires --out <population.csv>");
  }
  const FinitePopulation pop = generate_population(spec);
  write_population_file(pop, g.out);

  const PopulationSummary realized = summarize(pop);
  write_summary_file(realized, g.out + ".summary");

  std::cout << "Generated N = " << pop.size() << " units to " << g.out
            << "\n";
  std::cout << "Realized summary (sidecar " << g.out << ".summary):\n";
  write_summary(realized, std::cout);

  write_manifest("genpop", argv, {}, std::nullopt, spec.seed, g.out);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"chainest: two-phase chain-ratio estimation toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough(false);

  GlobalOpts g;

  // summarize
  auto* sum = app.add_subcommand(
      "summarize", "Compute all population parameters from a y,x,z CSV");
  std::string sum_input;
  sum->add_option("population", sum_input, "Population CSV (header y,x,z)")
      ->required();
  sum->add_option("--out", g.out,
                  "Summary file path (default <input>.summary)");

  // evaluate
  auto* eval = app.add_subcommand(
      "evaluate", "Analytic MSE/PRE table for a summary and design");
  std::string eval_input;
  std::size_t eval_N = 0, eval_nprime = 0, eval_n = 0;
  eval->add_option("summary", eval_input, "Summary key-value file")
      ->required();
  eval->add_option("--nprime", eval_nprime, "First-phase sample size n'")
      ->required();
  eval->add_option("--n", eval_n, "Second-phase sample size n")->required();
  eval->add_option("--N", eval_N,
                   "Population size (default: the summary's N)");
  eval->add_option("--format", g.format, "text|csv|json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  eval->add_option("--out", g.out, "Write the table here instead of stdout");

  // simulate
  auto* sim = app.add_subcommand(
      "simulate",
      "Monte Carlo (or exact enumeration) vs the analytic table");
  std::string sim_input, sim_policy = "skip";
  std::size_t sim_nprime = 0, sim_n = 0;
  std::uint64_t sim_reps = 10000;
  unsigned sim_threads = 1;
  bool sim_exact = false, sim_quiet = false;
  double sim_tol = 0.10;
  std::vector<std::string> sim_estimators;
  std::optional<double> sim_alpha;
  double sim_alpha_value = 0.0;
  sim->add_option("population", sim_input, "Population CSV (header y,x,z)")
      ->required();
  sim->add_option("--nprime", sim_nprime, "First-phase sample size n'")
      ->required();
  sim->add_option("--n", sim_n, "Second-phase sample size n")->required();
  sim->add_option("--reps", sim_reps, "Monte Carlo replications")
      ->capture_default_str();
  sim->add_flag("--exact", sim_exact,
                "Enumerate all two-phase samples instead of Monte Carlo");
  sim->add_option("--threads", sim_threads,
                  "Worker threads (results are thread-count invariant)")
      ->capture_default_str();
  sim->add_option("--estimators", sim_estimators,
                  "Comma-separated subset of ybar,rd,t1..t7,"
                  "tstar2..tstar7 (default: all)")
      ->delimiter(',');
  sim->add_option("--policy", sim_policy,
                  "Degenerate-denominator policy: skip|error")
      ->check(CLI::IsMember({"skip", "error"}));
  sim->add_option("--tol", sim_tol,
                  "Relative deviation tolerance for the comparison report")
      ->capture_default_str();
  auto* alpha_opt_flag =
      sim->add_option("--alpha", sim_alpha_value,
                      "Fixed mixing weight for tstar rows (default: "
                      "optimal alpha per estimator)");
  sim->add_flag("--quiet", sim_quiet, "Suppress progress output");
  sim->add_option("--seed", g.seed, "Random seed (64-bit)")
      ->capture_default_str();
  sim->add_option("--format", g.format, "text|csv|json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  sim->add_option("--out", g.out, "Write results here instead of stdout");

  // genpop
  auto* gen = app.add_subcommand(
      "genpop", "Generate a synthetic population with target parameters");
  GenSpec gen_spec;
  gen->add_option("--size", gen_spec.n_population, "Population size N")
      ->required();
  gen->add_option("--mean-y", gen_spec.mean_y, "Target mean of y")
      ->required();
  gen->add_option("--mean-x", gen_spec.mean_x, "Target mean of x")
      ->required();
  gen->add_option("--mean-z", gen_spec.mean_z, "Target mean of z")
      ->required();
  gen->add_option("--cv-y", gen_spec.cv_y, "Target CV of y")->required();
  gen->add_option("--cv-x", gen_spec.cv_x, "Target CV of x")->required();
  gen->add_option("--cv-z", gen_spec.cv_z, "Target CV of z")->required();
  gen->add_option("--rho-xy", gen_spec.rho_xy, "Target corr(x, y)")
      ->required();
  gen->add_option("--rho-xz", gen_spec.rho_xz, "Target corr(x, z)")
      ->required();
  gen->add_option("--rho-yz", gen_spec.rho_yz, "Target corr(y, z)")
      ->required();
  gen->add_flag("--round-int", gen_spec.round_to_int,
                "Round generated values to integers");
  gen->add_option("--seed", g.seed, "Random seed (64-bit)")
      ->capture_default_str();
  gen->add_option("--out", g.out, "Output population CSV path");

  std::vector<std::string> argv_copy = args;
  try {
    // CLI11's vector overload consumes a reversed argument list.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sum->parsed()) {
      return cmd_summarize(argv_copy, sum_input, g);
    }
    if (eval->parsed()) {
      return cmd_evaluate(argv_copy, eval_input, eval_N, eval_nprime, eval_n,
                          g);
    }
    if (sim->parsed()) {
      if (alpha_opt_flag->count() > 0) sim_alpha = sim_alpha_value;
      return cmd_simulate(argv_copy, sim_input, sim_nprime, sim_n, sim_reps,
                          sim_exact, sim_threads, sim_estimators, sim_policy,
                          sim_tol, sim_alpha, sim_quiet, g);
    }
    if (gen->parsed()) {
      gen_spec.seed = g.seed;
      return cmd_genpop(argv_copy, gen_spec, g);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const GuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace chainest::cli
