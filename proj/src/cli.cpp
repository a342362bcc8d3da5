// Copyright 2026 The enerflow Authors
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

#include "enerflow/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "enerflow/lp_format.hpp"
#include "enerflow/model.hpp"
#include "enerflow/results.hpp"
#include "enerflow/scenario.hpp"
#include "enerflow/solver.hpp"

namespace enerflow {

namespace {

void report(std::ostream& err, const Error& e) {
  if (const auto* se = dynamic_cast<const ScenarioError*>(&e)) {
    for (const auto& d : se->diagnostics()) err << "error: " << d << '\n';
    return;
  }
  std::string msg = e.what();
  for (char& c : msg)
    if (c == '\n') c = ' ';
  err << "error: " << errc_name(e.code()) << ": " << msg << '\n';
}

int do_validate(const std::string& scenario, std::ostream& out) {
  parse_scenario(scenario);
  out << "OK\n";
  return kExitOk;
}

int do_build(const std::string& scenario, const std::string& lp, std::ostream& out) {
  const EnergySystem system = parse_scenario(scenario);
  const Model model = build_model(system);
  export_lp(model, lp);
  out << "wrote " << lp << " (" << model.variables().size() << " variables, "
      << model.constraints().size() << " constraints)\n";
  return kExitOk;
}

int do_solve(const std::string& scenario, const std::string& dir,
             const SolverOptions& options, std::ostream& out, std::ostream& err) {
  const EnergySystem system = parse_scenario(scenario);
  const Model model = build_model(system);
  const Solution solution = solve_milp(model, options);
  if (!solution.optimal()) {
    std::filesystem::create_directories(dir);
    // Only meta.txt is meaningful without a solution.
    std::filesystem::remove(std::filesystem::path(dir) / "sequences.csv");
    std::filesystem::remove(std::filesystem::path(dir) / "scalars.csv");
    std::ofstream meta(std::filesystem::path(dir) / "meta.txt",
                       std::ios::binary | std::ios::trunc);
    meta << "status=" << solve_status_name(solution.status) << '\n'
         << "steps=" << system.horizon().step_count() << '\n';
    err << "error: " << solve_status_name(solution.status) << '\n';
    return kExitNotSolved;
  }
  const ResultSet results = extract_results(model, solution);
  write_result_dir(results, dir);
  for (const auto& [id, node] : system.nodes()) {
    if (node.is_bus())
      write_csv(node_view(results, id), std::filesystem::path(dir) / bus_csv_name(id.label));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", solution.objective_value);
  out << "optimal objective=" << buf << '\n';
  return kExitOk;
}

int do_results(const std::string& dir, const std::string& label, std::ostream& out) {
  const ResultSet results = read_result_dir(dir);
  if (results.meta.status != SolveStatus::kOptimal)
    throw Error(Errc::kNotOptimal, "result directory holds a " +
                                       std::string(solve_status_name(results.meta.status)) +
                                       " run");
  out << to_csv(node_view(results, NodeId(label)));
  return kExitOk;
}

}  // namespace

std::string bus_csv_name(const std::string& label) {
  std::string name = "bus_";
  for (unsigned char c : label) {
    if (std::isalnum(c) || c == '_' || c == '-' || c == '.') {
      name.push_back(static_cast<char>(c));
    } else {
      char hex[4];
      std::snprintf(hex, sizeof hex, "%%%02X", c);
      name += hex;
    }
  }
  return name + ".csv";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Energy system model generator and solver", "enerflow"};
  app.require_subcommand(1);

  std::string scenario, lp, dir, label;
  SolverOptions options;

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", scenario, "Scenario file")->required();

  auto* build = app.add_subcommand("build", "Export the model as a CPLEX LP file");
  build->add_option("scenario", scenario, "Scenario file")->required();
  build->add_option("--lp", lp, "Output LP file")->required();

  auto* solve = app.add_subcommand("solve", "Solve and write a result directory");
  solve->add_option("scenario", scenario, "Scenario file")->required();
  solve->add_option("--out", dir, "Result directory")->required();
  solve->add_option("--tol", options.feasibility_tolerance, "Feasibility tolerance")
      ->check(CLI::PositiveNumber);
  solve->add_option("--max-nodes", options.max_nodes, "Branch-and-bound node limit")
      ->check(CLI::PositiveNumber);

  auto* results = app.add_subcommand("results", "Print the table of one node");
  results->add_option("dir", dir, "Result directory")->required();
  results->add_option("--node", label, "Node label")->required();

  std::vector<const char*> argv{"enerflow"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (char& c : msg)
      if (c == '\n') c = ' ';
    err << "error: " << msg << '\n';
    return kExitInputError;
  }

  try {
    if (validate->parsed()) return do_validate(scenario, out);
    if (build->parsed()) return do_build(scenario, lp, out);
    if (solve->parsed()) return do_solve(scenario, dir, options, out, err);
    return do_results(dir, label, out);
  } catch (const Error& e) {
    report(err, e);
    return e.code() == Errc::kNotOptimal ? kExitNotSolved : kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace enerflow
