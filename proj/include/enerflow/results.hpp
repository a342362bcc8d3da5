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

#ifndef ENERFLOW_RESULTS_HPP_
#define ENERFLOW_RESULTS_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "enerflow/model.hpp"
#include "enerflow/solver.hpp"

namespace enerflow {

struct FlowSeries {
  std::vector<double> flow;
  std::vector<double> status;   // nonconvex flows only
  std::vector<double> startup;  // nonconvex flows with startup tracking
  std::optional<double> invest;
};

struct StorageSeries {
  std::vector<double> level;
  std::optional<double> capacity;  // invested storages only
};

struct ResultMeta {
  SolveStatus status = SolveStatus::kOptimal;
  double objective = 0.0;
  std::size_t step_count = 0;
  double tau = 1.0;
};

// Solver output re-keyed to graph entities.
struct ResultSet {
  ResultMeta meta;
  std::set<NodeId> nodes;
  std::map<FlowRef, FlowSeries> flows;
  std::map<NodeId, StorageSeries> storages;
};

// Rows are time steps; values[t][c] belongs to columns[c].
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> values;
};

ResultSet extract_results(const Model& model, const Solution& solution);

// Inverse of extract_results: the registry-ordered assignment.
std::vector<double> assignment_of(const Model& model, const ResultSet& results);

// Objective re-evaluated from the result sequences.
double recompute_objective(const Model& model, const ResultSet& results);

// Incident flows of `node` in label order ("source->target"), then the
// level column for storages.
Table node_view(const ResultSet& results, const NodeId& node);

// Every sequence: flows first, then "status:", "startup:" and "level:"
// columns.
Table sequence_table(const ResultSet& results);

// RFC 4180 (CRLF records), header "timestep,<columns>", six decimals.
std::string to_csv(const Table& table);
void write_csv(const Table& table, const std::filesystem::path& destination);

// Result directory: meta.txt, sequences.csv, scalars.csv.
void write_result_dir(const ResultSet& results, const std::filesystem::path& dir);
ResultSet read_result_dir(const std::filesystem::path& dir);

}  // namespace enerflow

#endif  // ENERFLOW_RESULTS_HPP_
