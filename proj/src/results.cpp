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

#include "enerflow/results.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "enerflow/csv.hpp"

namespace enerflow {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(Errc::kParseError, where + ": bad number '" + s + "'");
  return v;
}

// Writes `value` into `seq[t]`, rejecting a second write.
void place(std::vector<double>& seq, std::vector<bool>& seen, std::size_t t,
           double value, const VariableKey& key) {
  if (seen[t])
    throw Error(Errc::kInvalidArgument, "variable placed twice: " + key.to_string());
  seen[t] = true;
  seq[t] = value;
}

std::vector<FlowRef> flows_by_label(const ResultSet& results) {
  std::vector<FlowRef> refs;
  for (const auto& [ref, series] : results.flows) refs.push_back(ref);
  std::sort(refs.begin(), refs.end(), [](const FlowRef& a, const FlowRef& b) {
    return a.label() < b.label();
  });
  return refs;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoFailure, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIoFailure, "cannot open '" + path.string() + "'");
  out << text;
  if (!out.flush()) throw Error(Errc::kIoFailure, "cannot write '" + path.string() + "'");
}

FlowRef parse_flow_label(const std::string& label) {
  const auto arrow = label.find("->");
  if (arrow == std::string::npos || arrow == 0 || arrow + 2 == label.size())
    throw Error(Errc::kParseError, "not a flow label: '" + label + "'");
  return {label.substr(0, arrow), label.substr(arrow + 2)};
}

}  // namespace

ResultSet extract_results(const Model& model, const Solution& solution) {
  if (!solution.optimal())
    throw Error(Errc::kNotOptimal, std::string("cannot extract results from a ") +
                                       std::string(solve_status_name(solution.status)) +
                                       " solution");
  const auto& vars = model.variables();
  if (solution.values.size() != vars.size())
    throw Error(Errc::kInvalidArgument, "solution does not match the model");

  const std::size_t steps = model.horizon().step_count();
  ResultSet rs;
  rs.meta = {solution.status, solution.objective_value, steps, model.horizon().tau()};
  for (const auto& info : model.nodes()) rs.nodes.insert(info.id);

  std::map<std::pair<std::string, VariableKind>, std::vector<bool>> seen;
  auto mark = [&](const VariableKey& key) -> std::vector<bool>& {
    auto& s = seen[{key.entity_label(), key.kind()}];
    if (s.empty()) s.assign(steps, false);
    return s;
  };

  for (std::size_t j = 0; j < vars.size(); ++j) {
    const VariableKey& key = vars[j].key;
    const double v = solution.values[j];
    const std::size_t t = key.step().value_or(0);
    switch (key.kind()) {
      case VariableKind::kEdgeFlow: {
        auto& s = rs.flows[key.flow()].flow;
        s.resize(steps, 0.0);
        place(s, mark(key), t, v, key);
        break;
      }
      case VariableKind::kEdgeStatus: {
        auto& s = rs.flows[key.flow()].status;
        s.resize(steps, 0.0);
        place(s, mark(key), t, v, key);
        break;
      }
      case VariableKind::kEdgeStartup: {
        auto& s = rs.flows[key.flow()].startup;
        s.resize(steps, 0.0);
        place(s, mark(key), t, v, key);
        break;
      }
      case VariableKind::kEdgeCapacity: {
        auto& slot = rs.flows[key.flow()].invest;
        if (slot) throw Error(Errc::kInvalidArgument, "duplicate " + key.to_string());
        slot = v;
        break;
      }
      case VariableKind::kNodeLevel: {
        auto& s = rs.storages[key.node()].level;
        s.resize(steps, 0.0);
        place(s, mark(key), t, v, key);
        break;
      }
      case VariableKind::kNodeCapacity: {
        auto& slot = rs.storages[key.node()].capacity;
        if (slot) throw Error(Errc::kInvalidArgument, "duplicate " + key.to_string());
        slot = v;
        break;
      }
    }
  }
  for (const auto& [k, flags] : seen) {
    if (std::find(flags.begin(), flags.end(), false) != flags.end())
      throw Error(Errc::kInvalidArgument,
                  "incomplete sequence for '" + k.first + "'");
  }
  return rs;
}

std::vector<double> assignment_of(const Model& model, const ResultSet& results) {
  std::vector<double> x;
  x.reserve(model.variables().size());
  auto missing = [](const VariableKey& key) {
    return Error(Errc::kUnknownVariable, "no result for " + key.to_string());
  };
  for (const auto& var : model.variables()) {
    const VariableKey& key = var.key;
    const std::size_t t = key.step().value_or(0);
    auto seq_at = [&](const std::vector<double>& s) {
      if (t >= s.size()) throw missing(key);
      return s[t];
    };
    if (key.is_edge()) {
      auto it = results.flows.find(key.flow());
      if (it == results.flows.end()) throw missing(key);
      const FlowSeries& fs = it->second;
      switch (key.kind()) {
        case VariableKind::kEdgeFlow: x.push_back(seq_at(fs.flow)); break;
        case VariableKind::kEdgeStatus: x.push_back(seq_at(fs.status)); break;
        case VariableKind::kEdgeStartup: x.push_back(seq_at(fs.startup)); break;
        default:
          if (!fs.invest) throw missing(key);
          x.push_back(*fs.invest);
      }
    } else {
      auto it = results.storages.find(key.node());
      if (it == results.storages.end()) throw missing(key);
      if (key.kind() == VariableKind::kNodeLevel) {
        x.push_back(seq_at(it->second.level));
      } else {
        if (!it->second.capacity) throw missing(key);
        x.push_back(*it->second.capacity);
      }
    }
  }
  return x;
}

double recompute_objective(const Model& model, const ResultSet& results) {
  const std::vector<double> x = assignment_of(model, results);
  double total = 0.0;
  for (const ObjectiveTerm& term : objective_terms(model))
    total += term.coefficient * x[model.require_index(term.var)];
  return total;
}

Table node_view(const ResultSet& results, const NodeId& node) {
  if (results.nodes.count(node) == 0)
    throw Error(Errc::kUnknownNode, "unknown node '" + node.label + "'");
  Table table;
  std::vector<const std::vector<double>*> series;
  for (const FlowRef& ref : flows_by_label(results)) {
    if (ref.source != node && ref.target != node) continue;
    table.columns.push_back(ref.label());
    series.push_back(&results.flows.at(ref).flow);
  }
  if (auto it = results.storages.find(node); it != results.storages.end()) {
    table.columns.push_back("level");
    series.push_back(&it->second.level);
  }
  table.values.assign(results.meta.step_count, std::vector<double>(series.size()));
  for (std::size_t t = 0; t < results.meta.step_count; ++t)
    for (std::size_t c = 0; c < series.size(); ++c) table.values[t][c] = (*series[c])[t];
  return table;
}

Table sequence_table(const ResultSet& results) {
  Table table;
  std::vector<const std::vector<double>*> series;
  const auto refs = flows_by_label(results);
  for (const FlowRef& ref : refs) {
    table.columns.push_back(ref.label());
    series.push_back(&results.flows.at(ref).flow);
  }
  for (const FlowRef& ref : refs) {
    const FlowSeries& fs = results.flows.at(ref);
    if (!fs.status.empty()) {
      table.columns.push_back("status:" + ref.label());
      series.push_back(&fs.status);
    }
    if (!fs.startup.empty()) {
      table.columns.push_back("startup:" + ref.label());
      series.push_back(&fs.startup);
    }
  }
  for (const auto& [id, st] : results.storages) {
    table.columns.push_back("level:" + id.label);
    series.push_back(&st.level);
  }
  table.values.assign(results.meta.step_count, std::vector<double>(series.size()));
  for (std::size_t t = 0; t < results.meta.step_count; ++t)
    for (std::size_t c = 0; c < series.size(); ++c) table.values[t][c] = (*series[c])[t];
  return table;
}

std::string to_csv(const Table& table) {
  std::string out = "timestep";
  for (const auto& c : table.columns) out += "," + csv_field(c);
  out += "\r\n";
  for (std::size_t t = 0; t < table.values.size(); ++t) {
    out += std::to_string(t);
    for (double v : table.values[t]) out += "," + fixed6(v);
    out += "\r\n";
  }
  return out;
}

void write_csv(const Table& table, const std::filesystem::path& destination) {
  write_file(destination, to_csv(table));
}

void write_result_dir(const ResultSet& results, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::kIoFailure, "cannot create '" + dir.string() + "'");

  std::ostringstream meta;
  meta << "status=" << solve_status_name(results.meta.status) << '\n'
       << "objective=" << shortest(results.meta.objective) << '\n'
       << "steps=" << results.meta.step_count << '\n'
       << "tau=" << shortest(results.meta.tau) << '\n';
  write_file(dir / "meta.txt", meta.str());
  write_csv(sequence_table(results), dir / "sequences.csv");

  std::string scalars = "entity,kind,value\r\n";
  for (const FlowRef& ref : flows_by_label(results)) {
    const FlowSeries& fs = results.flows.at(ref);
    if (fs.invest) scalars += csv_field(ref.label()) + ",invest," + fixed6(*fs.invest) + "\r\n";
  }
  for (const auto& [id, st] : results.storages) {
    if (st.capacity)
      scalars += csv_field(id.label) + ",capacity," + fixed6(*st.capacity) + "\r\n";
  }
  write_file(dir / "scalars.csv", scalars);
}

ResultSet read_result_dir(const std::filesystem::path& dir) {
  ResultSet rs;
  std::istringstream meta(read_file(dir / "meta.txt"));
  std::string line;
  bool have_status = false;
  while (std::getline(meta, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    if (key == "status") {
      have_status = true;
      if (value == "optimal") rs.meta.status = SolveStatus::kOptimal;
      else if (value == "infeasible") rs.meta.status = SolveStatus::kInfeasible;
      else if (value == "unbounded") rs.meta.status = SolveStatus::kUnbounded;
      else rs.meta.status = SolveStatus::kIterationLimit;
    } else if (key == "objective") {
      rs.meta.objective = parse_double(value, "meta.txt");
    } else if (key == "steps") {
      rs.meta.step_count = static_cast<std::size_t>(parse_double(value, "meta.txt"));
    } else if (key == "tau") {
      rs.meta.tau = parse_double(value, "meta.txt");
    }
  }
  if (!have_status) throw Error(Errc::kParseError, "meta.txt has no status");
  if (rs.meta.status != SolveStatus::kOptimal) return rs;

  const auto records = parse_csv(read_file(dir / "sequences.csv"));
  if (records.empty() || records[0].fields.empty() || records[0].fields[0] != "timestep")
    throw Error(Errc::kParseError, "sequences.csv: missing header");
  const auto& header = records[0].fields;
  const std::size_t steps = records.size() - 1;
  if (steps != rs.meta.step_count)
    throw Error(Errc::kParseError, "sequences.csv: row count does not match meta.txt");

  for (std::size_t c = 1; c < header.size(); ++c) {
    std::vector<double> seq(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      const auto& fields = records[t + 1].fields;
      if (fields.size() != header.size())
        throw Error(Errc::kParseError, "sequences.csv line " +
                                           std::to_string(records[t + 1].line) +
                                           ": wrong field count");
      seq[t] = parse_double(fields[c], "sequences.csv");
    }
    const std::string& name = header[c];
    auto strip = [&](std::string_view prefix) { return name.substr(prefix.size()); };
    if (name.rfind("status:", 0) == 0) {
      rs.flows[parse_flow_label(strip("status:"))].status = std::move(seq);
    } else if (name.rfind("startup:", 0) == 0) {
      rs.flows[parse_flow_label(strip("startup:"))].startup = std::move(seq);
    } else if (name.rfind("level:", 0) == 0) {
      rs.storages[NodeId(strip("level:"))].level = std::move(seq);
    } else {
      rs.flows[parse_flow_label(name)].flow = std::move(seq);
    }
  }

  if (std::filesystem::exists(dir / "scalars.csv")) {
    const auto scalars = parse_csv(read_file(dir / "scalars.csv"));
    for (std::size_t r = 1; r < scalars.size(); ++r) {
      const auto& f = scalars[r].fields;
      if (f.size() != 3) throw Error(Errc::kParseError, "scalars.csv: wrong field count");
      const double v = parse_double(f[2], "scalars.csv");
      if (f[1] == "invest") rs.flows[parse_flow_label(f[0])].invest = v;
      else if (f[1] == "capacity") rs.storages[NodeId(f[0])].capacity = v;
    }
  }
  for (const auto& [ref, fs] : rs.flows) {
    rs.nodes.insert(ref.source);
    rs.nodes.insert(ref.target);
  }
  for (const auto& [id, st] : rs.storages) rs.nodes.insert(id);
  return rs;
}

}  // namespace enerflow
