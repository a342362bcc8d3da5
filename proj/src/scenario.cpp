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

#include "enerflow/scenario.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "enerflow/csv.hpp"

namespace enerflow {

namespace {

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += '\n';
    out += l;
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Thrown internally and turned into a located diagnostic.
struct LineError {
  std::string message;
};

double to_number(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw LineError{"expected a number, got '" + s + "'"};
  return v;
}

std::size_t to_count(const std::string& s) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw LineError{"expected a nonnegative integer, got '" + s + "'"};
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw LineError{"expected true or false, got '" + s + "'"};
}

enum class Section { kNone, kHorizon, kNodes, kFlows };

class ScenarioReader {
 public:
  ScenarioReader(std::filesystem::path base_dir, std::string name)
      : base_dir_(std::move(base_dir)), name_(std::move(name)) {}

  EnergySystem read(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    Section section = Section::kNone;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> node_lines, flow_lines;
    std::optional<std::size_t> steps;
    std::optional<double> tau;

    while (std::getline(in, raw)) {
      ++line_no;
      const std::string line = trim(strip_comment(raw));
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line == "[horizon]") section = Section::kHorizon;
        else if (line == "[nodes]") section = Section::kNodes;
        else if (line == "[flows]") section = Section::kFlows;
        else error(line_no, "unknown section '" + line + "'");
        continue;
      }
      try {
        switch (section) {
          case Section::kNone:
            throw LineError{"statement outside of a section"};
          case Section::kHorizon: {
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw LineError{"expected key = value"};
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key == "steps") steps = to_count(value);
            else if (key == "tau") tau = to_number(value);
            else throw LineError{"unknown horizon key '" + key + "'"};
            break;
          }
          case Section::kNodes:
            node_lines.emplace_back(line_no, split(line));
            break;
          case Section::kFlows:
            flow_lines.emplace_back(line_no, split(line));
            break;
        }
      } catch (const LineError& e) {
        error(line_no, e.message);
      }
    }
    if (!steps) error(0, "horizon has no 'steps'");
    if (!diagnostics_.empty()) throw ScenarioError(Errc::kParseError, diagnostics_);

    std::optional<EnergySystem> system;
    try {
      system.emplace(Horizon(*steps, tau.value_or(1.0)));
    } catch (const Error& e) {
      error(0, e.what());
      throw ScenarioError(Errc::kParseError, diagnostics_);
    }

    for (const auto& [line, tokens] : node_lines) {
      try {
        add_node(*system, line, tokens);
      } catch (const LineError& e) {
        error(line, e.message);
      }
    }
    for (const auto& [line, tokens] : flow_lines) {
      try {
        add_flow(*system, line, tokens);
      } catch (const LineError& e) {
        error(line, e.message);
      }
    }
    if (!diagnostics_.empty()) throw ScenarioError(Errc::kParseError, diagnostics_);

    for (const auto& v : system->validate()) {
      auto it = entity_lines_.find(v.entity);
      validation_.push_back(location(it == entity_lines_.end() ? 0 : it->second) +
                            to_string(v));
    }
    if (!graph_errors_.empty() || !validation_.empty()) {
      std::vector<std::string> all = graph_errors_;
      all.insert(all.end(), validation_.begin(), validation_.end());
      throw ScenarioError(Errc::kValidationFailed, std::move(all));
    }
    system->freeze();
    return std::move(*system);
  }

 private:
  static std::string strip_comment(const std::string& raw) {
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '#' && (i == 0 || raw[i - 1] == ' ' || raw[i - 1] == '\t'))
        return raw.substr(0, i);
    }
    return raw;
  }

  static std::vector<std::string> split(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
  }

  std::string location(std::size_t line) const {
    return line == 0 ? name_ + ": " : name_ + ":" + std::to_string(line) + ": ";
  }

  void error(std::size_t line, const std::string& msg) {
    diagnostics_.push_back(location(line) + msg);
  }

  static std::map<std::string, std::string> key_values(
      const std::vector<std::string>& tokens, std::size_t first) {
    std::map<std::string, std::string> kv;
    for (std::size_t i = first; i < tokens.size(); ++i) {
      const auto eq = tokens[i].find('=');
      if (eq == std::string::npos || eq == 0)
        throw LineError{"expected key=value, got '" + tokens[i] + "'"};
      const std::string key = tokens[i].substr(0, eq);
      if (!kv.emplace(key, tokens[i].substr(eq + 1)).second)
        throw LineError{"duplicate key '" + key + "'"};
    }
    return kv;
  }

  const std::vector<CsvRecord>& csv(const std::string& file) {
    auto it = csv_cache_.find(file);
    if (it != csv_cache_.end()) return it->second;
    std::ifstream in(base_dir_ / file, std::ios::binary);
    if (!in) throw LineError{"cannot open sequence file '" + file + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
      return csv_cache_.emplace(file, parse_csv(ss.str())).first->second;
    } catch (const Error& e) {
      throw LineError{file + ": " + e.what()};
    }
  }

  Profile profile(const std::string& value) {
    if (const auto hash = value.find('#'); hash != std::string::npos) {
      const std::string file = value.substr(0, hash);
      const std::string column = value.substr(hash + 1);
      const auto& records = csv(file);
      if (records.empty()) throw LineError{"sequence file '" + file + "' is empty"};
      const auto& header = records.front().fields;
      std::size_t col = header.size();
      for (std::size_t c = 0; c < header.size(); ++c)
        if (trim(header[c]) == column) col = c;
      if (col == header.size())
        throw LineError{"sequence file '" + file + "' has no column '" + column + "'"};
      std::vector<double> values;
      for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& fields = records[r].fields;
        if (col >= fields.size())
          throw LineError{file + ":" + std::to_string(records[r].line) +
                          ": missing column '" + column + "'"};
        values.push_back(to_number(trim(fields[col])));
      }
      return Profile(std::move(values));
    }
    if (value.find(',') != std::string::npos) {
      std::vector<double> values;
      std::string item;
      std::istringstream ss(value);
      while (std::getline(ss, item, ',')) values.push_back(to_number(trim(item)));
      return Profile(std::move(values));
    }
    return Profile(to_number(value));
  }

  static bool take_investment(std::map<std::string, std::string>& kv,
                              InvestmentSpec& inv) {
    bool any = false;
    for (auto it = kv.begin(); it != kv.end();) {
      if (it->first.rfind("invest.", 0) != 0) {
        ++it;
        continue;
      }
      const std::string field = it->first.substr(7);
      const double v = to_number(it->second);
      if (field == "ep_cost") inv.ep_cost = v;
      else if (field == "minimum" || field == "min") inv.minimum = v;
      else if (field == "maximum" || field == "max") inv.maximum = v;
      else if (field == "existing") inv.existing = v;
      else throw LineError{"unknown investment key '" + it->first + "'"};
      any = true;
      it = kv.erase(it);
    }
    return any;
  }

  static void reject_rest(const std::map<std::string, std::string>& kv,
                          std::string_view what) {
    if (!kv.empty())
      throw LineError{"unknown " + std::string(what) + " key '" + kv.begin()->first + "'"};
  }

  void add_node(EnergySystem& system, std::size_t line,
                const std::vector<std::string>& tokens) {
    if (tokens.size() < 2) throw LineError{"expected '<kind> <label> [key=value...]'"};
    const std::string& kind = tokens[0];
    const std::string& label = tokens[1];
    if (label.find("->") != std::string::npos || label.find('=') != std::string::npos)
      throw LineError{"node label '" + label + "' may not contain '->' or '='"};
    auto kv = key_values(tokens, 2);
    std::optional<Node> node;
    if (kind == "bus" || kind == "source" || kind == "sink") {
      reject_rest(kv, kind);
      node = kind == "bus" ? Node::bus(label)
             : kind == "source" ? Node::source(label)
                                : Node::sink(label);
    } else if (kind == "transformer") {
      TransformerSpec spec;
      for (const auto& [key, value] : kv) {
        if (key.rfind("out.", 0) == 0) spec.output_factors[key.substr(4)] = to_number(value);
        else if (key.rfind("in.", 0) == 0) spec.input_factors[key.substr(3)] = to_number(value);
        else throw LineError{"unknown transformer key '" + key + "'"};
      }
      node = Node::transformer(label, std::move(spec));
    } else if (kind == "storage") {
      StorageSpec spec;
      InvestmentSpec inv;
      if (take_investment(kv, inv)) spec.investment = inv;
      for (auto it = kv.begin(); it != kv.end();) {
        const auto& [key, value] = *it;
        if (key == "capacity") spec.capacity = to_number(value);
        else if (key == "loss") spec.loss_rate = to_number(value);
        else if (key == "eta_in") spec.inflow_efficiency = to_number(value);
        else if (key == "eta_out") spec.outflow_efficiency = to_number(value);
        else if (key == "initial") spec.initial_level_fraction = to_number(value);
        else if (key == "balanced") spec.balanced = to_bool(value);
        else if (key == "level_cost") spec.level_cost = profile(value);
        else {
          ++it;
          continue;
        }
        it = kv.erase(it);
      }
      reject_rest(kv, "storage");
      node = Node::storage(label, std::move(spec));
    } else {
      throw LineError{"unknown node kind '" + kind + "'"};
    }
    try {
      system.add_node(std::move(*node));
      entity_lines_[label] = line;
    } catch (const Error& e) {
      graph_errors_.push_back(location(line) + std::string(errc_name(e.code())) +
                              ": " + e.what());
    }
  }

  void add_flow(EnergySystem& system, std::size_t line,
                const std::vector<std::string>& tokens) {
    if (tokens.size() < 3 || tokens[1] != "->")
      throw LineError{"expected '<source> -> <target> [key=value...]'"};
    Flow flow;
    flow.source = tokens[0];
    flow.target = tokens[2];
    auto kv = key_values(tokens, 3);
    InvestmentSpec inv;
    if (take_investment(kv, inv)) flow.investment = inv;
    NonconvexSpec nc;
    bool nonconvex = false;
    for (const auto& [key, value] : kv) {
      if (key == "nominal") flow.nominal_value = to_number(value);
      else if (key == "min") flow.min = profile(value);
      else if (key == "max") flow.max = profile(value);
      else if (key == "fix") flow.fix = profile(value);
      else if (key == "variable_cost" || key == "cost") flow.variable_cost = profile(value);
      else if (key == "summed_max") flow.summed_max = to_number(value);
      else if (key == "summed_min") flow.summed_min = to_number(value);
      else if (key == "nonconvex") nonconvex = to_bool(value);
      else if (key == "startup_cost") nc.startup_cost = to_number(value), nonconvex = true;
      else if (key == "minimum_uptime" || key == "min_uptime")
        nc.minimum_uptime = to_count(value), nonconvex = true;
      else throw LineError{"unknown flow key '" + key + "'"};
    }
    if (nonconvex) flow.nonconvex = nc;
    const std::string label = flow.ref().label();
    try {
      system.connect(std::move(flow));
      entity_lines_[label] = line;
    } catch (const Error& e) {
      graph_errors_.push_back(location(line) + std::string(errc_name(e.code())) +
                              ": " + e.what());
    }
  }

  std::filesystem::path base_dir_;
  std::string name_;
  std::vector<std::string> diagnostics_;
  std::vector<std::string> graph_errors_;
  std::vector<std::string> validation_;
  std::map<std::string, std::size_t> entity_lines_;
  std::map<std::string, std::vector<CsvRecord>> csv_cache_;
};

}  // namespace

ScenarioError::ScenarioError(Errc code, std::vector<std::string> diagnostics)
    : Error(code, join_lines(diagnostics)), diagnostics_(std::move(diagnostics)) {}

EnergySystem parse_scenario_text(std::string_view text,
                                 const std::filesystem::path& base_dir,
                                 const std::string& display_name) {
  return ScenarioReader(base_dir, display_name).read(text);
}

EnergySystem parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ScenarioError(Errc::kIoFailure, {path.string() + ": cannot open scenario"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str(), path.parent_path(),
                             path.filename().string());
}

}  // namespace enerflow
