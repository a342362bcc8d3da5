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

#include "enerflow/standard_form.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_map>

namespace enerflow {

std::size_t StandardForm::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.size();
  return n;
}

std::size_t StandardForm::add_column(std::string name, double cost, double lo,
                                     double up, Domain domain) {
  column_names.push_back(std::move(name));
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(up);
  domains.push_back(domain);
  return column_names.size() - 1;
}

std::size_t StandardForm::add_row(std::string name,
                                  std::vector<MatrixEntry> entries,
                                  RowSense sense, double b) {
  std::vector<MatrixEntry> merged;
  std::unordered_map<std::size_t, std::size_t> slot;
  for (const auto& e : entries) {
    if (e.column >= num_columns())
      throw Error(Errc::kInvalidArgument, "row '" + name + "' references column " +
                                              std::to_string(e.column));
    auto [it, fresh] = slot.emplace(e.column, merged.size());
    if (fresh) {
      merged.push_back(e);
    } else {
      merged[it->second].value += e.value;
    }
  }
  std::erase_if(merged, [](const MatrixEntry& e) { return e.value == 0.0; });
  row_names.push_back(std::move(name));
  rows.push_back(std::move(merged));
  senses.push_back(sense);
  rhs.push_back(b);
  return rows.size() - 1;
}

std::string escape_lp_name(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(raw[i]);
    const bool alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                       (c >= '0' && c <= '9');
    // Identifiers may not start with a digit or a period.
    const bool keep = i == 0 ? (alnum && !(c >= '0' && c <= '9')) || c == '_'
                             : alnum || c == '_' || c == '.' || c == '~';
    if (keep) {
      out.push_back(static_cast<char>(c));
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "#%02x", c);
      out += buf;
    }
  }
  return out;
}

std::string column_name(const VariableKey& key) {
  std::string entity = key.is_edge()
                           ? key.flow().source.label + "~" + key.flow().target.label
                           : key.node().label;
  std::string name = std::string(variable_kind_name(key.kind())) + "_" + entity;
  if (key.step()) name += "_" + std::to_string(*key.step());
  return escape_lp_name(name);
}

StandardForm to_standard_form(const Model& model) {
  StandardForm sf;
  std::vector<double> cost(model.variables().size(), 0.0);
  for (const auto& term : model.objective())
    cost[model.require_index(term.var)] += term.coefficient;
  for (std::size_t j = 0; j < model.variables().size(); ++j) {
    const VariableRef& v = model.variables()[j];
    sf.add_column(column_name(v.key), cost[j], v.lower, v.upper, v.domain);
  }
  for (const ConstraintRow& row : model.constraints()) {
    std::vector<MatrixEntry> entries;
    entries.reserve(row.terms.size());
    for (const Term& t : row.terms)
      entries.push_back({model.require_index(t.var), t.coefficient});
    // 0.0 - c keeps a zero constant from turning into -0.
    sf.add_row(escape_lp_name(row.name), std::move(entries),
               row.sense == Sense::kEqual ? RowSense::kEqual : RowSense::kLessEqual,
               0.0 - row.constant);
  }
  return sf;
}

}  // namespace enerflow
