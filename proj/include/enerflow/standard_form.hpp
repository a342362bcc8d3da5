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

#ifndef ENERFLOW_STANDARD_FORM_HPP_
#define ENERFLOW_STANDARD_FORM_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "enerflow/model.hpp"

namespace enerflow {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

struct MatrixEntry {
  std::size_t column;
  double value;

  bool operator==(const MatrixEntry&) const = default;
};

// Canonical minimisation problem
//   min c'x  s.t.  A x (<=|=|>=) b,  lower <= x <= upper,
// with A stored row-wise. Entries of a row are unique per column, nonzero
// and kept in first-appearance order.
struct StandardForm {
  std::vector<std::string> column_names;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Domain> domains;

  std::vector<std::string> row_names;
  std::vector<std::vector<MatrixEntry>> rows;
  std::vector<RowSense> senses;
  std::vector<double> rhs;

  std::size_t num_columns() const { return column_names.size(); }
  std::size_t num_rows() const { return rows.size(); }
  std::size_t nonzeros() const;
  bool is_integral(std::size_t column) const {
    return domains[column] != Domain::kNonnegReal;
  }

  std::size_t add_column(std::string name, double cost, double lo, double up,
                         Domain domain = Domain::kNonnegReal);
  // Duplicate columns are summed and zero results dropped.
  std::size_t add_row(std::string name, std::vector<MatrixEntry> entries,
                      RowSense sense, double rhs);

  bool operator==(const StandardForm&) const = default;
};

// LP-safe name of a model variable: <kind>_<entity>[_<step>], flows as
// source~target.
std::string column_name(const VariableKey& key);
// Escapes every character outside [A-Za-z0-9_.~] as #xx so the result is a
// valid CPLEX LP identifier; the mapping is injective.
std::string escape_lp_name(std::string_view raw);

StandardForm to_standard_form(const Model& model);

}  // namespace enerflow

#endif  // ENERFLOW_STANDARD_FORM_HPP_
