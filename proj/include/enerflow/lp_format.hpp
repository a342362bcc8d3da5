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

#ifndef ENERFLOW_LP_FORMAT_HPP_
#define ENERFLOW_LP_FORMAT_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "enerflow/model.hpp"
#include "enerflow/standard_form.hpp"

namespace enerflow {

// CPLEX LP text. Every column appears in the objective (zero costs
// included) and in the Bounds section, so parsing the text back yields
// the same column order. Numbers use the shortest round-trip form.
std::string write_lp(const StandardForm& problem);
std::string export_lp(const Model& model);
void export_lp(const Model& model, const std::filesystem::path& destination);

// Reads the subset of the CPLEX LP format written above plus the common
// variants (">=" rows, "free" bounds, infinite bounds, comments). Columns
// are numbered by first appearance. Throws Error(kParseError).
StandardForm parse_lp(std::string_view text);

}  // namespace enerflow

#endif  // ENERFLOW_LP_FORMAT_HPP_
