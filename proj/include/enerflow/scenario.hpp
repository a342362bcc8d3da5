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

#ifndef ENERFLOW_SCENARIO_HPP_
#define ENERFLOW_SCENARIO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "enerflow/graph.hpp"

namespace enerflow {

// Located diagnostics ("file:line: message") from scenario loading. The
// code is kParseError for syntax problems and kValidationFailed when the
// text parsed but the resulting system is not well-formed.
class ScenarioError : public Error {
 public:
  ScenarioError(Errc code, std::vector<std::string> diagnostics);

  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

// Scenario text format:
//
//   [horizon]
//   steps = 24
//   tau = 1
//
//   [nodes]
//   bus el
//   source wind
//   sink demand
//   transformer chp in.gas=1 out.el=0.4 out.heat=0.5
//   storage battery capacity=10 loss=0.01 eta_in=0.95 eta_out=0.95
//
//   [flows]
//   wind -> el nominal=10 max=profiles.csv#wind
//   el -> demand nominal=1 fix=profiles.csv#demand
//
// Profiles are a number, a comma separated list, or file.csv#column with
// the path relative to the scenario file. '#' starts a comment when it
// begins a token. Returns a frozen system.
EnergySystem parse_scenario(const std::filesystem::path& path);
EnergySystem parse_scenario_text(std::string_view text,
                                 const std::filesystem::path& base_dir,
                                 const std::string& display_name);

}  // namespace enerflow

#endif  // ENERFLOW_SCENARIO_HPP_
