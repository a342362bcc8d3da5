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

#ifndef ENERFLOW_CLI_HPP_
#define ENERFLOW_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace enerflow {

enum ExitCode : int {
  kExitOk = 0,
  kExitNotSolved = 1,   // infeasible, unbounded or limit reached
  kExitInputError = 2,  // unreadable or invalid input
};

// Runs one command line (arguments after the program name). Diagnostics go to
// `err`, each on one line starting with "error:".
//
//   validate <scenario>
//   build <scenario> --lp <file>
//   solve <scenario> --out <dir> [--tol <x>] [--max-nodes <n>]
//   results <dir> --node <label>
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

// File name used by `solve` for the per-bus table of `label`.
std::string bus_csv_name(const std::string& label);

}  // namespace enerflow

#endif  // ENERFLOW_CLI_HPP_
