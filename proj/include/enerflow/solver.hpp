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

#ifndef ENERFLOW_SOLVER_HPP_
#define ENERFLOW_SOLVER_HPP_

#include <cstddef>
#include <string_view>
#include <vector>

#include "enerflow/model.hpp"
#include "enerflow/standard_form.hpp"

namespace enerflow {

struct SolverOptions {
  double feasibility_tolerance = 1e-6;
  double integrality_tolerance = 1e-5;
  // Absolute optimality gap for branch-and-bound.
  double absolute_gap = 1e-6;
  std::size_t max_pivots = 50'000;
  std::size_t max_nodes = 100'000;
  // Dantzig pricing switches to Bland's rule after this many degenerate
  // pivots.
  std::size_t degenerate_pivot_limit = 1'000;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string_view solve_status_name(SolveStatus status);

struct SolveStats {
  std::size_t iterations = 0;  // simplex pivots, summed over all nodes
  std::size_t nodes = 0;       // branch-and-bound nodes solved
};

struct Solution {
  SolveStatus status = SolveStatus::kInfeasible;
  double objective_value = 0.0;
  // One value per column / registry entry; empty unless a point was found.
  std::vector<double> values;
  SolveStats stats;

  bool optimal() const { return status == SolveStatus::kOptimal; }
  double value(const Model& model, const VariableKey& key) const {
    return values.at(model.require_index(key));
  }
};

// LP relaxation: integrality marks are ignored.
Solution solve_lp(const StandardForm& problem, const SolverOptions& options = {});
Solution solve_lp(const Model& model, const SolverOptions& options = {});

// Best-first branch-and-bound over the integral columns.
Solution solve_milp(const StandardForm& problem, const SolverOptions& options = {});
Solution solve_milp(const Model& model, const SolverOptions& options = {});

// Largest absolute violation of any row or bound by `x`.
double max_violation(const StandardForm& problem, const std::vector<double>& x);

}  // namespace enerflow

#endif  // ENERFLOW_SOLVER_HPP_
