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

#ifndef ENERFLOW_MODEL_HPP_
#define ENERFLOW_MODEL_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "enerflow/graph.hpp"

namespace enerflow {

// Declaration order is the tie-break order inside one entity.
enum class VariableKind {
  kEdgeFlow,      // w(t), per-step edge weight
  kEdgeCapacity,  // w, invested edge capacity
  kNodeLevel,     // v(t), per-step node weight (storage level)
  kNodeCapacity,  // v, invested node capacity
  kEdgeStatus,    // binary commitment status
  kEdgeStartup,   // binary startup indicator
};

std::string_view variable_kind_name(VariableKind kind);
bool is_edge_kind(VariableKind kind);
bool is_per_step_kind(VariableKind kind);

enum class Domain { kNonnegReal, kNonnegInteger, kBinary };

// Identity of a model variable. Keys order by entity label, then kind,
// then step, which is the registry order of every model.
class VariableKey {
 public:
  static VariableKey edge(VariableKind kind, FlowRef flow,
                          std::optional<std::size_t> step = std::nullopt);
  static VariableKey node(VariableKind kind, NodeId node,
                          std::optional<std::size_t> step = std::nullopt);

  VariableKind kind() const { return kind_; }
  const FlowRef& flow() const { return flow_; }
  const NodeId& node() const { return node_; }
  std::optional<std::size_t> step() const { return step_; }
  bool is_edge() const { return is_edge_kind(kind_); }
  // "source->target" for edge variables, the node label otherwise.
  const std::string& entity_label() const { return entity_; }

  std::string to_string() const;

  std::strong_ordering operator<=>(const VariableKey& o) const;
  bool operator==(const VariableKey& o) const {
    return (*this <=> o) == std::strong_ordering::equal;
  }

 private:
  VariableKey() = default;

  VariableKind kind_ = VariableKind::kEdgeFlow;
  FlowRef flow_;
  NodeId node_;
  std::optional<std::size_t> step_;
  std::string entity_;
};

struct VariableRef {
  VariableKey key;
  Domain domain = Domain::kNonnegReal;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

struct Term {
  double coefficient;
  VariableKey var;
};

enum class Sense { kLessEqual, kEqual };

// sum(coefficient * var) + constant  (<= | =)  0
struct ConstraintRow {
  std::vector<Term> terms;
  double constant = 0.0;
  Sense sense = Sense::kLessEqual;
  std::string name;
  // Generating rule; "custom" for user rows.
  std::string rule;
};

// The four objective categories: time-dependent and time-independent
// weights on edges and on nodes.
enum class CostCategory { kEdgePerStep, kEdge, kNodePerStep, kNode };

std::string_view cost_category_name(CostCategory category);

struct ObjectiveTerm {
  double coefficient;
  VariableKey var;
  CostCategory category;
  // True when the coefficient carries the step length tau.
  bool tau_scaled;
};

struct NodeInfo {
  NodeId id;
  NodeKind kind;
};

class Model {
 public:
  Model(Horizon horizon, std::vector<NodeInfo> nodes);

  const Horizon& horizon() const { return horizon_; }
  const std::vector<NodeInfo>& nodes() const { return nodes_; }

  const std::vector<VariableRef>& variables() const { return variables_; }
  std::optional<std::size_t> index_of(const VariableKey& key) const;
  std::size_t require_index(const VariableKey& key) const;
  const VariableRef& variable(const VariableKey& key) const {
    return variables_[require_index(key)];
  }

  // Registers a variable. Variables are kept in key order; adding one
  // shifts the indices of all later keys.
  void add_variable(VariableRef var);

  const std::vector<ConstraintRow>& constraints() const { return rows_; }
  const std::vector<ObjectiveTerm>& objective() const { return objective_; }
  const std::map<std::string, std::string>& provenance() const {
    return provenance_;
  }

  // Appends a generated row; every referenced variable must be registered.
  void add_row(ConstraintRow row);
  // Appends a user row with provenance "custom". Locality is not checked.
  Model& add_custom_row(ConstraintRow row);

  void add_objective_term(ObjectiveTerm term);

  double evaluate_objective(std::span<const double> assignment) const;
  double row_activity(const ConstraintRow& row,
                      std::span<const double> assignment) const;

 private:
  void check_row(const ConstraintRow& row) const;

  Horizon horizon_;
  std::vector<NodeInfo> nodes_;
  std::vector<VariableRef> variables_;
  std::map<VariableKey, std::size_t> index_;
  std::vector<ConstraintRow> rows_;
  std::vector<ObjectiveTerm> objective_;
  std::map<std::string, std::string> provenance_;
};

// Compiles a frozen system. The kind of problem (dispatch, investment,
// unit commitment, storage operation) follows from the parameters alone.
Model build_model(const EnergySystem& system);

// Per-entity row generators; each is a pure function of the system.
std::vector<ConstraintRow> bus_balance_rows(const EnergySystem& system,
                                            const NodeId& bus);
std::vector<ConstraintRow> transformer_rows(const EnergySystem& system,
                                            const NodeId& transformer);
std::vector<ConstraintRow> storage_rows(const EnergySystem& system,
                                        const NodeId& storage);
std::vector<ConstraintRow> nonconvex_rows(const EnergySystem& system,
                                          const FlowRef& flow);
std::vector<ConstraintRow> investment_rows(const EnergySystem& system,
                                           const FlowRef& flow);
std::vector<ConstraintRow> investment_rows(const EnergySystem& system,
                                           const NodeId& storage);
std::vector<ConstraintRow> summed_limit_rows(const EnergySystem& system,
                                             const FlowRef& flow);

std::vector<ObjectiveTerm> objective_terms(const Model& model);

// Names of generated rows whose variables do not all belong to a single
// node and its incident edges. Custom rows are skipped.
std::vector<std::string> audit_locality(const Model& model);

// Fully qualified flow-variable key, the most common lookup.
inline VariableKey flow_var(const FlowRef& flow, std::size_t t) {
  return VariableKey::edge(VariableKind::kEdgeFlow, flow, t);
}

}  // namespace enerflow

#endif  // ENERFLOW_MODEL_HPP_
