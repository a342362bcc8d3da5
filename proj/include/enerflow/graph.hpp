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

#ifndef ENERFLOW_GRAPH_HPP_
#define ENERFLOW_GRAPH_HPP_

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "enerflow/components.hpp"
#include "enerflow/error.hpp"

namespace enerflow {

// The simulated time horizon: `step_count` steps of `tau` hours each.
class Horizon {
 public:
  Horizon(std::size_t step_count, double tau);

  std::size_t step_count() const { return step_count_; }
  double tau() const { return tau_; }

  bool operator==(const Horizon&) const = default;

 private:
  std::size_t step_count_;
  double tau_;
};

struct NodeId {
  std::string label;

  NodeId() = default;
  NodeId(std::string l) : label(std::move(l)) {}  // NOLINT
  NodeId(const char* l) : label(l) {}             // NOLINT

  auto operator<=>(const NodeId&) const = default;
  bool operator==(const NodeId&) const = default;
};

// Edges are identified by their ordered endpoint pair; parallel edges are
// not representable.
struct FlowRef {
  NodeId source;
  NodeId target;

  std::string label() const { return source.label + "->" + target.label; }

  auto operator<=>(const FlowRef&) const = default;
  bool operator==(const FlowRef&) const = default;
};

enum class NodeKind { kBus, kSource, kSink, kTransformer, kStorage };

std::string_view node_kind_name(NodeKind kind);

struct Bus {};
struct Source {};
struct Sink {};
struct Transformer {
  TransformerSpec spec;
};
struct Storage {
  StorageSpec spec;
};

class Node {
 public:
  using Payload = std::variant<Bus, Source, Sink, Transformer, Storage>;

  Node(NodeId id, Payload payload)
      : id_(std::move(id)), payload_(std::move(payload)) {}

  static Node bus(NodeId id) { return Node(std::move(id), Bus{}); }
  static Node source(NodeId id) { return Node(std::move(id), Source{}); }
  static Node sink(NodeId id) { return Node(std::move(id), Sink{}); }
  static Node transformer(NodeId id, TransformerSpec spec) {
    return Node(std::move(id), Transformer{std::move(spec)});
  }
  static Node storage(NodeId id, StorageSpec spec) {
    return Node(std::move(id), Storage{std::move(spec)});
  }

  const NodeId& id() const { return id_; }
  const std::string& label() const { return id_.label; }
  NodeKind kind() const { return static_cast<NodeKind>(payload_.index()); }
  bool is_bus() const { return kind() == NodeKind::kBus; }
  bool is_component() const { return !is_bus(); }

  const TransformerSpec* transformer_spec() const;
  const StorageSpec* storage_spec() const;

 private:
  NodeId id_;
  Payload payload_;
};

struct Flow {
  Flow() = default;
  Flow(NodeId from, NodeId to) : source(std::move(from)), target(std::move(to)) {}

  NodeId source;
  NodeId target;
  std::optional<double> nominal_value;
  Profile min = 0.0;
  Profile max = 1.0;
  std::optional<Profile> fix;
  Profile variable_cost = 0.0;
  // Bounds on the total energy over the horizon, in multiples of the
  // nominal value.
  std::optional<double> summed_max;
  std::optional<double> summed_min;
  std::optional<InvestmentSpec> investment;
  std::optional<NonconvexSpec> nonconvex;

  FlowRef ref() const { return {source, target}; }
};

enum class Rule {
  kNoNodes,
  kIsolatedNode,
  kProfileLengthMismatch,
  kInvalidProfile,
  kInvalidFlow,
  kDanglingTransformer,
  kMissingConversionFactor,
  kInvalidConversionFactor,
  kStorageDegree,
  kInvalidStorage,
  kInvalidInvestment,
  kMissingNominal,
};

std::string_view rule_name(Rule rule);

struct Violation {
  std::string entity;
  Rule rule;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

std::string to_string(const Violation& v);

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Container for the bipartite graph G = (N, E): buses on one side,
// components on the other. Nodes and flows are kept ordered by label so
// every traversal is deterministic.
class EnergySystem {
 public:
  explicit EnergySystem(Horizon horizon) : horizon_(horizon) {}

  const Horizon& horizon() const { return horizon_; }
  bool frozen() const { return frozen_; }

  NodeId add_node(Node node);
  FlowRef connect(Flow flow);

  // Validates and marks the system immutable. Throws ValidationError.
  EnergySystem& freeze();

  std::vector<Violation> validate() const;

  const Node& node(const NodeId& id) const;
  bool contains(const NodeId& id) const { return nodes_.count(id) > 0; }
  const Flow& flow(const FlowRef& ref) const;

  const std::map<NodeId, Node>& nodes() const { return nodes_; }
  const std::map<FlowRef, Flow>& flows() const { return flows_; }

  std::vector<NodeId> predecessors(const NodeId& n) const;
  std::vector<NodeId> successors(const NodeId& n) const;

  // Flows ending at / starting from `n`, ordered by the other endpoint.
  std::vector<FlowRef> inflows(const NodeId& n) const;
  std::vector<FlowRef> outflows(const NodeId& n) const;

  // True iff the undirected graph has exactly one connected component.
  bool is_connected() const;

 private:
  void check_mutable() const;

  Horizon horizon_;
  std::map<NodeId, Node> nodes_;
  std::map<FlowRef, Flow> flows_;
  std::map<NodeId, std::set<NodeId>> succ_;
  std::map<NodeId, std::set<NodeId>> pred_;
  bool frozen_ = false;
};

}  // namespace enerflow

#endif  // ENERFLOW_GRAPH_HPP_
