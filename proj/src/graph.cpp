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

#include "enerflow/graph.hpp"

#include <cmath>
#include <deque>
#include <sstream>

namespace enerflow {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kDuplicateLabel: return "DuplicateLabel";
    case Errc::kSystemFrozen: return "SystemFrozen";
    case Errc::kNotFrozen: return "NotFrozen";
    case Errc::kUnknownNode: return "UnknownNode";
    case Errc::kBipartitenessViolation: return "BipartitenessViolation";
    case Errc::kSourceHasInflow: return "SourceHasInflow";
    case Errc::kSinkHasOutflow: return "SinkHasOutflow";
    case Errc::kDuplicateEdge: return "DuplicateEdge";
    case Errc::kInvalidFlow: return "InvalidFlow";
    case Errc::kEmptySystem: return "EmptySystem";
    case Errc::kValidationFailed: return "ValidationFailed";
    case Errc::kNotABus: return "NotABus";
    case Errc::kNotAStorage: return "NotAStorage";
    case Errc::kStorageDegree: return "StorageDegree";
    case Errc::kMissingNominal: return "MissingNominal";
    case Errc::kUnknownVariable: return "UnknownVariable";
    case Errc::kDuplicateVariable: return "DuplicateVariable";
    case Errc::kDuplicateConstraint: return "DuplicateConstraint";
    case Errc::kNotOptimal: return "NotOptimal";
    case Errc::kIoFailure: return "IoFailure";
    case Errc::kParseError: return "ParseError";
    case Errc::kNumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

std::string_view node_kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::kBus: return "bus";
    case NodeKind::kSource: return "source";
    case NodeKind::kSink: return "sink";
    case NodeKind::kTransformer: return "transformer";
    case NodeKind::kStorage: return "storage";
  }
  return "unknown";
}

std::string_view rule_name(Rule rule) {
  switch (rule) {
    case Rule::kNoNodes: return "NoNodes";
    case Rule::kIsolatedNode: return "IsolatedNode";
    case Rule::kProfileLengthMismatch: return "ProfileLengthMismatch";
    case Rule::kInvalidProfile: return "InvalidProfile";
    case Rule::kInvalidFlow: return "InvalidFlow";
    case Rule::kDanglingTransformer: return "DanglingTransformer";
    case Rule::kMissingConversionFactor: return "MissingConversionFactor";
    case Rule::kInvalidConversionFactor: return "InvalidConversionFactor";
    case Rule::kStorageDegree: return "StorageDegree";
    case Rule::kInvalidStorage: return "InvalidStorage";
    case Rule::kInvalidInvestment: return "InvalidInvestment";
    case Rule::kMissingNominal: return "MissingNominal";
  }
  return "Unknown";
}

std::string to_string(const Violation& v) {
  std::string s = std::string(rule_name(v.rule)) + " at '" + v.entity + "'";
  if (!v.detail.empty()) s += ": " + v.detail;
  return s;
}

namespace {

std::string join_violations(const std::vector<Violation>& violations) {
  std::ostringstream os;
  os << "validation failed";
  for (const auto& v : violations) os << "; " << to_string(v);
  return os.str();
}

// Invariants of a flow that do not depend on the horizon.
std::optional<std::string> flow_shape_problem(const Flow& f) {
  if (f.fix && !f.nominal_value) return "fix profile requires a nominal value";
  if (f.investment && f.nominal_value)
    return "investment and nominal value are mutually exclusive";
  if (f.nonconvex && !f.nominal_value && !f.investment)
    return "nonconvex flow requires a nominal value or an investment";
  if (f.nominal_value &&
      (!std::isfinite(*f.nominal_value) || *f.nominal_value < 0.0))
    return "nominal value must be finite and nonnegative";
  return std::nullopt;
}

bool finite_all(const Profile& p) {
  for (double v : p.values())
    if (!std::isfinite(v)) return false;
  return true;
}

bool in_unit_interval(const Profile& p) {
  for (double v : p.values())
    if (!(v >= 0.0 && v <= 1.0)) return false;
  return true;
}

bool finite_nonnegative(const Profile& p) {
  for (double v : p.values())
    if (!(v >= 0.0 && std::isfinite(v))) return false;
  return true;
}

void check_investment(const std::string& entity, const InvestmentSpec& inv,
                      std::vector<Violation>& out) {
  if (!std::isfinite(inv.ep_cost) || inv.ep_cost < 0.0)
    out.push_back({entity, Rule::kInvalidInvestment,
                   "ep_cost must be finite and nonnegative"});
  if (!(inv.minimum >= 0.0) || !(inv.minimum <= inv.maximum) ||
      std::isnan(inv.maximum))
    out.push_back({entity, Rule::kInvalidInvestment,
                   "requires 0 <= minimum <= maximum"});
  if (!std::isfinite(inv.existing) || inv.existing < 0.0)
    out.push_back({entity, Rule::kInvalidInvestment,
                   "existing capacity must be finite and nonnegative"});
}

}  // namespace

Horizon::Horizon(std::size_t step_count, double tau)
    : step_count_(step_count), tau_(tau) {
  if (step_count == 0)
    throw Error(Errc::kInvalidArgument, "horizon needs at least one step");
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw Error(Errc::kInvalidArgument, "horizon step length must be > 0");
}

const TransformerSpec* Node::transformer_spec() const {
  const auto* t = std::get_if<Transformer>(&payload_);
  return t ? &t->spec : nullptr;
}

const StorageSpec* Node::storage_spec() const {
  const auto* s = std::get_if<Storage>(&payload_);
  return s ? &s->spec : nullptr;
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(Errc::kValidationFailed, join_violations(violations)),
      violations_(std::move(violations)) {}

void EnergySystem::check_mutable() const {
  if (frozen_)
    throw Error(Errc::kSystemFrozen, "energy system is frozen");
}

NodeId EnergySystem::add_node(Node node) {
  check_mutable();
  if (node.label().empty())
    throw Error(Errc::kInvalidArgument, "node label must not be empty");
  NodeId id = node.id();
  if (nodes_.count(id) > 0)
    throw Error(Errc::kDuplicateLabel, "duplicate node label '" + id.label + "'");
  nodes_.emplace(id, std::move(node));
  succ_[id];
  pred_[id];
  return id;
}

FlowRef EnergySystem::connect(Flow flow) {
  check_mutable();
  const FlowRef ref = flow.ref();
  for (const NodeId* id : {&flow.source, &flow.target}) {
    if (!contains(*id))
      throw Error(Errc::kUnknownNode, "unknown node '" + id->label + "'");
  }
  const Node& src = nodes_.at(flow.source);
  const Node& dst = nodes_.at(flow.target);
  if (src.is_bus() == dst.is_bus()) {
    throw Error(Errc::kBipartitenessViolation,
                "flow " + ref.label() + " connects two " +
                    (src.is_bus() ? "buses" : "components"));
  }
  if (dst.kind() == NodeKind::kSource)
    throw Error(Errc::kSourceHasInflow,
                "source '" + dst.label() + "' cannot have inflows");
  if (src.kind() == NodeKind::kSink)
    throw Error(Errc::kSinkHasOutflow,
                "sink '" + src.label() + "' cannot have outflows");
  if (flows_.count(ref) > 0)
    throw Error(Errc::kDuplicateEdge, "duplicate flow " + ref.label());
  if (auto problem = flow_shape_problem(flow))
    throw Error(Errc::kInvalidFlow, "flow " + ref.label() + ": " + *problem);

  const std::size_t steps = horizon_.step_count();
  flow.min = flow.min.broadcast(steps);
  flow.max = flow.max.broadcast(steps);
  flow.variable_cost = flow.variable_cost.broadcast(steps);
  if (flow.fix) flow.fix = flow.fix->broadcast(steps);

  succ_[ref.source].insert(ref.target);
  pred_[ref.target].insert(ref.source);
  flows_.emplace(ref, std::move(flow));
  return ref;
}

const Node& EnergySystem::node(const NodeId& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end())
    throw Error(Errc::kUnknownNode, "unknown node '" + id.label + "'");
  return it->second;
}

const Flow& EnergySystem::flow(const FlowRef& ref) const {
  auto it = flows_.find(ref);
  if (it == flows_.end())
    throw Error(Errc::kInvalidArgument, "unknown flow " + ref.label());
  return it->second;
}

std::vector<NodeId> EnergySystem::predecessors(const NodeId& n) const {
  node(n);
  const auto& p = pred_.at(n);
  return {p.begin(), p.end()};
}

std::vector<NodeId> EnergySystem::successors(const NodeId& n) const {
  node(n);
  const auto& s = succ_.at(n);
  return {s.begin(), s.end()};
}

std::vector<FlowRef> EnergySystem::inflows(const NodeId& n) const {
  std::vector<FlowRef> out;
  for (const auto& p : predecessors(n)) out.push_back({p, n});
  return out;
}

std::vector<FlowRef> EnergySystem::outflows(const NodeId& n) const {
  std::vector<FlowRef> out;
  for (const auto& s : successors(n)) out.push_back({n, s});
  return out;
}

bool EnergySystem::is_connected() const {
  if (nodes_.empty())
    throw Error(Errc::kEmptySystem, "connectivity of an empty system");
  std::set<NodeId> seen{nodes_.begin()->first};
  std::deque<NodeId> queue{nodes_.begin()->first};
  while (!queue.empty()) {
    NodeId n = queue.front();
    queue.pop_front();
    for (const auto* adj : {&succ_.at(n), &pred_.at(n)}) {
      for (const auto& m : *adj) {
        if (seen.insert(m).second) queue.push_back(m);
      }
    }
  }
  return seen.size() == nodes_.size();
}

std::vector<Violation> EnergySystem::validate() const {
  std::vector<Violation> out;
  const std::size_t steps = horizon_.step_count();
  if (nodes_.empty()) out.push_back({"", Rule::kNoNodes, "system has no nodes"});

  for (const auto& [id, node] : nodes_) {
    const auto& ins = pred_.at(id);
    const auto& outs = succ_.at(id);
    if (ins.empty() && outs.empty()) {
      out.push_back({id.label, Rule::kIsolatedNode, "node has no flows"});
    }
    if (const TransformerSpec* spec = node.transformer_spec()) {
      if (ins.empty() || outs.empty())
        out.push_back({id.label, Rule::kDanglingTransformer,
                       outs.empty() ? "transformer has no output flow"
                                    : "transformer has no input flow"});
      for (const auto& bus : outs) {
        if (spec->output_factors.count(bus.label) == 0)
          out.push_back({id.label, Rule::kMissingConversionFactor,
                         "no conversion factor for output '" + bus.label + "'"});
      }
      for (const auto& [bus, factor] : spec->output_factors) {
        if (outs.count(bus) == 0)
          out.push_back({id.label, Rule::kInvalidConversionFactor,
                         "factor for unconnected output '" + bus + "'"});
        if (!(factor > 0.0) || !std::isfinite(factor))
          out.push_back({id.label, Rule::kInvalidConversionFactor,
                         "factor for '" + bus + "' must be positive"});
      }
      for (const auto& [bus, factor] : spec->input_factors) {
        if (ins.count(bus) == 0)
          out.push_back({id.label, Rule::kInvalidConversionFactor,
                         "factor for unconnected input '" + bus + "'"});
        if (!(factor > 0.0) || !std::isfinite(factor))
          out.push_back({id.label, Rule::kInvalidConversionFactor,
                         "factor for '" + bus + "' must be positive"});
      }
    }
    if (const StorageSpec* spec = node.storage_spec()) {
      if (ins.size() != 1 || outs.size() != 1)
        out.push_back({id.label, Rule::kStorageDegree,
                       "storage needs exactly one inflow and one outflow"});
      if (spec->capacity.has_value() == spec->investment.has_value())
        out.push_back({id.label, Rule::kInvalidStorage,
                       "exactly one of capacity and investment must be set"});
      if (spec->capacity &&
          (!std::isfinite(*spec->capacity) || *spec->capacity < 0.0))
        out.push_back({id.label, Rule::kInvalidStorage,
                       "capacity must be finite and nonnegative"});
      if (spec->investment) check_investment(id.label, *spec->investment, out);
      if (!(spec->loss_rate >= 0.0 && spec->loss_rate < 1.0))
        out.push_back({id.label, Rule::kInvalidStorage,
                       "loss rate must lie in [0, 1)"});
      if (!(spec->inflow_efficiency > 0.0 && spec->inflow_efficiency <= 1.0) ||
          !(spec->outflow_efficiency > 0.0 && spec->outflow_efficiency <= 1.0))
        out.push_back({id.label, Rule::kInvalidStorage,
                       "efficiencies must lie in (0, 1]"});
      if (!(spec->initial_level_fraction >= 0.0 &&
            spec->initial_level_fraction <= 1.0))
        out.push_back({id.label, Rule::kInvalidStorage,
                       "initial level fraction must lie in [0, 1]"});
      if (!spec->level_cost.is_scalar() && spec->level_cost.size() != steps)
        out.push_back({id.label, Rule::kProfileLengthMismatch,
                       "level_cost has length " +
                           std::to_string(spec->level_cost.size()) +
                           ", expected " + std::to_string(steps)});
      if (!finite_all(spec->level_cost))
        out.push_back({id.label, Rule::kInvalidProfile,
                       "level_cost must be finite"});
    }
  }

  for (const auto& [ref, f] : flows_) {
    const std::string entity = ref.label();
    if (auto problem = flow_shape_problem(f))
      out.push_back({entity, Rule::kInvalidFlow, *problem});

    bool lengths_ok = true;
    auto check_len = [&](const char* name, const Profile& p) {
      if (p.size() != steps) {
        lengths_ok = false;
        out.push_back({entity, Rule::kProfileLengthMismatch,
                       std::string(name) + " has length " +
                           std::to_string(p.size()) + ", expected " +
                           std::to_string(steps)});
      }
    };
    check_len("min", f.min);
    check_len("max", f.max);
    check_len("variable_cost", f.variable_cost);
    if (f.fix) check_len("fix", *f.fix);

    if (!in_unit_interval(f.min) || !in_unit_interval(f.max))
      out.push_back({entity, Rule::kInvalidProfile,
                     "min and max must lie in [0, 1]"});
    if (f.fix && !finite_nonnegative(*f.fix))
      out.push_back({entity, Rule::kInvalidProfile,
                     "fix must be finite and nonnegative"});
    if (lengths_ok) {
      for (std::size_t t = 0; t < steps; ++t) {
        if (f.min[t] > f.max[t]) {
          out.push_back({entity, Rule::kInvalidProfile,
                         "min exceeds max at step " + std::to_string(t)});
          break;
        }
      }
    }
    if (!finite_all(f.variable_cost))
      out.push_back({entity, Rule::kInvalidProfile,
                     "variable_cost must be finite"});

    if ((f.summed_max || f.summed_min) && !f.nominal_value)
      out.push_back({entity, Rule::kMissingNominal,
                     "summed limits require a nominal value"});
    if ((f.summed_max && (!std::isfinite(*f.summed_max) || *f.summed_max < 0)) ||
        (f.summed_min && (!std::isfinite(*f.summed_min) || *f.summed_min < 0)) ||
        (f.summed_max && f.summed_min && *f.summed_min > *f.summed_max))
      out.push_back({entity, Rule::kInvalidFlow,
                     "requires 0 <= summed_min <= summed_max"});

    if (f.investment) check_investment(entity, *f.investment, out);
    if (f.nonconvex) {
      if (f.investment)
        out.push_back({entity, Rule::kInvalidFlow,
                       "nonconvex flows cannot be invested"});
      if (f.fix)
        out.push_back({entity, Rule::kInvalidFlow,
                       "nonconvex flows cannot be fixed"});
      const NonconvexSpec& nc = *f.nonconvex;
      if (nc.startup_cost &&
          (!std::isfinite(*nc.startup_cost) || *nc.startup_cost < 0.0))
        out.push_back({entity, Rule::kInvalidFlow,
                       "startup cost must be finite and nonnegative"});
      if (nc.minimum_uptime && *nc.minimum_uptime < 1)
        out.push_back({entity, Rule::kInvalidFlow,
                       "minimum uptime must be at least one step"});
    }
  }
  return out;
}

EnergySystem& EnergySystem::freeze() {
  if (frozen_) return *this;
  auto violations = validate();
  if (!violations.empty()) throw ValidationError(std::move(violations));
  frozen_ = true;
  return *this;
}

}  // namespace enerflow
