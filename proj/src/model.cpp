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

#include "enerflow/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace enerflow {

std::string_view variable_kind_name(VariableKind kind) {
  switch (kind) {
    case VariableKind::kEdgeFlow: return "flow";
    case VariableKind::kEdgeCapacity: return "invest";
    case VariableKind::kNodeLevel: return "level";
    case VariableKind::kNodeCapacity: return "capacity";
    case VariableKind::kEdgeStatus: return "status";
    case VariableKind::kEdgeStartup: return "startup";
  }
  return "unknown";
}

bool is_edge_kind(VariableKind kind) {
  return kind == VariableKind::kEdgeFlow ||
         kind == VariableKind::kEdgeCapacity ||
         kind == VariableKind::kEdgeStatus ||
         kind == VariableKind::kEdgeStartup;
}

bool is_per_step_kind(VariableKind kind) {
  return kind != VariableKind::kEdgeCapacity &&
         kind != VariableKind::kNodeCapacity;
}

std::string_view cost_category_name(CostCategory category) {
  switch (category) {
    case CostCategory::kEdgePerStep: return "edge-per-step";
    case CostCategory::kEdge: return "edge";
    case CostCategory::kNodePerStep: return "node-per-step";
    case CostCategory::kNode: return "node";
  }
  return "unknown";
}

VariableKey VariableKey::edge(VariableKind kind, FlowRef flow,
                              std::optional<std::size_t> step) {
  if (!is_edge_kind(kind))
    throw Error(Errc::kInvalidArgument, "node variable kind on an edge");
  if (is_per_step_kind(kind) != step.has_value())
    throw Error(Errc::kInvalidArgument, "step index does not match kind");
  VariableKey key;
  key.kind_ = kind;
  key.entity_ = flow.label();
  key.flow_ = std::move(flow);
  key.step_ = step;
  return key;
}

VariableKey VariableKey::node(VariableKind kind, NodeId node,
                              std::optional<std::size_t> step) {
  if (is_edge_kind(kind))
    throw Error(Errc::kInvalidArgument, "edge variable kind on a node");
  if (is_per_step_kind(kind) != step.has_value())
    throw Error(Errc::kInvalidArgument, "step index does not match kind");
  VariableKey key;
  key.kind_ = kind;
  key.entity_ = node.label;
  key.node_ = std::move(node);
  key.step_ = step;
  return key;
}

std::string VariableKey::to_string() const {
  std::string s = std::string(variable_kind_name(kind_)) + "(" + entity_;
  if (step_) s += "," + std::to_string(*step_);
  return s + ")";
}

std::strong_ordering VariableKey::operator<=>(const VariableKey& o) const {
  return std::tie(entity_, kind_, step_) <=> std::tie(o.entity_, o.kind_, o.step_);
}

Model::Model(Horizon horizon, std::vector<NodeInfo> nodes)
    : horizon_(horizon), nodes_(std::move(nodes)) {}

std::optional<std::size_t> Model::index_of(const VariableKey& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Model::require_index(const VariableKey& key) const {
  auto idx = index_of(key);
  if (!idx)
    throw Error(Errc::kUnknownVariable,
                "unregistered variable " + key.to_string());
  return *idx;
}

void Model::add_variable(VariableRef var) {
  if (var.key.step() && *var.key.step() >= horizon_.step_count())
    throw Error(Errc::kInvalidArgument,
                "step out of horizon for " + var.key.to_string());
  if (std::isnan(var.lower) || std::isnan(var.upper) || var.lower > var.upper)
    throw Error(Errc::kInvalidArgument,
                "inconsistent bounds for " + var.key.to_string());
  if (index_.count(var.key) > 0)
    throw Error(Errc::kDuplicateVariable,
                "duplicate variable " + var.key.to_string());
  auto pos = std::lower_bound(
      variables_.begin(), variables_.end(), var.key,
      [](const VariableRef& v, const VariableKey& k) { return v.key < k; });
  const auto at = static_cast<std::size_t>(pos - variables_.begin());
  variables_.insert(pos, std::move(var));
  for (std::size_t i = at; i < variables_.size(); ++i)
    index_[variables_[i].key] = i;
}

void Model::check_row(const ConstraintRow& row) const {
  for (const Term& term : row.terms) {
    require_index(term.var);
    if (!std::isfinite(term.coefficient))
      throw Error(Errc::kInvalidArgument,
                  "non-finite coefficient in row '" + row.name + "'");
  }
  if (!std::isfinite(row.constant))
    throw Error(Errc::kInvalidArgument,
                "non-finite constant in row '" + row.name + "'");
  if (provenance_.count(row.name) > 0)
    throw Error(Errc::kDuplicateConstraint,
                "duplicate constraint name '" + row.name + "'");
}

void Model::add_row(ConstraintRow row) {
  check_row(row);
  provenance_[row.name] = row.rule;
  rows_.push_back(std::move(row));
}

Model& Model::add_custom_row(ConstraintRow row) {
  if (row.name.empty()) row.name = "custom_" + std::to_string(rows_.size());
  row.rule = "custom";
  add_row(std::move(row));
  return *this;
}

void Model::add_objective_term(ObjectiveTerm term) {
  require_index(term.var);
  if (!std::isfinite(term.coefficient))
    throw Error(Errc::kInvalidArgument,
                "non-finite objective coefficient on " + term.var.to_string());
  objective_.push_back(std::move(term));
}

double Model::evaluate_objective(std::span<const double> assignment) const {
  double total = 0.0;
  for (const auto& term : objective_)
    total += term.coefficient * assignment[require_index(term.var)];
  return total;
}

double Model::row_activity(const ConstraintRow& row,
                           std::span<const double> assignment) const {
  double total = row.constant;
  for (const auto& term : row.terms)
    total += term.coefficient * assignment[require_index(term.var)];
  return total;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

VariableKey status_var(const FlowRef& f, std::size_t t) {
  return VariableKey::edge(VariableKind::kEdgeStatus, f, t);
}
VariableKey startup_var(const FlowRef& f, std::size_t t) {
  return VariableKey::edge(VariableKind::kEdgeStartup, f, t);
}
VariableKey invest_var(const FlowRef& f) {
  return VariableKey::edge(VariableKind::kEdgeCapacity, f);
}
VariableKey level_var(const NodeId& n, std::size_t t) {
  return VariableKey::node(VariableKind::kNodeLevel, n, t);
}
VariableKey capacity_var(const NodeId& n) {
  return VariableKey::node(VariableKind::kNodeCapacity, n);
}

// Row names: <rule>_<entity>[_<step>], with flows written as source~target.
std::string entity_token(const FlowRef& f) {
  return f.source.label + "~" + f.target.label;
}

std::string row_name(std::string_view rule, const std::string& entity,
                     std::optional<std::size_t> t = std::nullopt) {
  std::string name = std::string(rule) + "_" + entity;
  if (t) name += "_" + std::to_string(*t);
  return name;
}

class RowBuilder {
 public:
  RowBuilder(std::string rule, std::string name, Sense sense) {
    row_.rule = std::move(rule);
    row_.name = std::move(name);
    row_.sense = sense;
  }
  RowBuilder& add(double coefficient, VariableKey var) {
    if (coefficient != 0.0) row_.terms.push_back({coefficient, std::move(var)});
    return *this;
  }
  RowBuilder& constant(double c) {
    row_.constant += c;
    return *this;
  }
  ConstraintRow build() { return std::move(row_); }

 private:
  ConstraintRow row_;
};

bool has_startup(const NonconvexSpec& nc) {
  return nc.startup_cost.has_value() || nc.minimum_uptime.has_value();
}

void require_frozen(const EnergySystem& system) {
  if (!system.frozen())
    throw Error(Errc::kNotFrozen, "model building requires a frozen system");
}

const StorageSpec& require_storage(const EnergySystem& system,
                                   const NodeId& id) {
  const StorageSpec* spec = system.node(id).storage_spec();
  if (!spec)
    throw Error(Errc::kNotAStorage, "'" + id.label + "' is not a storage");
  return *spec;
}

std::pair<FlowRef, FlowRef> storage_ports(const EnergySystem& system,
                                          const NodeId& id) {
  auto ins = system.inflows(id);
  auto outs = system.outflows(id);
  if (ins.size() != 1 || outs.size() != 1)
    throw Error(Errc::kStorageDegree,
                "storage '" + id.label +
                    "' needs exactly one inflow and one outflow");
  return {ins.front(), outs.front()};
}

void register_variables(const EnergySystem& system,
                        std::vector<VariableRef>& out) {
  const std::size_t steps = system.horizon().step_count();
  for (const auto& [ref, f] : system.flows()) {
    for (std::size_t t = 0; t < steps; ++t) {
      VariableRef w{flow_var(ref, t)};
      if (f.nominal_value) {
        const double nominal = *f.nominal_value;
        if (f.fix) {
          w.lower = w.upper = nominal * (*f.fix)[t];
        } else {
          w.lower = f.nonconvex ? 0.0 : nominal * f.min[t];
          w.upper = nominal * f.max[t];
        }
      }
      out.push_back(std::move(w));
    }
    if (f.investment) {
      out.push_back({invest_var(ref), Domain::kNonnegReal,
                     f.investment->minimum, f.investment->maximum});
    }
    if (f.nonconvex) {
      for (std::size_t t = 0; t < steps; ++t) {
        out.push_back({status_var(ref, t), Domain::kBinary, 0.0, 1.0});
        if (has_startup(*f.nonconvex))
          out.push_back({startup_var(ref, t), Domain::kBinary, 0.0, 1.0});
      }
    }
  }
  for (const auto& [id, node] : system.nodes()) {
    const StorageSpec* spec = node.storage_spec();
    if (!spec) continue;
    const double cap = spec->capacity.value_or(kInf);
    for (std::size_t t = 0; t < steps; ++t)
      out.push_back({level_var(id, t), Domain::kNonnegReal, 0.0, cap});
    if (spec->investment) {
      out.push_back({capacity_var(id), Domain::kNonnegReal,
                     spec->investment->minimum, spec->investment->maximum});
    }
  }
}

void append(Model& model, std::vector<ConstraintRow> rows) {
  for (auto& row : rows) model.add_row(std::move(row));
}

}  // namespace

std::vector<ConstraintRow> bus_balance_rows(const EnergySystem& system,
                                            const NodeId& bus) {
  if (!system.node(bus).is_bus())
    throw Error(Errc::kNotABus, "'" + bus.label + "' is not a bus");
  const auto ins = system.inflows(bus);
  const auto outs = system.outflows(bus);
  std::vector<ConstraintRow> rows;
  for (std::size_t t = 0; t < system.horizon().step_count(); ++t) {
    RowBuilder row("balance", row_name("balance", bus.label, t), Sense::kEqual);
    for (const auto& f : ins) row.add(1.0, flow_var(f, t));
    for (const auto& f : outs) row.add(-1.0, flow_var(f, t));
    rows.push_back(row.build());
  }
  return rows;
}

std::vector<ConstraintRow> transformer_rows(const EnergySystem& system,
                                            const NodeId& transformer) {
  const TransformerSpec* spec = system.node(transformer).transformer_spec();
  if (!spec)
    throw Error(Errc::kInvalidArgument,
                "'" + transformer.label + "' is not a transformer");
  std::vector<ConstraintRow> rows;
  const auto ins = system.inflows(transformer);
  const auto outs = system.outflows(transformer);
  for (std::size_t t = 0; t < system.horizon().step_count(); ++t) {
    for (const auto& in : ins) {
      const double cf_in = spec->input_factor(in.source.label);
      for (const auto& out : outs) {
        auto it = spec->output_factors.find(out.target.label);
        if (it == spec->output_factors.end())
          throw Error(Errc::kInvalidArgument,
                      "no conversion factor for " + out.label());
        // w_out * cf_in = w_in * cf_out
        const std::string entity = transformer.label + "_" +
                                   in.source.label + "~" + out.target.label;
        RowBuilder row("conversion", row_name("conversion", entity, t),
                       Sense::kEqual);
        row.add(cf_in, flow_var(out, t)).add(-it->second, flow_var(in, t));
        rows.push_back(row.build());
      }
    }
  }
  return rows;
}

std::vector<ConstraintRow> storage_rows(const EnergySystem& system,
                                        const NodeId& storage) {
  const StorageSpec& spec = require_storage(system, storage);
  const auto [in, out] = storage_ports(system, storage);
  const double tau = system.horizon().tau();
  const std::size_t steps = system.horizon().step_count();
  const double retain = 1.0 - spec.loss_rate;
  const double init = spec.initial_level_fraction;
  const double fixed_cap =
      spec.capacity ? *spec.capacity : spec.investment->existing;

  std::vector<ConstraintRow> rows;
  for (std::size_t t = 0; t < steps; ++t) {
    RowBuilder row("storage_balance", row_name("storage_balance", storage.label, t),
                   Sense::kEqual);
    row.add(1.0, level_var(storage, t));
    if (t == 0) {
      if (spec.investment) row.add(-retain * init, capacity_var(storage));
      row.constant(-retain * init * fixed_cap);
    } else {
      row.add(-retain, level_var(storage, t - 1));
    }
    row.add(-spec.inflow_efficiency * tau, flow_var(in, t));
    row.add(tau / spec.outflow_efficiency, flow_var(out, t));
    rows.push_back(row.build());
  }
  if (spec.balanced) {
    RowBuilder row("storage_balanced", row_name("storage_balanced", storage.label),
                   Sense::kEqual);
    row.add(1.0, level_var(storage, steps - 1));
    if (spec.investment) row.add(-init, capacity_var(storage));
    row.constant(-init * fixed_cap);
    rows.push_back(row.build());
  }
  return rows;
}

std::vector<ConstraintRow> nonconvex_rows(const EnergySystem& system,
                                          const FlowRef& ref) {
  const Flow& f = system.flow(ref);
  if (!f.nonconvex)
    throw Error(Errc::kInvalidArgument, "flow " + ref.label() + " is not nonconvex");
  if (!f.nominal_value)
    throw Error(Errc::kMissingNominal,
                "nonconvex flow " + ref.label() + " has no nominal value");
  const double nominal = *f.nominal_value;
  const NonconvexSpec& nc = *f.nonconvex;
  const std::size_t steps = system.horizon().step_count();
  const std::string entity = entity_token(ref);

  std::vector<ConstraintRow> rows;
  for (std::size_t t = 0; t < steps; ++t) {
    RowBuilder upper("nonconvex_max", row_name("nonconvex_max", entity, t),
                     Sense::kLessEqual);
    upper.add(1.0, flow_var(ref, t)).add(-nominal * f.max[t], status_var(ref, t));
    rows.push_back(upper.build());
    if (f.min[t] > 0.0) {
      RowBuilder lower("nonconvex_min", row_name("nonconvex_min", entity, t),
                       Sense::kLessEqual);
      lower.add(nominal * f.min[t], status_var(ref, t)).add(-1.0, flow_var(ref, t));
      rows.push_back(lower.build());
    }
  }
  if (has_startup(nc)) {
    // status(t) - status(t-1) - startup(t) <= 0, status(-1) = 0
    for (std::size_t t = 0; t < steps; ++t) {
      RowBuilder row("startup", row_name("startup", entity, t), Sense::kLessEqual);
      row.add(1.0, status_var(ref, t));
      if (t > 0) row.add(-1.0, status_var(ref, t - 1));
      row.add(-1.0, startup_var(ref, t));
      rows.push_back(row.build());
    }
  }
  if (nc.minimum_uptime) {
    const std::size_t up = *nc.minimum_uptime;
    for (std::size_t t = 0; t < steps; ++t) {
      const std::size_t first = t + 1 >= up ? t + 1 - up : 0;
      for (std::size_t k = first; k <= t; ++k) {
        RowBuilder row("min_uptime",
                       row_name("min_uptime", entity, t) + "_" + std::to_string(k),
                       Sense::kLessEqual);
        row.add(1.0, startup_var(ref, k)).add(-1.0, status_var(ref, t));
        rows.push_back(row.build());
      }
    }
  }
  return rows;
}

std::vector<ConstraintRow> investment_rows(const EnergySystem& system,
                                           const FlowRef& ref) {
  const Flow& f = system.flow(ref);
  if (!f.investment)
    throw Error(Errc::kInvalidArgument, "flow " + ref.label() + " is not invested");
  const InvestmentSpec& inv = *f.investment;
  const std::string entity = entity_token(ref);
  std::vector<ConstraintRow> rows;
  for (std::size_t t = 0; t < system.horizon().step_count(); ++t) {
    // w(t) - max(t) * (P + existing) <= 0
    RowBuilder upper("investment_max", row_name("investment_max", entity, t),
                     Sense::kLessEqual);
    upper.add(1.0, flow_var(ref, t))
        .add(-f.max[t], invest_var(ref))
        .constant(-f.max[t] * inv.existing);
    rows.push_back(upper.build());
    if (f.min[t] > 0.0) {
      RowBuilder lower("investment_min", row_name("investment_min", entity, t),
                       Sense::kLessEqual);
      lower.add(f.min[t], invest_var(ref))
          .add(-1.0, flow_var(ref, t))
          .constant(f.min[t] * inv.existing);
      rows.push_back(lower.build());
    }
  }
  return rows;
}

std::vector<ConstraintRow> investment_rows(const EnergySystem& system,
                                           const NodeId& storage) {
  const StorageSpec& spec = require_storage(system, storage);
  if (!spec.investment)
    throw Error(Errc::kInvalidArgument,
                "storage '" + storage.label + "' is not invested");
  std::vector<ConstraintRow> rows;
  for (std::size_t t = 0; t < system.horizon().step_count(); ++t) {
    RowBuilder row("investment_level", row_name("investment_level", storage.label, t),
                   Sense::kLessEqual);
    row.add(1.0, level_var(storage, t))
        .add(-1.0, capacity_var(storage))
        .constant(-spec.investment->existing);
    rows.push_back(row.build());
  }
  return rows;
}

std::vector<ConstraintRow> summed_limit_rows(const EnergySystem& system,
                                             const FlowRef& ref) {
  const Flow& f = system.flow(ref);
  if (!f.summed_max && !f.summed_min) return {};
  if (!f.nominal_value)
    throw Error(Errc::kMissingNominal,
                "summed limit on " + ref.label() + " needs a nominal value");
  const double tau = system.horizon().tau();
  const double nominal = *f.nominal_value;
  const std::size_t steps = system.horizon().step_count();
  const std::string entity = entity_token(ref);
  std::vector<ConstraintRow> rows;
  if (f.summed_max) {
    RowBuilder row("summed_max", row_name("summed_max", entity), Sense::kLessEqual);
    for (std::size_t t = 0; t < steps; ++t) row.add(tau, flow_var(ref, t));
    row.constant(-*f.summed_max * nominal);
    rows.push_back(row.build());
  }
  if (f.summed_min) {
    RowBuilder row("summed_min", row_name("summed_min", entity), Sense::kLessEqual);
    for (std::size_t t = 0; t < steps; ++t) row.add(-tau, flow_var(ref, t));
    row.constant(*f.summed_min * nominal);
    rows.push_back(row.build());
  }
  return rows;
}

Model build_model(const EnergySystem& system) {
  require_frozen(system);
  std::vector<NodeInfo> infos;
  for (const auto& [id, node] : system.nodes()) infos.push_back({id, node.kind()});
  Model model(system.horizon(), std::move(infos));

  std::vector<VariableRef> vars;
  register_variables(system, vars);
  std::sort(vars.begin(), vars.end(),
            [](const VariableRef& a, const VariableRef& b) { return a.key < b.key; });
  for (auto& v : vars) model.add_variable(std::move(v));

  const auto& nodes = system.nodes();
  for (const auto& [id, node] : nodes)
    if (node.is_bus()) append(model, bus_balance_rows(system, id));
  for (const auto& [id, node] : nodes)
    if (node.transformer_spec()) append(model, transformer_rows(system, id));
  for (const auto& [id, node] : nodes)
    if (node.storage_spec()) append(model, storage_rows(system, id));
  for (const auto& [ref, f] : system.flows())
    if (f.nonconvex) append(model, nonconvex_rows(system, ref));
  for (const auto& [ref, f] : system.flows())
    if (f.investment) append(model, investment_rows(system, ref));
  for (const auto& [id, node] : nodes) {
    const StorageSpec* spec = node.storage_spec();
    if (spec && spec->investment) append(model, investment_rows(system, id));
  }
  for (const auto& [ref, f] : system.flows())
    append(model, summed_limit_rows(system, ref));

  // Objective, in registry order of the entities.
  const double tau = system.horizon().tau();
  const std::size_t steps = system.horizon().step_count();
  for (const auto& [ref, f] : system.flows()) {
    for (std::size_t t = 0; t < steps; ++t) {
      if (f.variable_cost[t] != 0.0)
        model.add_objective_term({f.variable_cost[t] * tau, flow_var(ref, t),
                                  CostCategory::kEdgePerStep, true});
    }
    if (f.investment)
      model.add_objective_term({f.investment->ep_cost, invest_var(ref),
                                CostCategory::kEdge, false});
    if (f.nonconvex && f.nonconvex->startup_cost &&
        *f.nonconvex->startup_cost != 0.0) {
      // Charged per startup event, independent of the step length.
      for (std::size_t t = 0; t < steps; ++t)
        model.add_objective_term({*f.nonconvex->startup_cost,
                                  startup_var(ref, t),
                                  CostCategory::kEdgePerStep, false});
    }
  }
  for (const auto& [id, node] : nodes) {
    const StorageSpec* spec = node.storage_spec();
    if (!spec) continue;
    const Profile cost = spec->level_cost.broadcast(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      if (cost[t] != 0.0)
        model.add_objective_term({cost[t] * tau, level_var(id, t),
                                  CostCategory::kNodePerStep, true});
    }
    if (spec->investment)
      model.add_objective_term({spec->investment->ep_cost, capacity_var(id),
                                CostCategory::kNode, false});
  }
  return model;
}

std::vector<ObjectiveTerm> objective_terms(const Model& model) {
  return model.objective();
}

std::vector<std::string> audit_locality(const Model& model) {
  std::vector<std::string> failures;
  for (const ConstraintRow& row : model.constraints()) {
    if (row.rule == "custom" || row.terms.empty()) continue;
    // Candidate anchors: the nodes every variable so far is attached to.
    std::set<NodeId> anchors;
    bool first = true;
    for (const Term& term : row.terms) {
      std::set<NodeId> attached;
      if (term.var.is_edge()) {
        attached = {term.var.flow().source, term.var.flow().target};
      } else {
        attached = {term.var.node()};
      }
      if (first) {
        anchors = std::move(attached);
        first = false;
      } else {
        std::set<NodeId> keep;
        std::set_intersection(anchors.begin(), anchors.end(), attached.begin(),
                              attached.end(), std::inserter(keep, keep.end()));
        anchors = std::move(keep);
      }
      if (anchors.empty()) break;
    }
    if (anchors.empty()) failures.push_back(row.name);
  }
  return failures;
}

}  // namespace enerflow
