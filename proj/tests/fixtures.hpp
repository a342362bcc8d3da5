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

// Small energy systems shared by the unit and acceptance tests.
#ifndef ENERFLOW_TESTS_FIXTURES_HPP_
#define ENERFLOW_TESTS_FIXTURES_HPP_

#include <string>
#include <vector>

#include "enerflow/graph.hpp"
#include "oracles.hpp"

namespace enerflow::fixtures {

// source -> el -> demand with a fixed demand profile.
inline EnergySystem simple_dispatch(std::vector<double> demand, double cost,
                                    double source_nominal, double tau = 1.0) {
  EnergySystem es(Horizon(demand.size(), tau));
  es.add_node(Node::bus("el"));
  es.add_node(Node::source("src"));
  es.add_node(Node::sink("demand"));
  Flow supply{"src", "el"};
  supply.nominal_value = source_nominal;
  supply.variable_cost = cost;
  es.connect(supply);
  Flow load{"el", "demand"};
  load.nominal_value = 1.0;
  load.fix = Profile(std::move(demand));
  es.connect(load);
  return es;
}

// N sources with linear costs feeding one bus with a fixed demand.
inline EnergySystem merit_order_system(const std::vector<double>& cost,
                                       const std::vector<double>& cap,
                                       std::vector<double> demand) {
  EnergySystem es(Horizon(demand.size(), 1.0));
  es.add_node(Node::bus("el"));
  es.add_node(Node::sink("demand"));
  for (std::size_t i = 0; i < cost.size(); ++i) {
    const std::string label = "gen" + std::to_string(i);
    es.add_node(Node::source(label));
    Flow f{label, "el"};
    f.nominal_value = cap[i];
    f.variable_cost = cost[i];
    es.connect(f);
  }
  Flow load{"el", "demand"};
  load.nominal_value = 1.0;
  load.fix = Profile(std::move(demand));
  es.connect(load);
  return es;
}

// Units as nonconvex sources "unit<i>" on one bus with fixed demand.
inline EnergySystem uc_system(const std::vector<oracle::UcUnit>& units,
                              std::vector<double> demand, double tau = 1.0) {
  EnergySystem es(Horizon(demand.size(), tau));
  es.add_node(Node::bus("el"));
  es.add_node(Node::sink("demand"));
  for (std::size_t i = 0; i < units.size(); ++i) {
    const std::string label = "unit" + std::to_string(i);
    es.add_node(Node::source(label));
    Flow f{label, "el"};
    f.nominal_value = units[i].nominal;
    f.min = units[i].min_fraction;
    f.variable_cost = units[i].cost;
    f.nonconvex = NonconvexSpec{units[i].startup_cost, units[i].minimum_uptime};
    es.connect(f);
  }
  Flow load{"el", "demand"};
  load.nominal_value = 1.0;
  load.fix = Profile(std::move(demand));
  es.connect(load);
  return es;
}

struct StorageCase {
  std::vector<double> price;   // grid price per step
  std::vector<double> demand;  // fixed demand per step
  double grid_nominal = 10.0;
  StorageSpec spec;
  double tau = 1.0;
};

// grid -> el -> demand plus a storage charging from and discharging to el.
// The storage flows are "el->store" and "store->el".
inline EnergySystem storage_system(const StorageCase& c) {
  EnergySystem es(Horizon(c.demand.size(), c.tau));
  es.add_node(Node::bus("el"));
  es.add_node(Node::source("grid"));
  es.add_node(Node::sink("demand"));
  es.add_node(Node::storage("store", c.spec));
  Flow grid{"grid", "el"};
  grid.nominal_value = c.grid_nominal;
  grid.variable_cost = Profile(c.price);
  es.connect(grid);
  Flow load{"el", "demand"};
  load.nominal_value = 1.0;
  load.fix = Profile(c.demand);
  es.connect(load);
  es.connect(Flow{"el", "store"});
  es.connect(Flow{"store", "el"});
  return es;
}

// Gas source -> gas bus -> transformer -> el bus -> demand.
inline EnergySystem transformer_system(double efficiency, std::vector<double> demand,
                                       double tau = 1.0) {
  EnergySystem es(Horizon(demand.size(), tau));
  es.add_node(Node::bus("gas"));
  es.add_node(Node::bus("el"));
  es.add_node(Node::source("gas_supply"));
  es.add_node(Node::sink("demand"));
  TransformerSpec spec;
  spec.output_factors["el"] = efficiency;
  es.add_node(Node::transformer("turbine", spec));
  Flow fuel{"gas_supply", "gas"};
  fuel.variable_cost = 2.0;
  es.connect(fuel);
  es.connect(Flow{"gas", "turbine"});
  es.connect(Flow{"turbine", "el"});
  Flow load{"el", "demand"};
  load.nominal_value = 1.0;
  load.fix = Profile(std::move(demand));
  es.connect(load);
  return es;
}

}  // namespace enerflow::fixtures

#endif  // ENERFLOW_TESTS_FIXTURES_HPP_
