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

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "enerflow/lp_format.hpp"
#include "enerflow/model.hpp"
#include "enerflow/solver.hpp"
#include "fixtures.hpp"
#include "gtest/gtest.h"
#include "oracles.hpp"

namespace enerflow {
namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::kInvalidArgument;
}

const FlowRef kSrc{"src", "el"};
const FlowRef kLoad{"el", "demand"};

std::size_t count_rule(const Model& m, const std::string& rule) {
  return static_cast<std::size_t>(std::count_if(
      m.constraints().begin(), m.constraints().end(),
      [&](const ConstraintRow& r) { return r.rule == rule; }));
}

TEST(BuildModelTest, RequiresFrozenSystem) {
  EnergySystem es = fixtures::simple_dispatch({3, 4}, 10, 5);
  EXPECT_EQ(code_of([&] { build_model(es); }), Errc::kNotFrozen);
}

TEST(BuildModelTest, DispatchTranscription) {
  EnergySystem es = fixtures::simple_dispatch({3, 4}, 10, 5);
  es.freeze();
  const Model m = build_model(es);
  EXPECT_EQ(m.variables().size(), 4u);
  ASSERT_EQ(m.constraints().size(), 2u);
  for (const auto& row : m.constraints()) {
    EXPECT_EQ(row.sense, Sense::kEqual);
    EXPECT_EQ(row.rule, "balance");
  }
  ASSERT_EQ(m.objective().size(), 2u);
  for (std::size_t t = 0; t < 2; ++t) {
    EXPECT_EQ(m.objective()[t].var, flow_var(kSrc, t));
    EXPECT_DOUBLE_EQ(m.objective()[t].coefficient, 10.0);
    EXPECT_EQ(m.objective()[t].category, CostCategory::kEdgePerStep);
  }
  // Fixed demand as equal bounds, source capacity as an upper bound.
  EXPECT_DOUBLE_EQ(m.variable(flow_var(kLoad, 1)).lower, 4.0);
  EXPECT_DOUBLE_EQ(m.variable(flow_var(kLoad, 1)).upper, 4.0);
  EXPECT_DOUBLE_EQ(m.variable(flow_var(kSrc, 0)).upper, 5.0);
}

TEST(BuildModelTest, RegistryOrderIsEntityKindStep) {
  EnergySystem es = fixtures::uc_system({{10, 0.4, 1, 7.0, std::nullopt}}, {3, 0, 3});
  es.freeze();
  const Model m = build_model(es);
  for (std::size_t j = 1; j < m.variables().size(); ++j)
    EXPECT_TRUE(m.variables()[j - 1].key < m.variables()[j].key);
  EXPECT_EQ(m.variables().front().key.entity_label(), "el->demand");
}

TEST(BuildModelTest, InvestedSourceAddsCapacityTerm) {
  EnergySystem es(Horizon(2, 1.0));
  es.add_node(Node::bus("el"));
  es.add_node(Node::source("src"));
  es.add_node(Node::sink("demand"));
  Flow s{"src", "el"};
  s.variable_cost = 10.0;
  s.investment = InvestmentSpec{100.0, 0.0, 50.0, 0.0};
  es.connect(s);
  Flow d{"el", "demand"};
  d.nominal_value = 1;
  d.fix = std::vector<double>{3, 4};
  es.connect(d);
  es.freeze();
  const Model m = build_model(es);
  EXPECT_EQ(m.variables().size(), 5u);
  EXPECT_EQ(count_rule(m, "investment_max"), 2u);
  const auto cap = VariableKey::edge(VariableKind::kEdgeCapacity, kSrc);
  EXPECT_DOUBLE_EQ(m.variable(cap).upper, 50.0);
  auto it = std::find_if(m.objective().begin(), m.objective().end(),
                         [&](const ObjectiveTerm& t) { return t.var == cap; });
  ASSERT_NE(it, m.objective().end());
  EXPECT_DOUBLE_EQ(it->coefficient, 100.0);
  EXPECT_EQ(it->category, CostCategory::kEdge);
  EXPECT_FALSE(it->tau_scaled);
}

TEST(BuildModelTest, TransformerEfficiencyRow) {
  EnergySystem es = fixtures::transformer_system(0.4, {1, 2});
  es.freeze();
  const Model m = build_model(es);
  ASSERT_EQ(count_rule(m, "conversion"), 2u);
  const auto rows = transformer_rows(es, "turbine");
  ASSERT_EQ(rows.size(), 2u);
  for (std::size_t t = 0; t < 2; ++t) {
    const auto& row = rows[t];
    EXPECT_EQ(row.sense, Sense::kEqual);
    EXPECT_EQ(row.constant, 0.0);
    ASSERT_EQ(row.terms.size(), 2u);
    EXPECT_EQ(row.terms[0].var, flow_var({"turbine", "el"}, t));
    EXPECT_DOUBLE_EQ(row.terms[0].coefficient, 1.0);
    EXPECT_EQ(row.terms[1].var, flow_var({"gas", "turbine"}, t));
    EXPECT_DOUBLE_EQ(row.terms[1].coefficient, -0.4);
  }
  const Solution sol = solve_lp(m);
  ASSERT_TRUE(sol.optimal());
  // 2 MWh of electricity at 40 % needs 5 MWh gas at cost 2.
  EXPECT_NEAR(sol.value(m, flow_var({"gas", "turbine"}, 1)), 5.0, 1e-9);
  EXPECT_NEAR(sol.objective_value, 2.0 * (2.5 + 5.0), 1e-9);
}

TEST(BuildModelTest, MultiPortTransformerPairsEveryInputWithEveryOutput) {
  EnergySystem es(Horizon(1, 1.0));
  for (const char* b : {"gas", "bio", "el", "heat"}) es.add_node(Node::bus(b));
  TransformerSpec spec;
  spec.output_factors = {{"el", 0.3}, {"heat", 0.5}};
  spec.input_factors = {{"bio", 2.0}};
  es.add_node(Node::transformer("chp", spec));
  es.connect(Flow{"gas", "chp"});
  es.connect(Flow{"bio", "chp"});
  es.connect(Flow{"chp", "el"});
  es.connect(Flow{"chp", "heat"});
  const auto rows = transformer_rows(es, "chp");
  ASSERT_EQ(rows.size(), 4u);
  // bio -> el: 2 * w_el - 0.3 * w_bio = 0
  EXPECT_DOUBLE_EQ(rows[0].terms[0].coefficient, 2.0);
  EXPECT_EQ(rows[0].terms[0].var, flow_var({"chp", "el"}, 0));
  EXPECT_DOUBLE_EQ(rows[0].terms[1].coefficient, -0.3);
  EXPECT_EQ(rows[0].terms[1].var, flow_var({"bio", "chp"}, 0));
}

TEST(BusBalanceRowsTest, Shapes) {
  EnergySystem es = fixtures::simple_dispatch({1}, 1, 5);
  auto rows = bus_balance_rows(es, "el");
  ASSERT_EQ(rows.size(), 1u);
  ASSERT_EQ(rows[0].terms.size(), 2u);
  EXPECT_EQ(rows[0].terms[0].var, flow_var(kSrc, 0));
  EXPECT_DOUBLE_EQ(rows[0].terms[0].coefficient, 1.0);
  EXPECT_EQ(rows[0].terms[1].var, flow_var(kLoad, 0));
  EXPECT_DOUBLE_EQ(rows[0].terms[1].coefficient, -1.0);
  EXPECT_EQ(rows[0].constant, 0.0);

  es.add_node(Node::source("src2"));
  es.connect(Flow{"src2", "el"});
  rows = bus_balance_rows(es, "el");
  EXPECT_EQ(rows[0].terms.size(), 3u);
  EXPECT_EQ(code_of([&] { bus_balance_rows(es, "src"); }), Errc::kNotABus);
}

// Storage rows are checked against the hand-propagated recursion.
class StorageRowsTest : public ::testing::Test {
 protected:
  static EnergySystem make(StorageSpec spec, std::size_t steps) {
    fixtures::StorageCase c;
    c.price.assign(steps, 1.0);
    c.demand.assign(steps, 0.0);
    c.spec = spec;
    return fixtures::storage_system(c);
  }

  static double residual(const EnergySystem& es, const std::vector<double>& charge,
                         const std::vector<double>& discharge,
                         const std::vector<double>& level) {
    double worst = 0.0;
    for (const auto& row : storage_rows(es, "store")) {
      double act = row.constant;
      for (const auto& term : row.terms) {
        const std::size_t t = *term.var.step();
        double v = 0.0;
        if (term.var.kind() == VariableKind::kNodeLevel) v = level[t];
        else if (term.var.flow().target == NodeId("store")) v = charge[t];
        else v = discharge[t];
        act += term.coefficient * v;
      }
      worst = std::max(worst, std::abs(act));
    }
    return worst;
  }
};

TEST_F(StorageRowsTest, PureAccumulation) {
  StorageSpec spec;
  spec.capacity = 100;
  EnergySystem es = make(spec, 1);
  EXPECT_NEAR(residual(es, {5}, {0}, {5}), 0.0, 1e-12);
  EXPECT_GT(residual(es, {5}, {0}, {4}), 0.5);
}

TEST_F(StorageRowsTest, LossHalvesLevel) {
  StorageSpec spec;
  spec.capacity = 100;
  spec.loss_rate = 0.5;
  spec.initial_level_fraction = 0.1;  // level(-1) = 10
  EnergySystem es = make(spec, 2);
  EXPECT_NEAR(residual(es, {0, 0}, {0, 0}, {5, 2.5}), 0.0, 1e-12);
}

TEST_F(StorageRowsTest, RoundTripEfficiency) {
  StorageSpec spec;
  spec.capacity = 100;
  spec.inflow_efficiency = 0.9;
  spec.outflow_efficiency = 0.8;
  EnergySystem es = make(spec, 3);
  const std::vector<double> charge{10, 0, 0}, discharge{0, 3.6, 3.6};
  const auto level = oracle::propagate_levels(0.0, 0.0, 0.9, 0.8, 1.0, charge, discharge);
  EXPECT_NEAR(level.back(), 0.0, 1e-12);
  EXPECT_NEAR(discharge[1] + discharge[2], 7.2, 1e-12);
  EXPECT_NEAR(residual(es, charge, discharge, level), 0.0, 1e-12);
}

TEST_F(StorageRowsTest, SolverRecoversSeventyTwoPercent) {
  fixtures::StorageCase c;
  c.price = {1, 1, 1};
  c.demand = {0, 3.6, 3.6};
  c.spec.capacity = 100;
  c.spec.inflow_efficiency = 0.9;
  c.spec.outflow_efficiency = 0.8;
  EnergySystem only_first(Horizon(3, 1.0));
  only_first.add_node(Node::bus("el"));
  only_first.add_node(Node::source("grid"));
  only_first.add_node(Node::sink("demand"));
  only_first.add_node(Node::storage("store", c.spec));
  Flow grid{"grid", "el"};
  grid.nominal_value = 10;
  grid.max = std::vector<double>{1, 0, 0};
  only_first.connect(grid);
  Flow load{"el", "demand"};
  load.nominal_value = 1;
  load.fix = Profile(c.demand);
  only_first.connect(load);
  only_first.connect(Flow{"el", "store"});
  only_first.connect(Flow{"store", "el"});
  only_first.freeze();
  const Model m = build_model(only_first);
  const Solution sol = solve_lp(m);
  ASSERT_TRUE(sol.optimal());
  EXPECT_NEAR(sol.value(m, flow_var({"el", "store"}, 0)), 10.0, 1e-9);
  EXPECT_NEAR(sol.value(m, VariableKey::node(VariableKind::kNodeLevel, "store", 0)), 9.0,
              1e-9);
}

TEST_F(StorageRowsTest, BalancedAddsFinalRow) {
  StorageSpec spec;
  spec.capacity = 20;
  spec.initial_level_fraction = 0.5;
  spec.balanced = true;
  EnergySystem es = make(spec, 3);
  const auto rows = storage_rows(es, "store");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows.back().rule, "storage_balanced");
  EXPECT_DOUBLE_EQ(rows.back().constant, -10.0);
}

TEST_F(StorageRowsTest, WrongDegree) {
  EnergySystem es(Horizon(1, 1.0));
  es.add_node(Node::bus("el"));
  StorageSpec spec;
  spec.capacity = 1;
  es.add_node(Node::storage("store", spec));
  es.connect(Flow{"el", "store"});
  EXPECT_EQ(code_of([&] { storage_rows(es, "store"); }), Errc::kStorageDegree);
  EXPECT_EQ(code_of([&] { storage_rows(es, "el"); }), Errc::kNotAStorage);
}

TEST(NonconvexRowsTest, SemicontinuousBounds) {
  EnergySystem es = fixtures::uc_system({{10, 0.4, 1, std::nullopt, std::nullopt}}, {5});
  const FlowRef unit{"unit0", "el"};
  const auto rows = nonconvex_rows(es, unit);
  ASSERT_EQ(rows.size(), 2u);
  auto act = [&](const ConstraintRow& row, double w, double status) {
    double a = row.constant;
    for (const auto& t : row.terms)
      a += t.coefficient * (t.var.kind() == VariableKind::kEdgeFlow ? w : status);
    return a;
  };
  auto feasible = [&](double w, double s) {
    return act(rows[0], w, s) <= 1e-12 && act(rows[1], w, s) <= 1e-12;
  };
  EXPECT_TRUE(feasible(4, 1));
  EXPECT_TRUE(feasible(10, 1));
  EXPECT_FALSE(feasible(3, 1));
  EXPECT_FALSE(feasible(11, 1));
  EXPECT_TRUE(feasible(0, 0));
  EXPECT_FALSE(feasible(1, 0));
}

TEST(NonconvexRowsTest, StartupChargedOnce) {
  EnergySystem es = fixtures::uc_system({{10, 0.0, 1, 7.0, std::nullopt}}, {0, 5, 5});
  es.freeze();
  const Model m = build_model(es);
  const Solution sol = solve_milp(m);
  ASSERT_TRUE(sol.optimal());
  const FlowRef unit{"unit0", "el"};
  std::vector<double> status, startup;
  for (std::size_t t = 0; t < 3; ++t) {
    status.push_back(sol.value(m, VariableKey::edge(VariableKind::kEdgeStatus, unit, t)));
    startup.push_back(sol.value(m, VariableKey::edge(VariableKind::kEdgeStartup, unit, t)));
  }
  EXPECT_EQ(status, (std::vector<double>{0, 1, 1}));
  EXPECT_EQ(startup, (std::vector<double>{0, 1, 0}));
  EXPECT_NEAR(sol.objective_value, 7.0 + 10.0, 1e-9);
}

TEST(NonconvexRowsTest, MinimumUptimeKeepsUnitOn) {
  // Demand only at t=0; uptime 3 forces status 1 through t=2 at min load 2.
  std::vector<oracle::UcUnit> units{{10, 0.2, 1, 0.0, 3}, {10, 0.0, 5, std::nullopt, std::nullopt}};
  EnergySystem es = fixtures::uc_system(units, {5, 2, 2});
  es.freeze();
  const Model m = build_model(es);
  const Solution sol = solve_milp(m);
  ASSERT_TRUE(sol.optimal());
  const auto expected = oracle::uc_enumeration_min(units, {5, 2, 2}, 1.0);
  ASSERT_TRUE(expected);
  EXPECT_NEAR(sol.objective_value, *expected, 1e-6);
  EXPECT_EQ(code_of([&] { nonconvex_rows(es, {"el", "demand"}); }), Errc::kInvalidArgument);
}

TEST(NonconvexRowsTest, CheapMinLoadUnitStaysOff) {
  std::vector<oracle::UcUnit> units{{10, 0.4, 1, std::nullopt, std::nullopt},
                                    {10, 0.0, 5, std::nullopt, std::nullopt}};
  const std::vector<double> demand{3, 0, 3};
  EnergySystem es = fixtures::uc_system(units, demand);
  es.freeze();
  const Model m = build_model(es);
  const Solution sol = solve_milp(m);
  ASSERT_TRUE(sol.optimal());
  const auto expected = oracle::uc_enumeration_min(units, demand, 1.0);
  ASSERT_TRUE(expected);
  EXPECT_NEAR(*expected, 30.0, 1e-12);
  EXPECT_NEAR(sol.objective_value, *expected, 1e-6);
  for (std::size_t t : {0u, 2u}) {
    EXPECT_NEAR(sol.value(m, flow_var({"unit0", "el"}, t)), 0.0, 1e-9);
    EXPECT_NEAR(sol.value(m, flow_var({"unit1", "el"}, t)), 3.0, 1e-9);
  }
}

EnergySystem invest_case(double ep_cost, double minimum, std::vector<double> demand,
                         std::optional<double> alternative_cost) {
  EnergySystem es(Horizon(demand.size(), 1.0));
  es.add_node(Node::bus("el"));
  es.add_node(Node::source("new"));
  es.add_node(Node::sink("demand"));
  Flow inv{"new", "el"};
  inv.investment = InvestmentSpec{ep_cost, minimum};
  es.connect(inv);
  if (alternative_cost) {
    es.add_node(Node::source("old"));
    Flow alt{"old", "el"};
    alt.variable_cost = *alternative_cost;
    es.connect(alt);
  }
  Flow load{"el", "demand"};
  load.nominal_value = 1;
  load.fix = Profile(std::move(demand));
  es.connect(load);
  es.freeze();
  return es;
}

TEST(InvestmentRowsTest, CapacityFollowsDemand) {
  const auto cap = VariableKey::edge(VariableKind::kEdgeCapacity, {"new", "el"});
  {
    const Model m = build_model(invest_case(0.0, 0.0, {7}, std::nullopt));
    const Solution sol = solve_lp(m);
    ASSERT_TRUE(sol.optimal());
    EXPECT_NEAR(sol.value(m, cap), 7.0, 1e-9);
  }
  {
    // Building 5 units costs 5000, buying costs 5.
    const Model m = build_model(invest_case(1000.0, 0.0, {5}, 1.0));
    const Solution sol = solve_lp(m);
    ASSERT_TRUE(sol.optimal());
    EXPECT_NEAR(sol.value(m, cap), 0.0, 1e-9);
    EXPECT_NEAR(sol.value(m, flow_var({"old", "el"}, 0)), 5.0, 1e-9);
    EXPECT_NEAR(sol.objective_value, 5.0, 1e-9);
  }
  {
    const Model m = build_model(invest_case(1.0, 3.0, {0}, std::nullopt));
    const Solution sol = solve_lp(m);
    ASSERT_TRUE(sol.optimal());
    EXPECT_NEAR(sol.value(m, cap), 3.0, 1e-9);
    EXPECT_NEAR(sol.value(m, flow_var({"new", "el"}, 0)), 0.0, 1e-9);
  }
}

TEST(InvestmentRowsTest, StorageInvestmentCouplesLevels) {
  fixtures::StorageCase c;
  c.price = {1, 10};
  c.demand = {0, 4};
  c.grid_nominal = 10;
  c.spec.investment = InvestmentSpec{0.5, 0.0};
  EnergySystem es = fixtures::storage_system(c);
  es.freeze();
  const Model m = build_model(es);
  EXPECT_EQ(count_rule(m, "investment_level"), 2u);
  const Solution sol = solve_lp(m);
  ASSERT_TRUE(sol.optimal());
  // Charging 4 at t=0 costs 4 + 0.5 * 4 capacity, cheaper than 40 at t=1.
  EXPECT_NEAR(sol.value(m, VariableKey::node(VariableKind::kNodeCapacity, "store")), 4.0,
              1e-9);
  EXPECT_NEAR(sol.objective_value, 6.0, 1e-9);
}

TEST(SummedLimitRowsTest, AnnualLimit) {
  EnergySystem es(Horizon(3, 1.0));
  es.add_node(Node::bus("el"));
  es.add_node(Node::source("gas"));
  es.add_node(Node::sink("demand"));
  Flow g{"gas", "el"};
  g.nominal_value = 10;
  g.summed_max = 2;
  es.connect(g);
  Flow load{"el", "demand"};
  load.nominal_value = 1;
  load.fix = 10.0;
  es.connect(load);
  const auto rows = summed_limit_rows(es, {"gas", "el"});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].terms.size(), 3u);
  EXPECT_DOUBLE_EQ(rows[0].constant, -20.0);
  es.freeze();
  // 30 MWh demand against a 20 MWh allowance.
  EXPECT_EQ(solve_lp(build_model(es)).status, SolveStatus::kInfeasible);
  EXPECT_TRUE(summed_limit_rows(es, {"el", "demand"}).empty());
}

TEST(SummedLimitRowsTest, MinimumUsage) {
  EnergySystem es(Horizon(3, 1.0));
  es.add_node(Node::bus("el"));
  es.add_node(Node::source("free"));
  es.add_node(Node::sink("excess"));
  Flow f{"free", "el"};
  f.nominal_value = 10;
  f.summed_min = 1;
  es.connect(f);
  es.connect(Flow{"el", "excess"});
  es.freeze();
  const Model m = build_model(es);
  const Solution sol = solve_lp(m);
  ASSERT_TRUE(sol.optimal());
  double total = 0;
  for (std::size_t t = 0; t < 3; ++t) total += sol.value(m, flow_var({"free", "el"}, t));
  EXPECT_GE(total, 10.0 - 1e-9);
}

TEST(SummedLimitRowsTest, NeedsNominal) {
  EnergySystem es(Horizon(1, 1.0));
  es.add_node(Node::bus("el"));
  es.add_node(Node::source("a"));
  Flow f{"a", "el"};
  f.summed_max = 1;
  es.connect(f);
  EXPECT_EQ(code_of([&] { summed_limit_rows(es, {"a", "el"}); }), Errc::kMissingNominal);
}

TEST(CustomRowTest, AppendsWithProvenance) {
  EnergySystem es = fixtures::simple_dispatch({3, 4, 5}, 1, 10);
  es.freeze();
  Model m = build_model(es);
  ConstraintRow emissions;
  emissions.name = "emission_cap";
  for (std::size_t t = 0; t < 3; ++t) emissions.terms.push_back({0.2, flow_var(kSrc, t)});
  emissions.constant = -100;
  m.add_custom_row(emissions);
  EXPECT_EQ(m.constraints().back().rule, "custom");
  EXPECT_EQ(m.provenance().at("emission_cap"), "custom");

  ConstraintRow bad;
  bad.terms.push_back({1.0, flow_var({"ghost", "el"}, 0)});
  EXPECT_EQ(code_of([&] { m.add_custom_row(bad); }), Errc::kUnknownVariable);

  ConstraintRow vacuous;
  vacuous.name = "vacuous";
  vacuous.constant = -5;
  m.add_custom_row(vacuous);
  EXPECT_TRUE(solve_lp(m).optimal());
  EXPECT_EQ(code_of([&] { m.add_custom_row(vacuous); }), Errc::kDuplicateConstraint);
}

TEST(CustomRowTest, EmissionCapShiftsDispatch) {
  EnergySystem es = fixtures::merit_order_system({1, 5}, {10, 10}, {8, 8});
  es.freeze();
  Model m = build_model(es);
  ConstraintRow cap;
  cap.name = "coal_cap";
  for (std::size_t t = 0; t < 2; ++t) cap.terms.push_back({1.0, flow_var({"gen0", "el"}, t)});
  cap.constant = -10;
  m.add_custom_row(cap);
  const Solution sol = solve_lp(m);
  ASSERT_TRUE(sol.optimal());
  EXPECT_NEAR(sol.objective_value, 10 * 1 + 6 * 5, 1e-9);
}

TEST(ObjectiveTermsTest, DispatchHasOnlyPerStepEdgeTerms) {
  EnergySystem es = fixtures::simple_dispatch({5, 3}, 2, 10);
  es.freeze();
  const Model m = build_model(es);
  const auto terms = objective_terms(m);
  for (const auto& t : terms) EXPECT_EQ(t.category, CostCategory::kEdgePerStep);
  std::vector<double> x(m.variables().size(), 0.0);
  x[m.require_index(flow_var(kSrc, 0))] = 5;
  x[m.require_index(flow_var(kSrc, 1))] = 3;
  EXPECT_DOUBLE_EQ(m.evaluate_objective(x), 16.0);

  EnergySystem quarter = fixtures::simple_dispatch({5, 3}, 2, 10, 0.25);
  quarter.freeze();
  EXPECT_DOUBLE_EQ(build_model(quarter).evaluate_objective(x), 4.0);
}

TEST(ObjectiveTermsTest, LevelCostIsNodeCategory) {
  fixtures::StorageCase c;
  c.price = {1, 1};
  c.demand = {1, 1};
  c.spec.capacity = 5;
  c.spec.level_cost = 0.5;
  c.tau = 2.0;
  EnergySystem es = fixtures::storage_system(c);
  es.freeze();
  const Model m = build_model(es);
  std::size_t level_terms = 0;
  for (const auto& t : objective_terms(m)) {
    if (t.category != CostCategory::kNodePerStep) continue;
    ++level_terms;
    EXPECT_DOUBLE_EQ(t.coefficient, 1.0);
    EXPECT_TRUE(t.tau_scaled);
  }
  EXPECT_EQ(level_terms, 2u);
}

// Variables: flows * T, +1 per investment, +T levels per storage, +T status
// per nonconvex flow and +T startup when it has a startup cost.
TEST(VariableCountProperty, FormulaHolds) {
  std::mt19937 rng(11);
  for (int round = 0; round < 50; ++round) {
    const std::size_t steps = 1 + rng() % 4;
    EnergySystem es(Horizon(steps, 1.0));
    es.add_node(Node::bus("el"));
    es.add_node(Node::sink("demand"));
    Flow load{"el", "demand"};
    load.nominal_value = 1;
    load.fix = 0.0;
    es.connect(load);
    std::size_t expected = steps;
    const int sources = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < sources; ++i) {
      const std::string label = "s" + std::to_string(i);
      es.add_node(Node::source(label));
      Flow f{label, "el"};
      expected += steps;
      switch (rng() % 3) {
        case 0:
          f.investment = InvestmentSpec{1.0};
          expected += 1;
          break;
        case 1:
          f.nominal_value = 5;
          f.nonconvex = NonconvexSpec{};
          expected += steps;
          if (rng() % 2) {
            f.nonconvex->startup_cost = 2.0;
            expected += steps;
          }
          break;
        default:
          f.nominal_value = 5;
      }
      es.connect(f);
    }
    if (rng() % 2) {
      StorageSpec spec;
      if (rng() % 2) {
        spec.capacity = 3;
      } else {
        spec.investment = InvestmentSpec{1.0};
        expected += 1;
      }
      es.add_node(Node::storage("store", spec));
      es.connect(Flow{"el", "store"});
      es.connect(Flow{"store", "el"});
      expected += 3 * steps;  // two flows and the level
    }
    es.freeze();
    EXPECT_EQ(build_model(es).variables().size(), expected);
  }
}

TEST(LocalityAuditTest, GeneratedRowsPassAndCrossNodeRowsFail) {
  std::vector<EnergySystem> systems;
  systems.push_back(fixtures::simple_dispatch({1, 2}, 1, 5));
  systems.push_back(fixtures::transformer_system(0.5, {1, 2}));
  systems.push_back(fixtures::uc_system({{10, 0.4, 1, 3.0, 2}}, {5, 5, 0}));
  fixtures::StorageCase c;
  c.price = {1, 2};
  c.demand = {1, 1};
  c.spec.investment = InvestmentSpec{1.0};
  c.spec.balanced = true;
  c.spec.initial_level_fraction = 0.5;
  systems.push_back(fixtures::storage_system(c));
  for (auto& es : systems) {
    es.freeze();
    EXPECT_TRUE(audit_locality(build_model(es)).empty());
  }

  EnergySystem es = fixtures::transformer_system(0.5, {1});
  es.freeze();
  Model m = build_model(es);
  ConstraintRow cross;
  cross.name = "cross";
  cross.rule = "test";
  cross.terms = {{1.0, flow_var({"gas_supply", "gas"}, 0)},
                 {1.0, flow_var({"el", "demand"}, 0)}};
  m.add_row(cross);
  EXPECT_EQ(audit_locality(m), std::vector<std::string>{"cross"});
  m.add_custom_row(ConstraintRow{cross.terms, 0.0, Sense::kLessEqual, "custom_cross", ""});
  EXPECT_EQ(audit_locality(m).size(), 1u);
}

TEST(BuildModelTest, Deterministic) {
  auto make = [] {
    EnergySystem es = fixtures::uc_system({{10, 0.4, 1, 3.0, 2}, {8, 0, 3, std::nullopt, std::nullopt}},
                                          {5, 5, 0});
    es.freeze();
    return export_lp(build_model(es));
  };
  EXPECT_EQ(make(), make());
}

TEST(BuildModelTest, TauScalesPerStepTermsLinearly) {
  EnergySystem one = fixtures::simple_dispatch({2, 3}, 4, 10, 1.0);
  EnergySystem two = fixtures::simple_dispatch({2, 3}, 4, 10, 2.0);
  one.freeze();
  two.freeze();
  const Model a = build_model(one), b = build_model(two);
  std::vector<double> x(a.variables().size(), 1.5);
  EXPECT_DOUBLE_EQ(b.evaluate_objective(x), 2.0 * a.evaluate_objective(x));
}

}  // namespace
}  // namespace enerflow
