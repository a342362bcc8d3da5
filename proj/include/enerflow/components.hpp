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

#ifndef ENERFLOW_COMPONENTS_HPP_
#define ENERFLOW_COMPONENTS_HPP_

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace enerflow {

// A time-indexed parameter. Scalars are accepted wherever a profile is and
// are broadcast to the horizon length when the owning flow is connected.
class Profile {
 public:
  Profile(double value) : values_{value}, scalar_(true) {}  // NOLINT
  Profile(std::vector<double> values)                        // NOLINT
      : values_(std::move(values)), scalar_(false) {}
  Profile(std::initializer_list<double> values)
      : values_(values), scalar_(false) {}

  bool is_scalar() const { return scalar_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t t) const {
    return scalar_ ? values_.front() : values_[t];
  }

  // Returns a per-step profile of length `steps`. Sequences are returned
  // unchanged, so a length mismatch survives for validation to report.
  Profile broadcast(std::size_t steps) const {
    if (!scalar_) return *this;
    return Profile(std::vector<double>(steps, values_.front()));
  }

  bool operator==(const Profile&) const = default;

 private:
  std::vector<double> values_;
  bool scalar_;
};

// Capacity as a decision variable. `ep_cost` is charged once per unit of
// newly built capacity; `existing` is added on top of the decision.
struct InvestmentSpec {
  double ep_cost = 0.0;
  double minimum = 0.0;
  double maximum = std::numeric_limits<double>::infinity();
  double existing = 0.0;

  bool operator==(const InvestmentSpec&) const = default;
};

// On/off behaviour of a flow: min load applies only while committed.
struct NonconvexSpec {
  std::optional<double> startup_cost;
  std::optional<std::size_t> minimum_uptime;

  bool operator==(const NonconvexSpec&) const = default;
};

// Conversion factors keyed by bus label. Inputs without an entry default
// to 1, outputs must all be listed.
struct TransformerSpec {
  std::map<std::string, double> output_factors;
  std::map<std::string, double> input_factors;

  double input_factor(const std::string& bus) const {
    auto it = input_factors.find(bus);
    return it == input_factors.end() ? 1.0 : it->second;
  }

  bool operator==(const TransformerSpec&) const = default;
};

struct StorageSpec {
  // Energy capacity; exactly one of capacity and investment is set.
  std::optional<double> capacity;
  std::optional<InvestmentSpec> investment;
  double loss_rate = 0.0;
  double inflow_efficiency = 1.0;
  double outflow_efficiency = 1.0;
  double initial_level_fraction = 0.0;
  bool balanced = false;
  // Cost per unit of stored energy and hour, charged on the level.
  Profile level_cost = 0.0;

  bool operator==(const StorageSpec&) const = default;
};

}  // namespace enerflow

#endif  // ENERFLOW_COMPONENTS_HPP_
