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
#include <limits>
#include <queue>

#include "enerflow/solver.hpp"

namespace enerflow {

std::string_view solve_status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

double max_violation(const StandardForm& problem, const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t j = 0; j < problem.num_columns(); ++j) {
    worst = std::max(worst, problem.lower[j] - x[j]);
    worst = std::max(worst, x[j] - problem.upper[j]);
  }
  for (std::size_t i = 0; i < problem.num_rows(); ++i) {
    double activity = 0.0;
    for (const auto& e : problem.rows[i]) activity += e.value * x[e.column];
    const double diff = activity - problem.rhs[i];
    switch (problem.senses[i]) {
      case RowSense::kLessEqual: worst = std::max(worst, diff); break;
      case RowSense::kGreaterEqual: worst = std::max(worst, -diff); break;
      case RowSense::kEqual: worst = std::max(worst, std::abs(diff)); break;
    }
  }
  return worst;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kZero = 1e-12;

struct LpOutcome {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> x;
  std::size_t pivots = 0;
};

// x_j = offset + y[pos] - y[neg], y >= 0.
struct ColumnMap {
  double offset = 0.0;
  int pos = -1;
  int neg = -1;
};

// Dense two-phase tableau simplex on the bound-shifted problem. Finite
// upper bounds become explicit rows.
class Tableau {
 public:
  Tableau(const StandardForm& sf, const std::vector<double>& lower,
          const std::vector<double>& upper, const SolverOptions& options)
      : sf_(sf), options_(options) {
    status_ = setup(lower, upper);
  }

  LpOutcome run() {
    LpOutcome out;
    if (status_ != SolveStatus::kOptimal) {
      out.status = status_;
      return out;
    }
    // Phase 1: minimise the sum of artificials.
    std::vector<double> phase1(cols_, 0.0);
    for (std::size_t j = first_art_; j < cols_; ++j) phase1[j] = 1.0;
    price(phase1);
    SolveStatus s = iterate(cols_);
    out.pivots = pivots_;
    if (s == SolveStatus::kIterationLimit) {
      out.status = s;
      return out;
    }
    if (-obj_[cols_] > options_.feasibility_tolerance) {
      out.status = SolveStatus::kInfeasible;
      return out;
    }
    drive_out_artificials();

    // Phase 2 over structural and slack columns only.
    std::vector<double> phase2(cols_, 0.0);
    for (std::size_t j = 0; j < sf_.num_columns(); ++j) {
      const ColumnMap& m = map_[j];
      if (m.pos >= 0) phase2[m.pos] += sf_.objective[j];
      if (m.neg >= 0) phase2[m.neg] -= sf_.objective[j];
    }
    price(phase2);
    s = iterate(first_art_);
    out.pivots = pivots_;
    out.status = s;
    if (s != SolveStatus::kOptimal) return out;

    std::vector<double> y(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) y[basis_[i]] = std::max(0.0, at(i, cols_));
    out.x.resize(sf_.num_columns());
    for (std::size_t j = 0; j < sf_.num_columns(); ++j) {
      const ColumnMap& m = map_[j];
      double v = m.offset;
      if (m.pos >= 0) v += y[m.pos];
      if (m.neg >= 0) v -= y[m.neg];
      out.x[j] = v;
    }
    return out;
  }

 private:
  struct Row {
    std::vector<double> coef;  // over y
    RowSense sense;
    double rhs;
  };

  double& at(std::size_t i, std::size_t j) { return tab_[i * (cols_ + 1) + j]; }

  SolveStatus setup(const std::vector<double>& lower,
                    const std::vector<double>& upper) {
    const std::size_t n = sf_.num_columns();
    map_.resize(n);
    std::size_t ny = 0;
    std::vector<std::pair<std::size_t, double>> bound_rows;
    for (std::size_t j = 0; j < n; ++j) {
      const double lo = lower[j], up = upper[j];
      if (lo > up + options_.feasibility_tolerance) return SolveStatus::kInfeasible;
      ColumnMap& m = map_[j];
      if (std::isfinite(lo) && std::isfinite(up) && up - lo <= kZero) {
        m.offset = lo;
      } else if (std::isfinite(lo)) {
        m.offset = lo;
        m.pos = static_cast<int>(ny++);
        if (std::isfinite(up)) bound_rows.emplace_back(m.pos, up - lo);
      } else if (std::isfinite(up)) {
        m.offset = up;
        m.neg = static_cast<int>(ny++);
      } else {
        m.pos = static_cast<int>(ny++);
        m.neg = static_cast<int>(ny++);
      }
    }

    std::vector<Row> rows;
    for (std::size_t i = 0; i < sf_.num_rows(); ++i) {
      Row r{std::vector<double>(ny, 0.0), sf_.senses[i], sf_.rhs[i]};
      bool empty = true;
      for (const auto& e : sf_.rows[i]) {
        const ColumnMap& m = map_[e.column];
        r.rhs -= e.value * m.offset;
        if (m.pos >= 0) r.coef[m.pos] += e.value, empty = false;
        if (m.neg >= 0) r.coef[m.neg] -= e.value, empty = false;
      }
      if (empty) {
        const double tol = options_.feasibility_tolerance;
        const bool ok = r.sense == RowSense::kLessEqual  ? r.rhs >= -tol
                        : r.sense == RowSense::kGreaterEqual ? r.rhs <= tol
                                                         : std::abs(r.rhs) <= tol;
        if (!ok) return SolveStatus::kInfeasible;
        continue;
      }
      rows.push_back(std::move(r));
    }
    for (const auto& [k, ub] : bound_rows) {
      Row r{std::vector<double>(ny, 0.0), RowSense::kLessEqual, ub};
      r.coef[k] = 1.0;
      rows.push_back(std::move(r));
    }

    std::size_t slacks = 0, arts = 0;
    for (Row& r : rows) {
      if (r.rhs < 0.0) {
        for (double& c : r.coef) c = -c;
        r.rhs = -r.rhs;
        if (r.sense == RowSense::kLessEqual) r.sense = RowSense::kGreaterEqual;
        else if (r.sense == RowSense::kGreaterEqual) r.sense = RowSense::kLessEqual;
      }
      if (r.sense != RowSense::kEqual) ++slacks;
      if (r.sense != RowSense::kLessEqual) ++arts;
    }

    rows_ = rows.size();
    first_art_ = ny + slacks;
    cols_ = first_art_ + arts;
    tab_.assign(rows_ * (cols_ + 1), 0.0);
    basis_.assign(rows_, 0);
    std::size_t next_slack = ny, next_art = first_art_;
    for (std::size_t i = 0; i < rows_; ++i) {
      const Row& r = rows[i];
      std::copy(r.coef.begin(), r.coef.end(), tab_.begin() + i * (cols_ + 1));
      at(i, cols_) = r.rhs;
      if (r.sense == RowSense::kLessEqual) {
        at(i, next_slack) = 1.0;
        basis_[i] = next_slack++;
      } else {
        if (r.sense == RowSense::kGreaterEqual) at(i, next_slack++) = -1.0;
        at(i, next_art) = 1.0;
        basis_[i] = next_art++;
      }
    }
    return SolveStatus::kOptimal;
  }

  // Reduced costs and objective for the current basis.
  void price(const std::vector<double>& cost) {
    obj_.assign(cols_ + 1, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) obj_[j] = cost[j];
    for (std::size_t i = 0; i < rows_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= cb * at(i, j);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const std::size_t w = cols_ + 1;
    double* prow = &tab_[r * w];
    const double inv = 1.0 / prow[c];
    for (std::size_t j = 0; j < w; ++j) prow[j] *= inv;
    prow[c] = 1.0;
    auto eliminate = [&](double* row) {
      const double f = row[c];
      if (f == 0.0) return;
      for (std::size_t j = 0; j < w; ++j) {
        row[j] -= f * prow[j];
        if (std::abs(row[j]) < kZero) row[j] = 0.0;
      }
      row[c] = 0.0;
    };
    for (std::size_t i = 0; i < rows_; ++i)
      if (i != r) eliminate(&tab_[i * w]);
    eliminate(obj_.data());
    basis_[r] = c;
    ++pivots_;
  }

  // Runs simplex pivots; columns >= `allowed` never enter.
  SolveStatus iterate(std::size_t allowed) {
    while (true) {
      if (pivots_ >= options_.max_pivots) return SolveStatus::kIterationLimit;
      const bool bland = degenerate_ >= options_.degenerate_pivot_limit;
      std::size_t enter = cols_;
      double best = -kCostTol;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (obj_[j] < best) {
          enter = j;
          if (bland) break;
          best = obj_[j];
        }
      }
      if (enter == cols_) return SolveStatus::kOptimal;

      std::size_t leave = rows_;
      double ratio = kInf;
      for (std::size_t i = 0; i < rows_; ++i) {
        const double a = at(i, enter);
        if (a <= kPivotTol) continue;
        const double q = at(i, cols_) / a;
        if (leave == rows_ || q < ratio - kZero) {
          leave = i;
          ratio = q;
        } else if (q <= ratio + kZero) {
          const bool better = bland ? basis_[i] < basis_[leave]
                                    : a > at(leave, enter);
          if (better) {
            leave = i;
            ratio = std::min(ratio, q);
          }
        }
      }
      if (leave == rows_) return SolveStatus::kUnbounded;
      if (ratio <= kZero) ++degenerate_;
      pivot(leave, enter);
    }
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < first_art_) continue;
      std::size_t best = cols_;
      double mag = kPivotTol;
      for (std::size_t j = 0; j < first_art_; ++j) {
        if (std::abs(at(i, j)) > mag) {
          mag = std::abs(at(i, j));
          best = j;
        }
      }
      // A row without any usable entry is redundant; its artificial stays
      // basic at zero and never re-enters.
      if (best != cols_) pivot(i, best);
    }
  }

  const StandardForm& sf_;
  const SolverOptions& options_;
  SolveStatus status_;
  std::vector<ColumnMap> map_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t first_art_ = 0;
  std::vector<double> tab_;
  std::vector<double> obj_;
  std::vector<std::size_t> basis_;
  std::size_t pivots_ = 0;
  std::size_t degenerate_ = 0;
};

LpOutcome run_simplex(const StandardForm& sf, const std::vector<double>& lower,
                      const std::vector<double>& upper,
                      const SolverOptions& options) {
  Tableau tableau(sf, lower, upper, options);
  return tableau.run();
}

double objective_of(const StandardForm& sf, const std::vector<double>& x) {
  double z = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) z += sf.objective[j] * x[j];
  return z;
}

// Snaps values within round-off of a bound onto it.
void tidy(const StandardForm& sf, std::vector<double>& x) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (std::abs(x[j] - sf.lower[j]) < 1e-9) x[j] = sf.lower[j];
    if (std::abs(x[j] - sf.upper[j]) < 1e-9) x[j] = sf.upper[j];
    if (std::abs(x[j]) < 1e-11) x[j] = 0.0;
  }
}

void check_feasible(const StandardForm& sf, const std::vector<double>& x,
                    const SolverOptions& options) {
  const double v = max_violation(sf, x);
  if (v > options.feasibility_tolerance)
    throw Error(Errc::kNumericalFailure,
                "solver point violates a row or bound by " + std::to_string(v));
}

Solution finish(const StandardForm& sf, LpOutcome lp, const SolverOptions& options) {
  Solution sol;
  sol.status = lp.status;
  sol.stats.iterations = lp.pivots;
  sol.stats.nodes = 0;
  if (lp.status == SolveStatus::kOptimal) {
    tidy(sf, lp.x);
    check_feasible(sf, lp.x, options);
    sol.objective_value = objective_of(sf, lp.x);
    sol.values = std::move(lp.x);
  }
  return sol;
}

}  // namespace

Solution solve_lp(const StandardForm& problem, const SolverOptions& options) {
  return finish(problem,
                run_simplex(problem, problem.lower, problem.upper, options),
                options);
}

Solution solve_lp(const Model& model, const SolverOptions& options) {
  return solve_lp(to_standard_form(model), options);
}

Solution solve_milp(const StandardForm& problem, const SolverOptions& options) {
  std::vector<std::size_t> integral;
  for (std::size_t j = 0; j < problem.num_columns(); ++j)
    if (problem.is_integral(j)) integral.push_back(j);
  if (integral.empty()) return solve_lp(problem, options);

  struct Node {
    double bound;
    std::size_t seq;
    std::vector<double> lower, upper;
  };
  auto worse = [](const Node& a, const Node& b) {
    return a.bound != b.bound ? a.bound > b.bound : a.seq > b.seq;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);

  Node root{-kInf, 0, problem.lower, problem.upper};
  const double itol = options.integrality_tolerance;
  for (std::size_t j : integral) {
    root.lower[j] = std::ceil(root.lower[j] - itol);
    root.upper[j] = std::floor(root.upper[j] + itol);
  }
  open.push(std::move(root));

  Solution sol;
  double incumbent = kInf;
  std::vector<double> best;
  std::size_t seq = 1;
  bool hit_limit = false;

  while (!open.empty()) {
    if (sol.stats.nodes >= options.max_nodes) {
      hit_limit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (node.bound >= incumbent - options.absolute_gap) continue;

    LpOutcome lp = run_simplex(problem, node.lower, node.upper, options);
    ++sol.stats.nodes;
    sol.stats.iterations += lp.pivots;
    if (lp.status == SolveStatus::kIterationLimit) {
      hit_limit = true;
      break;
    }
    if (lp.status == SolveStatus::kInfeasible) continue;
    if (lp.status == SolveStatus::kUnbounded) {
      sol.status = SolveStatus::kUnbounded;
      return sol;
    }
    const double z = objective_of(problem, lp.x);
    if (z >= incumbent - options.absolute_gap) continue;

    // Most fractional column; ties keep the lowest index.
    std::size_t branch = problem.num_columns();
    double most = itol;
    for (std::size_t j : integral) {
      const double f = lp.x[j] - std::floor(lp.x[j]);
      const double dist = std::min(f, 1.0 - f);
      if (dist > most) {
        most = dist;
        branch = j;
      }
    }
    if (branch == problem.num_columns()) {
      incumbent = z;
      best = std::move(lp.x);
      continue;
    }
    Node down{z, seq++, node.lower, node.upper};
    down.upper[branch] = std::floor(lp.x[branch]);
    Node up{z, seq++, std::move(node.lower), std::move(node.upper)};
    up.lower[branch] = std::ceil(lp.x[branch]);
    open.push(std::move(down));
    open.push(std::move(up));
  }

  if (best.empty()) {
    sol.status = hit_limit ? SolveStatus::kIterationLimit : SolveStatus::kInfeasible;
    return sol;
  }

  // Re-solve with the integral columns pinned to their rounded values so
  // the reported point is exactly integral.
  std::vector<double> lower = problem.lower, upper = problem.upper;
  for (std::size_t j : integral) lower[j] = upper[j] = std::round(best[j]);
  LpOutcome polish = run_simplex(problem, lower, upper, options);
  sol.stats.iterations += polish.pivots;
  std::vector<double> x =
      polish.status == SolveStatus::kOptimal ? std::move(polish.x) : std::move(best);
  tidy(problem, x);
  check_feasible(problem, x, options);
  sol.status = hit_limit ? SolveStatus::kIterationLimit : SolveStatus::kOptimal;
  sol.objective_value = objective_of(problem, x);
  sol.values = std::move(x);
  return sol;
}

Solution solve_milp(const Model& model, const SolverOptions& options) {
  return solve_milp(to_standard_form(model), options);
}

}  // namespace enerflow
