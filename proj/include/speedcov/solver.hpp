// Copyright 2026 The speedcov Authors
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

// LP and MILP entry points.
//
// solve_milp is a best-bound branch-and-bound over the simplex in
// simplex.hpp. Children restart from their parent's optimal basis. At the
// root, rows of the form  sum a_j x_j <= V y  (x binary, y integer, a > 0)
// are strengthened with implied-bound cuts  ceil(a_j / V) x_j <= y.
// Termination follows the first of: relative gap reached, tree exhausted,
// time limit, node limit.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "speedcov/checker.hpp"
#include "speedcov/milp_model.hpp"
#include "speedcov/simplex.hpp"

namespace speedcov {

enum class SolveStatus {
  optimal,
  gap_limit,
  time_limit,
  node_limit,
  infeasible,
  unbounded
};

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal:
      return "optimal";
    case SolveStatus::gap_limit:
      return "gap_limit";
    case SolveStatus::time_limit:
      return "time_limit";
    case SolveStatus::node_limit:
      return "node_limit";
    case SolveStatus::infeasible:
      return "infeasible";
    case SolveStatus::unbounded:
      return "unbounded";
  }
  return "?";
}

/// Proposes a full solution from a node's LP values. The second argument
/// is the number of nodes processed so far. Candidates are re-checked by
/// the solver before acceptance.
/// Valid relation  sum_j weight_j * u_j <= sum of `trucks`,  where each
/// item indicator u_j (the sum of its variables) is 0 or 1 at every integer
/// feasible point and the truck variables are integer. Only used to
/// separate residual-capacity cuts at the root.
struct CapacityAggregate {
  struct Item {
    double weight = 0.0;
    std::vector<int> vars;
  };
  std::vector<int> trucks;
  std::vector<Item> items;
};

using PrimalHeuristic = std::function<std::optional<std::vector<double>>(
    std::span<const double>, std::int64_t)>;

struct SolveOptions {
  double relative_gap_target = 0.001;
  double time_limit_seconds = 7200.0;
  double integrality_tolerance = 1e-6;
  double feasibility_tolerance = 1e-7;
  std::optional<std::int64_t> node_limit;
  bool deterministic = true;  // reserved; the search is single-threaded
  bool root_cuts = true;
  int max_cut_rounds = 50;
  std::string trace_csv;  // per-node log when non-empty
  std::vector<std::vector<double>> initial_solutions;
  PrimalHeuristic heuristic;
  std::vector<CapacityAggregate> capacity_aggregates;
};

struct SolveResult {
  SolveStatus status = SolveStatus::infeasible;
  std::vector<double> values;  // incumbent, empty when none was found
  double objective = kInf;
  double best_bound = -kInf;
  double relative_gap = 1.0;
  std::int64_t nodes_explored = 0;
  std::int64_t lp_iterations = 0;
  double wall_time_seconds = 0.0;
  int cuts_added = 0;
  double root_bound = -kInf;  // root LP value after cuts
  /// Infeasible: name of the row carrying the largest phase-one multiplier.
  /// Unbounded: name of the variable along which the objective decreases.
  std::string certificate;

  bool has_incumbent() const { return !values.empty(); }
};

/// (objective - bound) / max(1e-10, |objective|); 1 without an incumbent.
inline double relative_gap(double objective, double bound) {
  if (!std::isfinite(objective)) return 1.0;
  if (!std::isfinite(bound)) return 1.0;
  return std::max(0.0, objective - bound) /
         std::max(1e-10, std::abs(objective));
}

namespace detail {

inline std::string column_name(const MilpModel& model, int column) {
  if (column < 0) return {};
  if (column < model.num_variables()) return model.variable(column).name;
  const int row = column - model.num_variables();
  if (row < model.num_constraints()) return model.constraint(row).name;
  return "cut_" + std::to_string(row - model.num_constraints());
}

inline std::string row_name(const MilpModel& model, int row) {
  if (row < 0) return {};
  if (row < model.num_constraints()) return model.constraint(row).name;
  return "cut_" + std::to_string(row - model.num_constraints());
}

inline SimplexOptions simplex_options(
    const SolveOptions& opt, std::chrono::steady_clock::time_point deadline) {
  SimplexOptions s;
  s.feasibility_tolerance = opt.feasibility_tolerance;
  s.deadline = deadline;
  return s;
}

struct ImpliedBound {
  int x = 0;
  int y = 0;
  double k = 1.0;
};

// A row  sum a_j x_j - V y <= 0  with binary x_j, a_j > 0 and integer
// y >= 0, as an aggregate with weights a_j / V.
inline std::vector<CapacityAggregate> capacity_rows(const MilpModel& model) {
  std::vector<CapacityAggregate> out;
  for (const auto& row : model.constraints()) {
    double sign;
    if (row.sense == RowSense::less_equal)
      sign = 1.0;
    else if (row.sense == RowSense::greater_equal)
      sign = -1.0;
    else
      continue;
    if (row.rhs != 0.0) continue;
    int y = -1;
    double cap = 0.0;
    bool ok = true;
    for (const Term& t : row.terms) {
      const double a = sign * t.coef;
      const Variable& v = model.variable(t.var);
      if (a < 0.0) {
        if (y >= 0 || !v.is_integral() || v.lower < 0.0) {
          ok = false;
          break;
        }
        y = t.var;
        cap = -a;
      } else if (v.kind != VarKind::binary) {
        ok = false;
        break;
      }
    }
    if (!ok || y < 0) continue;
    CapacityAggregate agg;
    agg.trucks = {y};
    for (const Term& t : row.terms)
      if (t.var != y) agg.items.push_back({sign * t.coef / cap, {t.var}});
    out.push_back(std::move(agg));
  }
  return out;
}

inline std::vector<ImpliedBound> implied_bounds(
    const std::vector<CapacityAggregate>& rows) {
  std::vector<ImpliedBound> out;
  for (const auto& r : rows) {
    if (r.trucks.size() != 1) continue;
    for (const auto& it : r.items)
      if (it.vars.size() == 1)
        out.push_back({it.vars[0], r.trucks[0],
                       std::max(1.0, std::ceil(it.weight - 1e-9))});
  }
  return out;
}

inline std::vector<ImpliedBound> implied_bounds(const MilpModel& model) {
  return implied_bounds(capacity_rows(model));
}

// Residual capacity inequality for a subset S of an aggregate with item
// indicators u_j and truck total Y:
//   sum_S a_j (1 - u_j) >= r (ceil(a(S)) - Y),  r = a(S) - floor(a(S)),
// written as  sum_S a_j u_j - r Y <= a(S) - r ceil(a(S)).
struct ResidualCut {
  std::vector<Term> terms;
  double rhs = 0.0;
  double violation = 0.0;
};

inline std::optional<ResidualCut> residual_capacity_cut(
    const CapacityAggregate& agg, std::span<const double> x) {
  double ybar = 0.0;
  for (int y : agg.trucks) ybar += x[static_cast<std::size_t>(y)];
  const double f = ybar - std::floor(ybar);
  if (f < 1e-6 || f > 1.0 - 1e-6) return std::nullopt;
  std::vector<double> u(agg.items.size(), 0.0);
  for (std::size_t j = 0; j < u.size(); ++j)
    for (int v : agg.items[j].vars) u[j] += x[static_cast<std::size_t>(v)];
  ResidualCut best;
  bool have = false;
  // Candidate subsets: items above a threshold; the fractional part of Y
  // is the classical choice, the others catch rows it misses.
  for (double threshold : {f, 0.5, 1e-6}) {
    double a_s = 0.0;
    double lhs = 0.0;
    std::vector<std::size_t> chosen;
    for (std::size_t j = 0; j < u.size(); ++j)
      if (u[j] > threshold) {
        a_s += agg.items[j].weight;
        lhs += agg.items[j].weight * u[j];
        chosen.push_back(j);
      }
    if (chosen.empty()) continue;
    const double eta = std::ceil(a_s - 1e-9);
    const double r = a_s - (eta - 1.0);
    if (r < 1e-6 || r > 1.0 - 1e-6) continue;
    const double rhs = a_s - r * eta;
    const double viol = lhs - r * ybar - rhs;
    if (viol > 1e-6 && (!have || viol > best.violation)) {
      std::vector<Term> terms;
      for (std::size_t j : chosen)
        for (int v : agg.items[j].vars) terms.push_back({v, agg.items[j].weight});
      for (int y : agg.trucks) terms.push_back({y, -r});
      best = {std::move(terms), rhs, viol};
      have = true;
    }
  }
  if (!have) return std::nullopt;
  return best;
}

// Complemented mixed-integer rounding cut of an aggregate. Dividing
//   sum a_j u_j - sum Y <= 0
// by delta after complementing the items in T (u_j = 1 - v_j) gives
//   sum_{j not in T} (a_j/delta) u_j - sum_T (a_j/delta) v_j - Y/delta
//       <= -a(T)/delta =: beta,
// and MIR rounding with f = frac(beta) replaces each coefficient g of a
// non-negative integer by floor(g) + max(0, frac(g) - f) / (1 - f).
inline std::optional<ResidualCut> cmir_cut(const CapacityAggregate& agg,
                                           std::span<const double> x) {
  std::vector<double> u(agg.items.size(), 0.0);
  for (std::size_t j = 0; j < u.size(); ++j)
    for (int v : agg.items[j].vars) u[j] += x[static_cast<std::size_t>(v)];
  double ybar = 0.0;
  for (int y : agg.trucks) ybar += x[static_cast<std::size_t>(y)];

  std::vector<double> deltas{1.0};
  for (std::size_t j = 0; j < u.size(); ++j)
    if (u[j] > 1e-6 && agg.items[j].weight < 1.0) deltas.push_back(agg.items[j].weight);
  std::sort(deltas.begin(), deltas.end());
  deltas.erase(std::unique(deltas.begin(), deltas.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-9; }),
               deltas.end());

  auto mir = [](double g, double f) {
    const double fl = std::floor(g);
    return fl + std::max(0.0, g - fl - f) / (1.0 - f);
  };

  ResidualCut best;
  double best_eff = 1e-6;
  bool have = false;
  std::vector<std::uint8_t> comp(u.size());
  for (double delta : deltas) {
    for (double thr : {0.5, 1e-6}) {
      double a_t = 0.0;
      for (std::size_t j = 0; j < u.size(); ++j) {
        comp[j] = u[j] > 1.0 - thr ? 1 : 0;
        if (comp[j]) a_t += agg.items[j].weight;
      }
      const double beta = -a_t / delta;
      const double f = beta - std::floor(beta);
      if (f < 0.01 || f > 0.99) continue;
      // cut in the original variables: sum c_j u_j + cy * Y <= rhs
      double rhs = std::floor(beta);
      double lhs = 0.0;
      double norm = 0.0;
      std::vector<double> c(u.size(), 0.0);
      for (std::size_t j = 0; j < u.size(); ++j) {
        const double g = agg.items[j].weight / delta;
        if (comp[j]) {
          const double h = mir(-g, f);  // coefficient of v_j = 1 - u_j
          c[j] = -h;
          rhs -= h;
        } else {
          c[j] = mir(g, f);
        }
        lhs += c[j] * u[j];
        norm += c[j] * c[j] * static_cast<double>(agg.items[j].vars.size());
      }
      const double cy = mir(-1.0 / delta, f);
      lhs += cy * ybar;
      norm += cy * cy * static_cast<double>(agg.trucks.size());
      const double eff = (lhs - rhs) / std::sqrt(std::max(norm, 1e-12));
      if (eff > best_eff) {
        std::vector<Term> terms;
        for (std::size_t j = 0; j < u.size(); ++j)
          if (std::abs(c[j]) > 1e-12)
            for (int v : agg.items[j].vars) terms.push_back({v, c[j]});
        for (int y : agg.trucks) terms.push_back({y, cy});
        best = {std::move(terms), rhs, lhs - rhs};
        best_eff = eff;
        have = true;
      }
    }
  }
  if (!have) return std::nullopt;
  return best;
}

}  // namespace detail

/// Solves the LP relaxation (integrality ignored).
inline SolveResult solve_lp(const MilpModel& model,
                            const SolveOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                  std::chrono::duration<double>(options.time_limit_seconds));
  SimplexSolver lp(model);
  const LpStatus st = lp.solve(detail::simplex_options(options, deadline));
  SolveResult res;
  res.lp_iterations = lp.iterations();
  res.nodes_explored = 1;
  switch (st) {
    case LpStatus::optimal:
      res.status = SolveStatus::optimal;
      res.values = lp.primal();
      res.objective = model.objective_value(res.values);
      res.best_bound = res.objective;
      res.relative_gap = 0.0;
      break;
    case LpStatus::infeasible:
      res.status = SolveStatus::infeasible;
      res.certificate = detail::row_name(model, lp.certificate_row());
      break;
    case LpStatus::unbounded:
      res.status = SolveStatus::unbounded;
      res.certificate = detail::column_name(model, lp.unbounded_column());
      break;
    case LpStatus::iteration_limit:
    case LpStatus::time_limit:
      res.status = SolveStatus::time_limit;
      break;
  }
  res.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return res;
}

/// Best-bound branch-and-bound. Branches on the most fractional integer
/// variable (ties: smallest index); the down child is created first.
inline SolveResult solve_milp(const MilpModel& model,
                              const SolveOptions& options = {}) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(options.time_limit_seconds));
  const SimplexOptions sopt = detail::simplex_options(options, deadline);
  const double int_tol = options.integrality_tolerance;

  SolveResult res;
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  std::unique_ptr<std::ofstream> trace;
  if (!options.trace_csv.empty()) {
    trace = std::make_unique<std::ofstream>(options.trace_csv);
    *trace << "node,depth,bound,incumbent,branch_var\n";
  }

  auto try_incumbent = [&](std::vector<double> values) {
    if (values.size() != static_cast<std::size_t>(model.num_variables()))
      return false;
    const auto rep = check_solution(model, values,
                                    options.feasibility_tolerance, int_tol);
    if (!rep.feasible) return false;
    const double obj = model.objective_value(values);
    if (obj < res.objective - 1e-12 * std::max(1.0, std::abs(obj))) {
      res.objective = obj;
      res.values = std::move(values);
      return true;
    }
    return false;
  };

  for (const auto& start_sol : options.initial_solutions)
    try_incumbent(start_sol);

  SimplexSolver lp(model);
  LpStatus st = lp.solve(sopt);
  res.nodes_explored = 1;
  if (st == LpStatus::infeasible) {
    res.status = SolveStatus::infeasible;
    res.certificate = detail::row_name(model, lp.certificate_row());
    res.lp_iterations = lp.iterations();
    res.wall_time_seconds = elapsed();
    return res;
  }
  if (st == LpStatus::unbounded) {
    res.status = SolveStatus::unbounded;
    res.certificate = detail::column_name(model, lp.unbounded_column());
    res.lp_iterations = lp.iterations();
    res.wall_time_seconds = elapsed();
    return res;
  }

  // Root cut loop.
  if (st == LpStatus::optimal && options.root_cuts) {
    auto aggregates = detail::capacity_rows(model);
    const auto candidates = detail::implied_bounds(aggregates);
    aggregates.insert(aggregates.end(), options.capacity_aggregates.begin(),
                      options.capacity_aggregates.end());
    std::vector<std::uint8_t> added(candidates.size(), 0);
    double last = lp.objective();
    int stalled = 0;
    for (int round = 0; round < options.max_cut_rounds; ++round) {
      const auto x = lp.primal();
      int fresh = 0;
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (added[c]) continue;
        const auto& ib = candidates[c];
        const double viol = ib.k * x[static_cast<std::size_t>(ib.x)] -
                            x[static_cast<std::size_t>(ib.y)];
        if (viol > 1e-6) {
          lp.add_row({{ib.x, ib.k}, {ib.y, -1.0}}, RowSense::less_equal, 0.0);
          added[c] = 1;
          ++fresh;
        }
      }
      for (const auto& row : aggregates) {
        if (auto cut = detail::residual_capacity_cut(row, x)) {
          lp.add_row(cut->terms, RowSense::less_equal, cut->rhs);
          ++fresh;
        }
        if (auto cut = detail::cmir_cut(row, x)) {
          lp.add_row(cut->terms, RowSense::less_equal, cut->rhs);
          ++fresh;
        }
      }
      if (fresh == 0) break;
      res.cuts_added += fresh;
      st = lp.solve(sopt);
      if (st != LpStatus::optimal) break;
      // Drop cuts that went slack so the basis stays small.
      lp.remove_rows(model.num_constraints(),
                     [](int, double slack) { return std::abs(slack) > 1e-6; });
      const double obj = lp.objective();
      if (obj - last < 1e-4 * std::max(1.0, std::abs(obj))) {
        if (++stalled >= 3) break;
      } else {
        stalled = 0;
      }
      last = obj;
    }
    if (st == LpStatus::optimal)
      lp.remove_rows(model.num_constraints(), [](int, double) { return true; });
  }

  if (st == LpStatus::optimal) res.root_bound = lp.objective();

  struct Node {
    std::int64_t id = 0;
    int depth = 0;
    double bound = -kInf;
    std::vector<std::pair<int, std::pair<double, double>>> bounds;
    std::shared_ptr<const SimplexBasis> basis;
  };
  struct Worse {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;
      return a.id > b.id;
    }
  };
  std::priority_queue<Node, std::vector<Node>, Worse> open;
  std::int64_t next_id = 1;

  const int n = model.num_variables();
  std::vector<double> root_lo(static_cast<std::size_t>(n));
  std::vector<double> root_up(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    root_lo[static_cast<std::size_t>(j)] = model.variable(j).lower;
    root_up[static_cast<std::size_t>(j)] = model.variable(j).upper;
  }
  std::vector<int> touched;

  auto prune_level = [&] {
    if (!res.has_incumbent()) return kInf;
    return res.objective - 1e-9 * std::max(1.0, std::abs(res.objective));
  };

  // Handles an optimal node LP: incumbent update, heuristic, branching.
  auto process = [&](const Node& node, std::int64_t processed) {
    const auto x = lp.primal();
    const double bound = std::max(node.bound, lp.objective());
    if (options.heuristic) {
      if (auto cand = options.heuristic(x, processed)) try_incumbent(std::move(*cand));
    }
    int branch = -1;
    double best_frac = -1.0;
    for (int j = 0; j < n; ++j) {
      if (!model.variable(j).is_integral()) continue;
      const double v = x[static_cast<std::size_t>(j)];
      const double f = v - std::floor(v);
      if (f <= int_tol || f >= 1.0 - int_tol) continue;
      const double score = std::min(f, 1.0 - f);
      if (score > best_frac + 1e-12) {
        best_frac = score;
        branch = j;
      }
    }
    if (trace)
      *trace << node.id << ',' << node.depth << ',' << bound << ','
             << res.objective << ',' << branch << '\n';
    if (branch < 0) {
      try_incumbent(x);
      return;
    }
    if (bound >= prune_level()) return;

    // Reduced-cost tightening: moving a nonbasic integer t units off its
    // bound costs at least |d_j| t in the LP, so t is capped by the room
    // left below the incumbent.
    std::vector<std::pair<int, std::pair<double, double>>> tightened;
    if (res.has_incumbent()) {
      const auto d = lp.reduced_costs();
      const double room = prune_level() - lp.objective();
      for (int j = 0; j < n; ++j) {
        if (!model.variable(j).is_integral() || lp.is_basic(j)) continue;
        const double dj = d[static_cast<std::size_t>(j)];
        const double lo = lp.lower(j);
        const double up = lp.upper(j);
        const double xj = x[static_cast<std::size_t>(j)];
        if (dj > 1e-9 && xj <= lo + int_tol) {
          const double nu = lo + std::floor(room / dj + 1e-9);
          if (nu < up) tightened.push_back({j, {lo, nu}});
        } else if (dj < -1e-9 && xj >= up - int_tol) {
          const double nl = up - std::floor(room / -dj + 1e-9);
          if (nl > lo) tightened.push_back({j, {nl, up}});
        }
      }
      if (node.id == 0) {
        for (const auto& [j, b] : tightened) {
          root_lo[static_cast<std::size_t>(j)] = b.first;
          root_up[static_cast<std::size_t>(j)] = b.second;
          lp.set_bounds(j, b.first, b.second);
        }
        tightened.clear();
      }
    }

    auto basis = std::make_shared<const SimplexBasis>(lp.basis());
    const double v = x[static_cast<std::size_t>(branch)];
    const double lo = lp.lower(branch);
    const double up = lp.upper(branch);
    auto child_bounds = node.bounds;
    child_bounds.insert(child_bounds.end(), tightened.begin(), tightened.end());
    Node down{next_id++, node.depth + 1, bound, child_bounds, basis};
    down.bounds.push_back({branch, {lo, std::floor(v)}});
    Node upc{next_id++, node.depth + 1, bound, std::move(child_bounds), basis};
    upc.bounds.push_back({branch, {std::ceil(v), up}});
    open.push(std::move(down));
    open.push(std::move(upc));
  };

  bool stopped = false;
  if (st == LpStatus::optimal) {
    process(Node{0, 0, -kInf, {}, nullptr}, 0);
  } else {
    // Time or iteration limit while still at the root.
    res.status = SolveStatus::time_limit;
    stopped = true;
  }

  while (!stopped && !open.empty()) {
    const double global = std::min(open.top().bound, res.objective);
    if (res.has_incumbent() &&
        relative_gap(res.objective, global) <= options.relative_gap_target) {
      res.status = relative_gap(res.objective, global) <= 0.0
                       ? SolveStatus::optimal
                       : SolveStatus::gap_limit;
      stopped = true;
      break;
    }
    if (Clock::now() > deadline) {
      res.status = SolveStatus::time_limit;
      stopped = true;
      break;
    }
    if (options.node_limit && res.nodes_explored >= *options.node_limit) {
      res.status = SolveStatus::node_limit;
      stopped = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (res.has_incumbent() && node.bound >= prune_level()) continue;

    for (int j : touched)
      lp.set_bounds(j, root_lo[static_cast<std::size_t>(j)],
                    root_up[static_cast<std::size_t>(j)]);
    touched.clear();
    for (const auto& [j, b] : node.bounds) {
      lp.set_bounds(j, b.first, b.second);
      touched.push_back(j);
    }
    if (node.basis) lp.load_basis(*node.basis);
    const LpStatus ns = lp.solve(sopt);
    ++res.nodes_explored;
    if (ns == LpStatus::optimal) {
      process(node, res.nodes_explored);
    } else if (ns == LpStatus::time_limit || ns == LpStatus::iteration_limit) {
      open.push(std::move(node));
      res.status = SolveStatus::time_limit;
      stopped = true;
    }
    // Infeasible nodes are dropped; an unbounded child of a bounded root
    // cannot occur with finite integer bounds.
  }

  if (!stopped) {
    // Tree exhausted.
    res.status = res.has_incumbent() ? SolveStatus::optimal
                                     : SolveStatus::infeasible;
    res.best_bound = res.objective;
  } else {
    double global = open.empty() ? res.objective : open.top().bound;
    if (res.has_incumbent()) global = std::min(global, res.objective);
    res.best_bound = global;
  }
  if (!res.has_incumbent() && res.status == SolveStatus::optimal)
    res.status = SolveStatus::infeasible;
  res.relative_gap =
      res.has_incumbent() ? relative_gap(res.objective, res.best_bound) : 1.0;
  res.lp_iterations = lp.iterations();
  res.wall_time_seconds = elapsed();
  return res;
}

}  // namespace speedcov
