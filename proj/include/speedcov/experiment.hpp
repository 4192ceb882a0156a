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

// Gamma and kappa sweeps over one instance, reported as CSV rows plus a
// JSON document with the solver telemetry.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "speedcov/closure.hpp"
#include "speedcov/error.hpp"
#include "speedcov/instance.hpp"
#include "speedcov/model.hpp"
#include "speedcov/solver.hpp"

namespace speedcov {

inline constexpr int kReportSchemaVersion = 1;

struct ExperimentOptions {
  double relative_gap_target = 0.001;
  double time_limit_seconds = 7200.0;
  ClosureMode mode = ClosureMode::dominated;
  std::optional<std::int64_t> node_limit;
  /// Seed every run with the other runs' path choices and keep whichever
  /// is best under the run's own objective.
  bool share_incumbents = true;
  /// Iterated local search rounds spent on each shared choice under the
  /// receiving run's objective; 0 shares choices as they are.
  int polish_rounds = 300;
};

struct ExperimentRow {
  int n_origins = 0;
  int n_destinations = 0;
  double gamma = 0.0;
  std::optional<std::size_t> kappa;  // empty for the cost-only baseline
  double transport_cost = 0.0;
  std::optional<double> approx_revenue;
  double exact_revenue = 0.0;
  std::size_t exact_coverage = 0;
  double total_cost = 0.0;
  std::size_t directs_count = 0;
  std::size_t n_app = 0;
  double presolve_seconds = 0.0;
  double solve_seconds = 0.0;
  double relative_gap = 1.0;
  std::string status;
  std::optional<std::uint64_t> seed;
  std::string error;

  // telemetry, JSON only
  double objective = kInf;
  double best_bound = -kInf;
  double root_bound = -kInf;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  int cuts = 0;
  PathChoice paths;

  bool baseline() const { return !kappa.has_value(); }
};

struct PlanEntry {
  double gamma = 0.0;
  std::optional<std::size_t> kappa;
};
using ExperimentPlan = std::vector<PlanEntry>;

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  std::vector<std::string> warnings;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

struct PreparedRun {
  ExperimentRow row;
  NetworkModel model;
  SampleMap samples;
};

inline PreparedRun prepare_run(const Instance& inst, double gamma,
                               std::optional<std::size_t> kappa,
                               const ExperimentOptions& opt) {
  PreparedRun run;
  ExperimentRow& row = run.row;
  row.n_origins = inst.n_origins();
  row.n_destinations = static_cast<int>(inst.active_destinations().size());
  row.gamma = gamma;
  row.kappa = kappa;
  if (inst.generation) row.seed = inst.generation->seed;
  const auto t0 = std::chrono::steady_clock::now();
  if (kappa) {
    run.samples = build_all_samples(inst, *kappa);
    for (const auto& [d, s] : run.samples) row.n_app += s.points.size();
    run.model = build_speed_aware_model(inst, run.samples, gamma, opt.mode);
  } else {
    run.model = build_cost_model(inst);
  }
  row.presolve_seconds = seconds_since(t0);
  return run;
}

/// Fills the reported quantities from a path choice; revenue always comes
/// from the coverage oracle.
inline void describe_choice(const Instance& inst, const PreparedRun& run,
                            const std::vector<double>& values,
                            ExperimentRow& row) {
  row.paths = path_choice_of(inst, run.model, values);
  row.transport_cost = transport_cost(inst, row.paths);
  row.exact_coverage = total_coverage(inst, row.paths);
  row.exact_revenue = row.gamma * static_cast<double>(row.exact_coverage);
  row.total_cost = row.transport_cost - row.exact_revenue;
  row.directs_count = count_directs(inst, row.paths);
  row.approx_revenue.reset();
  if (run.model.speed_aware) {
    double approx = 0.0;
    const auto& lay = run.model.layout;
    for (std::size_t di = 0; di < lay.destinations.size(); ++di) {
      const SampleSet& s = run.samples.at(lay.destinations[di]);
      for (std::size_t i = 0; i < lay.alpha_var[di].size(); ++i)
        approx += values[static_cast<std::size_t>(lay.alpha_var[di][i])] *
                  static_cast<double>(s.points[i].value);
    }
    row.approx_revenue = row.gamma * approx;
  }
}

inline SolveOptions solve_options_for(const Instance& inst,
                                      const PreparedRun& run,
                                      const ExperimentOptions& opt) {
  SolveOptions so;
  so.relative_gap_target = opt.relative_gap_target;
  so.time_limit_seconds = opt.time_limit_seconds;
  so.node_limit = opt.node_limit;
  so.heuristic = make_path_heuristic(
      inst, run.model, run.model.speed_aware ? &run.samples : nullptr);
  so.capacity_aggregates = cut_set_aggregates(inst, run.model);
  return so;
}

inline const SampleMap* samples_of(const PreparedRun& run) {
  return run.model.speed_aware ? &run.samples : nullptr;
}

/// Local search on `choice` under the run's own model objective.
inline PathChoice polish(const Instance& inst, const PreparedRun& run,
                         PathChoice choice, const ExperimentOptions& opt) {
  if (opt.polish_rounds <= 0) return choice;
  PathLocalSearch search(inst, run.model, samples_of(run));
  search.perturb(choice, opt.polish_rounds, 10, 1);
  return choice;
}

struct SweepRun {
  PreparedRun prepared;
  std::vector<double> values;  // incumbent, empty when none
  bool ok = false;
};

/// Replaces each run's incumbent by the best pooled path choice under that
/// run's own objective. Bounds are untouched, so gaps only shrink.
inline void share_incumbents(const Instance& inst, std::vector<SweepRun>& runs,
                             const ExperimentOptions& opt) {
  std::set<PathChoice> found;
  for (const auto& r : runs)
    if (r.ok && !r.values.empty()) found.insert(r.prepared.row.paths);
  // every run picks from the same pool, polished under every objective
  std::set<PathChoice> pool = found;
  for (const auto& r : runs)
    if (r.ok && !r.values.empty())
      for (const auto& choice : found) pool.insert(polish(inst, r.prepared, choice, opt));
  for (auto& r : runs) {
    if (!r.ok || r.values.empty()) continue;
    const NetworkModel& nm = r.prepared.model;
    const SampleMap* s = samples_of(r.prepared);
    double best = nm.milp.objective_value(r.values);
    for (const auto& choice : pool) {
      auto x = complete_solution(inst, nm, s, choice);
      if (!x) continue;
      const double v = nm.milp.objective_value(*x);
      if (v < best - 1e-9 * std::max(1.0, std::abs(best))) {
        best = v;
        r.values = std::move(*x);
      }
    }
    ExperimentRow& row = r.prepared.row;
    if (best < row.objective) {
      row.objective = best;
      row.relative_gap = relative_gap(best, row.best_bound);
      describe_choice(inst, r.prepared, r.values, row);
    }
  }
}

inline SweepRun run_one(const Instance& inst, double gamma,
                        std::optional<std::size_t> kappa,
                        const ExperimentOptions& opt,
                        const std::vector<PathChoice>& starts) {
  SweepRun out;
  ExperimentRow& row = out.prepared.row;
  row.gamma = gamma;
  row.kappa = kappa;
  try {
    out.prepared = prepare_run(inst, gamma, kappa, opt);
    SolveOptions so = solve_options_for(inst, out.prepared, opt);
    const NetworkModel& nm = out.prepared.model;
    for (const auto& c : starts)
      if (auto x = complete_solution(inst, nm, samples_of(out.prepared),
                                     polish(inst, out.prepared, c, opt)))
        so.initial_solutions.push_back(std::move(*x));
    const SolveResult res = solve_milp(nm.milp, so);
    ExperimentRow& r = out.prepared.row;
    r.status = to_string(res.status);
    r.solve_seconds = res.wall_time_seconds;
    r.relative_gap = res.relative_gap;
    r.objective = res.objective;
    r.best_bound = res.best_bound;
    r.root_bound = res.root_bound;
    r.nodes = res.nodes_explored;
    r.lp_iterations = res.lp_iterations;
    r.cuts = res.cuts_added;
    if (res.has_incumbent()) {
      out.values = res.values;
      describe_choice(inst, out.prepared, out.values, r);
    } else {
      r.error = "no incumbent (" + r.status + ")";
    }
    out.ok = true;
  } catch (const std::exception& e) {
    out.prepared.row.gamma = gamma;
    out.prepared.row.kappa = kappa;
    out.prepared.row.status = "error";
    out.prepared.row.error = e.what();
  }
  return out;
}

}  // namespace detail

/// Runs every (gamma, kappa) entry in order; an empty kappa selects the
/// cost-only model, whose revenue is still evaluated at the entry's gamma.
inline ExperimentReport run_experiment_plan(const Instance& inst,
                                            const ExperimentPlan& plan,
                                            const ExperimentOptions& opt = {}) {
  detail::require_valid(inst);
  for (const auto& e : plan)
    if (!(e.gamma >= 0.0)) throw ParameterError("gamma must be non-negative");
  std::vector<detail::SweepRun> runs;
  std::vector<PathChoice> starts;
  for (const auto& e : plan) {
    runs.push_back(detail::run_one(
        inst, e.gamma, e.kappa, opt,
        opt.share_incumbents ? starts : std::vector<PathChoice>{}));
    const detail::SweepRun& r = runs.back();
    if (r.ok && !r.values.empty()) starts.push_back(r.prepared.row.paths);
  }
  if (opt.share_incumbents) detail::share_incumbents(inst, runs, opt);
  ExperimentReport rep;
  for (auto& r : runs) rep.rows.push_back(std::move(r.prepared.row));
  return rep;
}

/// Single run: cost-only model when `kappa` is empty, speed-aware otherwise.
inline ExperimentRow solve_instance(const Instance& inst, double gamma,
                                    std::optional<std::size_t> kappa,
                                    const ExperimentOptions& options = {}) {
  detail::require_valid(inst);
  if (!(gamma >= 0.0)) throw ParameterError("gamma must be non-negative");
  auto r = detail::run_one(inst, gamma, kappa, options, {});
  if (!r.ok) throw Error(r.prepared.row.error);
  return std::move(r.prepared.row);
}

/// One row per gamma. A zero gamma runs the cost-only model.
inline ExperimentReport run_gamma_sweep(const Instance& inst,
                                        const std::vector<double>& gammas,
                                        std::size_t kappa,
                                        const ExperimentOptions& options = {}) {
  ExperimentPlan plan;
  for (double g : gammas)
    plan.push_back({g, g == 0.0 ? std::nullopt
                                : std::optional<std::size_t>(kappa)});
  return run_experiment_plan(inst, plan, options);
}

/// A cost-only baseline row evaluated at `gamma`, then one row per
/// distinct kappa in first-seen order.
inline ExperimentReport run_kappa_sweep(const Instance& inst, double gamma,
                                        const std::vector<std::size_t>& kappas,
                                        const ExperimentOptions& options = {}) {
  detail::require_valid(inst);
  if (!(gamma >= 0.0)) throw ParameterError("gamma must be non-negative");
  ExperimentPlan plan;
  std::vector<std::string> warnings;
  plan.push_back({gamma, std::nullopt});
  std::set<std::size_t> seen;
  for (std::size_t k : kappas) {
    if (!seen.insert(k).second) {
      warnings.push_back("duplicate kappa " + std::to_string(k) + " ignored");
      continue;
    }
    plan.push_back({gamma, k});
  }
  auto rep = run_experiment_plan(inst, plan, options);
  rep.warnings = std::move(warnings);
  return rep;
}

// ---- serialisation ----

inline const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = {
      "n_O",           "n_D",           "gamma",
      "kappa",         "transport_cost", "approx_revenue",
      "exact_revenue", "exact_coverage", "total_cost",
      "directs_count", "n_app",         "presolve_seconds",
      "solve_seconds", "relative_gap",  "status",
      "seed",          "error"};
  return cols;
}

namespace detail {

inline std::string fmt(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// CSV with a leading "# speedcov report v<N>" line and a fixed header.
inline std::string to_csv(const ExperimentReport& rep) {
  using detail::fmt;
  std::ostringstream os;
  os << "# speedcov report v" << kReportSchemaVersion << "\n";
  const auto& cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i)
    os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto& r : rep.rows) {
    os << r.n_origins << ',' << r.n_destinations << ',' << fmt(r.gamma) << ','
       << (r.kappa ? std::to_string(*r.kappa) : "") << ','
       << fmt(r.transport_cost) << ','
       << (r.approx_revenue ? fmt(*r.approx_revenue) : "") << ','
       << fmt(r.exact_revenue) << ',' << r.exact_coverage << ','
       << fmt(r.total_cost) << ',' << r.directs_count << ',' << r.n_app << ','
       << fmt(r.presolve_seconds) << ',' << fmt(r.solve_seconds) << ','
       << fmt(r.relative_gap) << ',' << detail::csv_field(r.status) << ','
       << (r.seed ? std::to_string(*r.seed) : "") << ','
       << detail::csv_field(r.error) << "\n";
  }
  return os.str();
}

inline nlohmann::json to_json(const ExperimentReport& rep) {
  using nlohmann::json;
  auto num = [](double v) -> json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  json rows = json::array();
  for (const auto& r : rep.rows) {
    json j;
    j["n_O"] = r.n_origins;
    j["n_D"] = r.n_destinations;
    j["gamma"] = r.gamma;
    j["kappa"] = r.kappa ? json(*r.kappa) : json(nullptr);
    j["transport_cost"] = r.transport_cost;
    j["approx_revenue"] =
        r.approx_revenue ? json(*r.approx_revenue) : json(nullptr);
    j["exact_revenue"] = r.exact_revenue;
    j["exact_coverage"] = r.exact_coverage;
    j["total_cost"] = r.total_cost;
    j["directs_count"] = r.directs_count;
    j["n_app"] = r.n_app;
    j["presolve_seconds"] = r.presolve_seconds;
    j["solve_seconds"] = r.solve_seconds;
    j["relative_gap"] = r.relative_gap;
    j["status"] = r.status;
    j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
    j["error"] = r.error;
    j["solver"] = {{"objective", num(r.objective)},
                   {"best_bound", num(r.best_bound)},
                   {"root_bound", num(r.root_bound)},
                   {"nodes", r.nodes},
                   {"lp_iterations", r.lp_iterations},
                   {"cuts", r.cuts}};
    j["paths"] = r.paths;
    rows.push_back(std::move(j));
  }
  return {{"version", kReportSchemaVersion},
          {"columns", report_columns()},
          {"warnings", rep.warnings},
          {"rows", std::move(rows)}};
}

}  // namespace speedcov
