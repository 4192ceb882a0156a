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

// Concave closure of the coverage function over a sample set:
//
//   value(t) = max  sum_i w_i v_i
//              s.t. sum_i w_i b_i  (= or <=)  t,  sum_i w_i = 1,  w >= 0
//
// where (b_i, v_i) are the sample vertices and their coverage. Equality
// mode is the textbook closure and is only defined on the convex hull of
// the samples. Dominated mode relaxes the first block to <=; it is always
// feasible because every sample set holds the all-zeros vertex, and it
// never exceeds the true coverage at a 0/1 target when coverage is
// monotone.

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "speedcov/error.hpp"
#include "speedcov/milp_model.hpp"
#include "speedcov/sampling.hpp"
#include "speedcov/solver.hpp"

namespace speedcov {

enum class ClosureMode { equality, dominated };

inline const char* to_string(ClosureMode m) {
  return m == ClosureMode::equality ? "equality" : "dominated";
}

inline ClosureMode closure_mode_from_string(const std::string& s) {
  if (s == "equality") return ClosureMode::equality;
  if (s == "dominated") return ClosureMode::dominated;
  throw ParameterError("unknown closure mode '" + s +
                       "' (expected equality or dominated)");
}

struct ClosureQuery {
  const SampleSet* samples = nullptr;
  std::vector<double> target;
  ClosureMode mode = ClosureMode::equality;
};

struct ClosureValue {
  double value = 0.0;
  std::vector<double> weights;  // one per sample point
};

inline RowSense closure_sense(ClosureMode m) {
  return m == ClosureMode::equality ? RowSense::equal : RowSense::less_equal;
}

inline ClosureValue evaluate_closure(const ClosureQuery& query) {
  if (query.samples == nullptr || query.samples->points.empty())
    throw ParameterError("closure needs a non-empty sample set");
  const SampleSet& s = *query.samples;
  const std::size_t n = s.n_origins();
  if (query.target.size() != n)
    throw DimensionError("closure target has " +
                         std::to_string(query.target.size()) +
                         " entries, samples have " + std::to_string(n));
  for (double t : query.target)
    if (!(t >= 0.0 && t <= 1.0))
      throw ParameterError("closure target entries must lie in [0, 1]");

  MilpModel lp;
  lp.metadata.name = "closure";
  for (std::size_t i = 0; i < s.points.size(); ++i)
    lp.add_variable("w" + std::to_string(i), VarKind::continuous, 0.0, kInf,
                    -static_cast<double>(s.points[i].value));
  for (std::size_t o = 0; o < n; ++o) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < s.points.size(); ++i)
      if (s.points[i].bits[o]) terms.push_back({static_cast<int>(i), 1.0});
    lp.add_constraint("origin" + std::to_string(o), std::move(terms),
                      closure_sense(query.mode), query.target[o]);
  }
  std::vector<Term> conv;
  for (std::size_t i = 0; i < s.points.size(); ++i)
    conv.push_back({static_cast<int>(i), 1.0});
  lp.add_constraint("convexity", std::move(conv), RowSense::equal, 1.0);

  const SolveResult r = solve_lp(lp);
  if (r.status == SolveStatus::infeasible)
    throw InfeasibleError("closure target lies outside the sample hull (" +
                          r.certificate + ")");
  if (r.status != SolveStatus::optimal)
    throw Error(std::string("closure LP ended with status ") +
                to_string(r.status));
  ClosureValue out;
  out.weights = r.values;
  double v = 0.0;
  for (std::size_t i = 0; i < s.points.size(); ++i)
    v += out.weights[i] * static_cast<double>(s.points[i].value);
  out.value = v;
  return out;
}

/// Dominated-mode closure at a 0/1 target: the best sample value among
/// points that only switch on origins switched on in `target`. Any feasible
/// weight vector must vanish on the other points, so the LP reduces to this
/// maximum.
inline std::size_t dominated_value_at_vertex(
    const SampleSet& samples, std::span<const std::uint8_t> target) {
  std::size_t best = 0;
  for (const auto& p : samples.points) {
    bool inside = true;
    for (std::size_t o = 0; o < target.size(); ++o)
      if (p.bits[o] && !target[o]) {
        inside = false;
        break;
      }
    if (inside && p.value > best) best = p.value;
  }
  return best;
}

struct ClosureDeviation {
  std::size_t point = 0;
  double expected = 0.0;
  double got = 0.0;
};

struct ClosureExactnessReport {
  std::vector<ClosureDeviation> deviations;
  bool exact() const { return deviations.empty(); }
};

/// Evaluates the equality-mode closure at every sample vertex and lists
/// the points where it differs from the stored coverage by more than
/// `tolerance`.
inline ClosureExactnessReport closure_exactness_check(const SampleSet& samples,
                                                      double tolerance = 1e-6) {
  ClosureExactnessReport rep;
  for (std::size_t i = 0; i < samples.points.size(); ++i) {
    const auto& p = samples.points[i];
    ClosureQuery q{&samples, {p.bits.begin(), p.bits.end()},
                   ClosureMode::equality};
    const double expected = static_cast<double>(p.value);
    double got;
    try {
      got = evaluate_closure(q).value;
    } catch (const InfeasibleError&) {
      got = std::nan("");
    }
    if (!(std::abs(got - expected) <= tolerance))
      rep.deviations.push_back({i, expected, got});
  }
  return rep;
}

}  // namespace speedcov
