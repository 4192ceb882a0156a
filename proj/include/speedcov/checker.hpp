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

// Solution checker that only reads the model rows. It shares no code with
// the simplex or branch-and-bound and is used to re-verify incumbents.

#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "speedcov/milp_model.hpp"

namespace speedcov {

struct CheckReport {
  bool feasible = true;
  double max_row_violation = 0.0;
  double max_bound_violation = 0.0;
  double max_integrality_violation = 0.0;
  std::vector<std::string> problems;
};

inline CheckReport check_solution(const MilpModel& model,
                                  std::span<const double> values,
                                  double feasibility_tolerance = 1e-7,
                                  double integrality_tolerance = 1e-6) {
  CheckReport rep;
  auto flag = [&](std::string what) {
    rep.feasible = false;
    if (rep.problems.size() < 20) rep.problems.push_back(std::move(what));
  };
  if (values.size() != static_cast<std::size_t>(model.num_variables())) {
    flag("solution has " + std::to_string(values.size()) + " values for " +
         std::to_string(model.num_variables()) + " variables");
    return rep;
  }
  for (int j = 0; j < model.num_variables(); ++j) {
    const Variable& v = model.variable(j);
    const double x = values[static_cast<std::size_t>(j)];
    if (!std::isfinite(x)) {
      flag(v.name + " is not finite");
      continue;
    }
    const double bv = std::max({0.0, v.lower - x, x - v.upper});
    rep.max_bound_violation = std::max(rep.max_bound_violation, bv);
    if (bv > feasibility_tolerance) flag(v.name + " violates its bounds");
    if (v.is_integral()) {
      const double iv = std::abs(x - std::round(x));
      rep.max_integrality_violation = std::max(rep.max_integrality_violation, iv);
      if (iv > integrality_tolerance) flag(v.name + " is fractional");
    }
  }
  for (const auto& row : model.constraints()) {
    double act = 0.0;
    for (const Term& t : row.terms)
      act += t.coef * values[static_cast<std::size_t>(t.var)];
    double viol = 0.0;
    switch (row.sense) {
      case RowSense::less_equal:
        viol = act - row.rhs;
        break;
      case RowSense::greater_equal:
        viol = row.rhs - act;
        break;
      case RowSense::equal:
        viol = std::abs(act - row.rhs);
        break;
    }
    viol = std::max(viol, 0.0);
    rep.max_row_violation = std::max(rep.max_row_violation, viol);
    if (viol > feasibility_tolerance) flag("row " + row.name + " violated");
  }
  return rep;
}

}  // namespace speedcov
