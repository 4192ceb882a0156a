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

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "speedcov/error.hpp"

namespace speedcov {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { binary, integer, continuous };
enum class RowSense { less_equal, equal, greater_equal };

struct Variable {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = kInf;
  double objective = 0.0;

  bool is_integral() const { return kind != VarKind::continuous; }
  friend bool operator==(const Variable&, const Variable&) = default;
};

struct Term {
  int var = 0;
  double coef = 0.0;
  friend bool operator==(const Term&, const Term&) = default;
};

struct LinearConstraint {
  std::string name;
  std::vector<Term> terms;
  RowSense sense = RowSense::less_equal;
  double rhs = 0.0;
};

/// Bookkeeping carried alongside a model and written to the MPS sidecar.
struct ModelMetadata {
  std::string name = "model";
  std::string instance_id;
  std::optional<double> gamma;
  std::optional<std::size_t> kappa;
  std::string closure_mode;

  friend bool operator==(const ModelMetadata&, const ModelMetadata&) = default;
};

/// Minimisation MILP: variables with bounds and objective coefficients
/// plus linear rows.
class MilpModel {
 public:
  ModelMetadata metadata;

  int add_variable(std::string name, VarKind kind, double lower, double upper,
                   double objective) {
    if (kind == VarKind::binary) {
      lower = std::max(lower, 0.0);
      upper = std::min(upper, 1.0);
    }
    if (!(lower <= upper))
      throw ParameterError("variable '" + name + "' has lower > upper");
    vars_.push_back({std::move(name), kind, lower, upper, objective});
    return static_cast<int>(vars_.size()) - 1;
  }

  int add_constraint(std::string name, std::vector<Term> terms, RowSense sense,
                     double rhs) {
    std::unordered_set<int> ids;
    for (const Term& t : terms) {
      if (t.var < 0 || t.var >= num_variables())
        throw DimensionError("constraint '" + name +
                             "' references unknown variable " +
                             std::to_string(t.var));
      if (!ids.insert(t.var).second)
        throw ParameterError("constraint '" + name +
                             "' repeats variable " + vars_[t.var].name);
    }
    rows_.push_back({std::move(name), std::move(terms), sense, rhs});
    return static_cast<int>(rows_.size()) - 1;
  }

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<LinearConstraint>& constraints() const { return rows_; }
  const Variable& variable(int j) const {
    return vars_.at(static_cast<std::size_t>(j));
  }
  Variable& variable(int j) { return vars_.at(static_cast<std::size_t>(j)); }
  const LinearConstraint& constraint(int i) const {
    return rows_.at(static_cast<std::size_t>(i));
  }

  int num_integral() const {
    return static_cast<int>(std::count_if(
        vars_.begin(), vars_.end(),
        [](const Variable& v) { return v.is_integral(); }));
  }

  /// Index of the variable called `name`, or -1.
  int find_variable(const std::string& name) const {
    for (std::size_t j = 0; j < vars_.size(); ++j)
      if (vars_[j].name == name) return static_cast<int>(j);
    return -1;
  }

  double objective_value(const std::vector<double>& x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < vars_.size(); ++j) s += vars_[j].objective * x[j];
    return s;
  }

  /// Same model with every integrality requirement dropped.
  MilpModel relaxed() const {
    MilpModel m = *this;
    for (auto& v : m.vars_) v.kind = VarKind::continuous;
    return m;
  }

 private:
  std::vector<Variable> vars_;
  std::vector<LinearConstraint> rows_;
};

/// Structural equality: same variables in the same order, same rows in the
/// same order, each row compared as a set of (variable, coefficient) pairs.
inline bool structurally_equal(const MilpModel& a, const MilpModel& b) {
  if (a.variables() != b.variables()) return false;
  if (a.num_constraints() != b.num_constraints()) return false;
  for (int i = 0; i < a.num_constraints(); ++i) {
    const auto& ra = a.constraint(i);
    const auto& rb = b.constraint(i);
    if (ra.name != rb.name || ra.sense != rb.sense || ra.rhs != rb.rhs)
      return false;
    auto ta = ra.terms;
    auto tb = rb.terms;
    auto by_var = [](const Term& x, const Term& y) { return x.var < y.var; };
    std::sort(ta.begin(), ta.end(), by_var);
    std::sort(tb.begin(), tb.end(), by_var);
    if (ta != tb) return false;
  }
  return true;
}

}  // namespace speedcov
