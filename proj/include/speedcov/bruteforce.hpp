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

// Exhaustive reference answers for tiny instances. Nothing here is clever
// on purpose.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "speedcov/coverage.hpp"
#include "speedcov/error.hpp"
#include "speedcov/instance.hpp"
#include "speedcov/model.hpp"
#include "speedcov/sampling.hpp"

namespace speedcov {

inline constexpr std::uint64_t kMaxEnumeratedAssignments = 10'000'000;
inline constexpr std::size_t kMaxFullVertexOrigins = 20;

struct EnumerationResult {
  double objective = 0.0;
  PathChoice paths;                       // path id per commodity
  std::map<int, std::size_t> coverage;    // destination -> unique items
  double transport_cost = 0.0;
  std::uint64_t enumerated = 0;
};

/// Minimises transport cost - gamma * sum_d coverage_d over every path
/// assignment. Ties go to the lexicographically smallest path-id vector.
inline EnumerationResult enumerate_p2(const Instance& inst, double gamma) {
  if (!(gamma >= 0.0)) throw ParameterError("gamma must be non-negative");
  detail::require_valid(inst);
  const auto by_comm = inst.paths_by_commodity();
  std::uint64_t total = 1;
  for (const auto& ps : by_comm) {
    total *= ps.size();
    if (total > kMaxEnumeratedAssignments)
      throw GuardError("instance has more than " +
                       std::to_string(kMaxEnumeratedAssignments) +
                       " path assignments");
  }
  const auto dests = inst.active_destinations();

  EnumerationResult best;
  bool have = false;
  std::vector<std::size_t> pos(by_comm.size(), 0);
  PathChoice choice(by_comm.size());
  std::uint64_t count = 0;
  while (true) {
    for (std::size_t k = 0; k < by_comm.size(); ++k) choice[k] = by_comm[k][pos[k]];
    ++count;
    const double cost = transport_cost(inst, choice);
    std::map<int, std::size_t> cov;
    double covered = 0.0;
    for (int d : dests) {
      cov[d] = coverage(inst.inventory, speed_mask(inst, choice, d));
      covered += static_cast<double>(cov[d]);
    }
    const double obj = cost - gamma * covered;
    if (!have || obj < best.objective - 1e-9 * std::max(1.0, std::abs(obj))) {
      best.objective = obj;
      best.paths = choice;
      best.coverage = std::move(cov);
      best.transport_cost = cost;
      have = true;
    }
    // odometer, last commodity fastest: visits choices in lexicographic order
    std::size_t k = by_comm.size();
    while (k > 0) {
      --k;
      if (++pos[k] < by_comm[k].size()) break;
      pos[k] = 0;
      if (k == 0) {
        k = by_comm.size() + 1;
        break;
      }
    }
    if (k == by_comm.size() + 1 || by_comm.empty()) break;
  }
  best.enumerated = count;
  return best;
}

/// Every vertex of {0,1}^n_origins with its exact coverage. Bit o of the
/// point index switches on origin o.
inline SampleSet full_vertex_closure(const InventoryMatrix& inv,
                                     int destination) {
  const std::size_t n = inv.n_origins();
  if (n > kMaxFullVertexOrigins)
    throw GuardError("full vertex closure is limited to " +
                     std::to_string(kMaxFullVertexOrigins) + " origins");
  SampleSet s;
  s.destination = destination;
  s.kappa = n;
  const std::uint64_t count = std::uint64_t{1} << n;
  s.points.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    SamplePoint p;
    p.bits.assign(n, 0);
    for (std::size_t o = 0; o < n; ++o) p.bits[o] = (mask >> o) & 1u;
    p.value = coverage(inv, p.bits);
    s.points.push_back(std::move(p));
  }
  return s;
}

/// Full vertex sample sets for every destination with commodities.
inline SampleMap full_vertex_samples(const Instance& inst) {
  SampleMap out;
  for (int d : inst.active_destinations())
    out.emplace(d, full_vertex_closure(inst.inventory, d));
  return out;
}

}  // namespace speedcov
