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

// Shared fixtures and reference oracles for the test binaries. The oracles
// deliberately avoid the library's bitset code.

#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <unordered_set>
#include <vector>

#include "speedcov/speedcov.hpp"

namespace speedcov::testing {

using ItemLists = std::vector<std::vector<std::size_t>>;

inline std::vector<std::size_t> range_items(std::size_t first,
                                            std::size_t last) {
  std::vector<std::size_t> out(last - first + 1);
  std::iota(out.begin(), out.end(), first);
  return out;
}

/// Two origins with items {0..59} and {40..89}: 60, 50 and 90 together.
inline ItemLists overlap_items() {
  return {range_items(0, 59), range_items(40, 89)};
}

inline InventoryMatrix overlap_inventory() {
  return InventoryMatrix::from_item_lists(100, overlap_items());
}

inline ItemLists random_items(std::mt19937_64& rng, std::size_t n_origins,
                              std::size_t n_items, double p) {
  std::bernoulli_distribution stock(p);
  ItemLists rows(n_origins);
  for (auto& r : rows)
    for (std::size_t i = 0; i < n_items; ++i)
      if (stock(rng)) r.push_back(i);
  return rows;
}

/// Size of the union of the flagged origins' item lists, via a hash set.
inline std::size_t union_oracle(const ItemLists& rows,
                                const std::vector<std::uint8_t>& bits) {
  std::unordered_set<std::size_t> seen;
  for (std::size_t o = 0; o < rows.size(); ++o)
    if (bits[o]) seen.insert(rows[o].begin(), rows[o].end());
  return seen.size();
}

inline std::vector<std::uint8_t> bits_of(std::uint64_t mask, std::size_t n) {
  std::vector<std::uint8_t> b(n);
  for (std::size_t o = 0; o < n; ++o) b[o] = (mask >> o) & 1U;
  return b;
}

/// Hand-built network: origins first, then destinations, then hubs.
class ToyBuilder {
 public:
  ToyBuilder(int n_origins, int n_destinations, int n_hubs) {
    int id = 0;
    for (int i = 0; i < n_origins; ++i)
      inst_.nodes.push_back({id++, NodeKind::origin, 0.0, 0.0});
    for (int i = 0; i < n_destinations; ++i)
      inst_.nodes.push_back({id++, NodeKind::destination, 0.0, 0.0});
    for (int i = 0; i < n_hubs; ++i)
      inst_.nodes.push_back({id++, NodeKind::hub, 0.0, 0.0});
    inst_.inventory = InventoryMatrix(static_cast<std::size_t>(n_origins), 1);
  }

  int edge(int tail, int head, double cost, double hours = 1.0,
           double capacity = 1.0) {
    const int id = static_cast<int>(inst_.edges.size());
    inst_.edges.push_back({id, tail, head, cost, capacity, hours});
    return id;
  }

  int commodity(int origin, int destination, double volume) {
    const int id = static_cast<int>(inst_.commodities.size());
    inst_.commodities.push_back({id, origin, destination, volume});
    return id;
  }

  int path(int commodity, std::vector<int> edges) {
    const int id = static_cast<int>(inst_.paths.size());
    Path p{id, commodity, std::move(edges), false};
    p.is_short = inst_.path_transit_time(p) <= inst_.speed_threshold_hours;
    inst_.paths.push_back(std::move(p));
    return id;
  }

  ToyBuilder& inventory(InventoryMatrix inv) {
    inst_.inventory = std::move(inv);
    return *this;
  }

  Instance build() const { return inst_; }

 private:
  Instance inst_;
};

/// Two origins (0, 1), one destination (2), one hub (3). Direct edges cost
/// `direct`; both hub legs of each origin and the shared hub->destination
/// leg cost `leg`. Direct edges take 1h (short), hub paths 2 x 5h (long).
inline Instance toy_2x1x1(double v0, double v1, double direct, double leg,
                          InventoryMatrix inv = overlap_inventory()) {
  ToyBuilder b(2, 1, 1);
  const int d0 = b.edge(0, 2, direct, 1.0);
  const int h0 = b.edge(0, 3, leg, 5.0);
  const int d1 = b.edge(1, 2, direct, 1.0);
  const int h1 = b.edge(1, 3, leg, 5.0);
  const int hd = b.edge(3, 2, leg, 5.0);
  const int k0 = b.commodity(0, 2, v0);
  const int k1 = b.commodity(1, 2, v1);
  b.path(k0, {d0});
  b.path(k0, {h0, hd});
  b.path(k1, {d1});
  b.path(k1, {h1, hd});
  b.inventory(std::move(inv));
  return b.build();
}

/// Exhaustive P2 objective for a path choice, from first principles.
inline double p2_objective(const Instance& inst,
                           const std::vector<int>& choice, double gamma,
                           std::size_t* covered_out = nullptr) {
  std::vector<double> flow(inst.edges.size(), 0.0);
  for (std::size_t k = 0; k < choice.size(); ++k)
    for (int e : inst.paths[static_cast<std::size_t>(choice[k])].edges)
      flow[static_cast<std::size_t>(e)] += inst.commodities[k].volume;
  double cost = 0.0;
  for (std::size_t e = 0; e < flow.size(); ++e)
    cost += std::ceil(flow[e] / inst.edges[e].truck_capacity - 1e-9) *
            inst.edges[e].cost_per_truck;
  std::size_t covered = 0;
  for (int d : inst.active_destinations()) {
    std::unordered_set<std::size_t> items;
    for (std::size_t k = 0; k < choice.size(); ++k) {
      const auto& c = inst.commodities[k];
      if (c.destination != d) continue;
      if (!inst.paths[static_cast<std::size_t>(choice[k])].is_short) continue;
      for (auto it : inst.inventory.items(static_cast<std::size_t>(
               inst.origin_index(c.origin))))
        items.insert(it);
    }
    covered += items.size();
  }
  if (covered_out) *covered_out = covered;
  return cost - gamma * static_cast<double>(covered);
}

}  // namespace speedcov::testing
