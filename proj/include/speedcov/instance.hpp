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

// Middle-mile network instance: origins, destinations and consolidation
// hubs, the candidate paths of every origin-destination commodity, and the
// inventory stocked at each origin.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "speedcov/coverage.hpp"
#include "speedcov/error.hpp"

namespace speedcov {

enum class NodeKind { origin, destination, hub };

inline const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::origin:
      return "origin";
    case NodeKind::destination:
      return "destination";
    case NodeKind::hub:
      return "hub";
  }
  return "?";
}

struct Node {
  int id = 0;
  NodeKind kind = NodeKind::origin;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  int id = 0;
  int tail = 0;
  int head = 0;
  double cost_per_truck = 0.0;
  double truck_capacity = 1.0;
  double transit_time = 0.0;  // hours

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Commodity {
  int id = 0;
  int origin = 0;
  int destination = 0;
  double volume = 0.0;

  friend bool operator==(const Commodity&, const Commodity&) = default;
};

struct Path {
  int id = 0;
  int commodity = 0;
  std::vector<int> edges;
  bool is_short = false;

  friend bool operator==(const Path&, const Path&) = default;
};

/// Knobs of the random generator: 50 items per origin, an 8 hour threshold,
/// and the geometry and demand choices documented in the README.
struct GenerationParams {
  double cost_per_distance = 100.0;
  double hours_per_distance = 12.0;
  double truck_capacity = 1.0;
  double volume_min = 0.1;
  double volume_max = 1.0;
  double p_store = 0.2;
  int items_per_origin = 50;
  double speed_threshold_hours = 8.0;
  double conversion_factor = 0.1;

  friend bool operator==(const GenerationParams&,
                         const GenerationParams&) = default;
};

struct GenerationInfo {
  int n_origins = 0;
  int n_destinations = 0;
  int n_hubs = 0;
  std::uint64_t seed = 0;
  GenerationParams params;

  friend bool operator==(const GenerationInfo&,
                         const GenerationInfo&) = default;
};

struct Instance {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<Commodity> commodities;
  std::vector<Path> paths;
  InventoryMatrix inventory;
  double speed_threshold_hours = 8.0;
  double conversion_factor = 0.1;
  std::optional<GenerationInfo> generation;

  friend bool operator==(const Instance&, const Instance&) = default;

  std::vector<int> nodes_of_kind(NodeKind kind) const {
    std::vector<int> out;
    for (const auto& n : nodes)
      if (n.kind == kind) out.push_back(n.id);
    return out;
  }
  int n_origins() const {
    return static_cast<int>(nodes_of_kind(NodeKind::origin).size());
  }

  /// Position of `node` among the origins (the inventory row), or -1.
  int origin_index(int node) const {
    int idx = 0;
    for (const auto& n : nodes) {
      if (n.id == node) return n.kind == NodeKind::origin ? idx : -1;
      if (n.kind == NodeKind::origin) ++idx;
    }
    return -1;
  }

  /// Candidate path ids per commodity, in ascending path id.
  std::vector<std::vector<int>> paths_by_commodity() const {
    std::vector<std::vector<int>> out(commodities.size());
    for (const auto& p : paths)
      if (p.commodity >= 0 &&
          p.commodity < static_cast<int>(commodities.size()))
        out[static_cast<std::size_t>(p.commodity)].push_back(p.id);
    return out;
  }

  /// Destinations served by at least one commodity, ascending node id.
  std::vector<int> active_destinations() const {
    std::set<int> ds;
    for (const auto& c : commodities) ds.insert(c.destination);
    return {ds.begin(), ds.end()};
  }

  double path_transit_time(const Path& p) const {
    double t = 0.0;
    for (int e : p.edges) t += edges[static_cast<std::size_t>(e)].transit_time;
    return t;
  }
};

/// Lists every broken invariant; an empty result means the instance is
/// well formed.
inline std::vector<std::string> validate(const Instance& inst) {
  std::vector<std::string> out;
  const auto n_nodes = static_cast<int>(inst.nodes.size());
  const auto n_edges = static_cast<int>(inst.edges.size());
  const auto n_comm = static_cast<int>(inst.commodities.size());
  auto node_ok = [&](int v) { return v >= 0 && v < n_nodes; };

  for (int i = 0; i < n_nodes; ++i)
    if (inst.nodes[static_cast<std::size_t>(i)].id != i)
      out.push_back("node at position " + std::to_string(i) + " has id " +
                    std::to_string(inst.nodes[static_cast<std::size_t>(i)].id));

  for (int i = 0; i < n_edges; ++i) {
    const Edge& e = inst.edges[static_cast<std::size_t>(i)];
    const std::string tag = "edge " + std::to_string(i);
    if (e.id != i) out.push_back(tag + " has id " + std::to_string(e.id));
    if (!node_ok(e.tail) || !node_ok(e.head))
      out.push_back(tag + " references a missing node");
    else if (e.tail == e.head)
      out.push_back(tag + " is a self loop");
    if (!(e.cost_per_truck >= 0.0))
      out.push_back(tag + " has negative cost_per_truck");
    if (!(e.truck_capacity > 0.0))
      out.push_back(tag + " has non-positive truck_capacity");
    if (!(e.transit_time >= 0.0))
      out.push_back(tag + " has negative transit_time");
  }

  std::set<std::pair<int, int>> od_pairs;
  for (int k = 0; k < n_comm; ++k) {
    const Commodity& c = inst.commodities[static_cast<std::size_t>(k)];
    const std::string tag = "commodity " + std::to_string(k);
    if (c.id != k) out.push_back(tag + " has id " + std::to_string(c.id));
    if (!node_ok(c.origin) ||
        inst.nodes[static_cast<std::size_t>(c.origin)].kind !=
            NodeKind::origin)
      out.push_back(tag + " origin is not an origin node");
    if (!node_ok(c.destination) ||
        inst.nodes[static_cast<std::size_t>(c.destination)].kind !=
            NodeKind::destination)
      out.push_back(tag + " destination is not a destination node");
    if (!(c.volume > 0.0)) out.push_back(tag + " has non-positive volume");
    if (!od_pairs.insert({c.origin, c.destination}).second)
      out.push_back(tag + " duplicates origin-destination pair (" +
                    std::to_string(c.origin) + ", " +
                    std::to_string(c.destination) + ")");
  }

  std::vector<int> n_paths(static_cast<std::size_t>(n_comm), 0);
  for (std::size_t i = 0; i < inst.paths.size(); ++i) {
    const Path& p = inst.paths[i];
    const std::string tag = "path " + std::to_string(i);
    if (p.id != static_cast<int>(i))
      out.push_back(tag + " has id " + std::to_string(p.id));
    if (p.commodity < 0 || p.commodity >= n_comm) {
      out.push_back(tag + " references missing commodity " +
                    std::to_string(p.commodity));
      continue;
    }
    ++n_paths[static_cast<std::size_t>(p.commodity)];
    if (p.edges.empty()) {
      out.push_back(tag + " has no edges");
      continue;
    }
    bool edges_ok = true;
    for (int e : p.edges)
      if (e < 0 || e >= n_edges) {
        out.push_back(tag + " references missing edge " + std::to_string(e));
        edges_ok = false;
      }
    if (!edges_ok) continue;
    const Commodity& c = inst.commodities[static_cast<std::size_t>(p.commodity)];
    int at = c.origin;
    std::set<int> seen{at};
    bool walk_ok = true;
    for (int e : p.edges) {
      const Edge& ed = inst.edges[static_cast<std::size_t>(e)];
      if (ed.tail != at || !seen.insert(ed.head).second) {
        walk_ok = false;
        break;
      }
      at = ed.head;
    }
    if (!walk_ok || at != c.destination)
      out.push_back(tag + " is not a simple walk from origin " +
                    std::to_string(c.origin) + " to destination " +
                    std::to_string(c.destination));
    const double t = inst.path_transit_time(p);
    const bool short_now = t <= inst.speed_threshold_hours;
    if (short_now != p.is_short)
      out.push_back(tag + " has is_short=" + (p.is_short ? "true" : "false") +
                    " but transit time " + std::to_string(t) +
                    "h against threshold " +
                    std::to_string(inst.speed_threshold_hours) + "h");
  }
  for (int k = 0; k < n_comm; ++k)
    if (n_paths[static_cast<std::size_t>(k)] == 0)
      out.push_back("commodity " + std::to_string(k) +
                    " has no candidate paths");

  if (!(inst.speed_threshold_hours > 0.0))
    out.push_back("speed_threshold_hours must be positive");
  if (!(inst.conversion_factor >= 0.0))
    out.push_back("conversion_factor must be non-negative");
  const auto n_orig = static_cast<std::size_t>(inst.n_origins());
  if (inst.inventory.n_origins() != n_orig)
    out.push_back("inventory has " +
                  std::to_string(inst.inventory.n_origins()) +
                  " rows, expected " + std::to_string(n_orig));
  return out;
}

namespace detail {

inline void check_generation_params(int n_origins, int n_destinations,
                                    int n_hubs, const GenerationParams& p) {
  auto fail = [](const std::string& m) { throw ParameterError(m); };
  if (n_origins < 1) fail("n_origins must be >= 1");
  if (n_destinations < 1) fail("n_destinations must be >= 1");
  if (n_hubs < 0) fail("n_hubs must be >= 0");
  if (!(p.p_store > 0.0 && p.p_store <= 1.0))
    fail("p_store must lie in (0, 1]");
  if (!(p.volume_min > 0.0 && p.volume_min <= p.volume_max))
    fail("volume range must satisfy 0 < volume_min <= volume_max");
  if (!(p.truck_capacity > 0.0)) fail("truck_capacity must be positive");
  if (!(p.cost_per_distance >= 0.0))
    fail("cost_per_distance must be non-negative");
  if (!(p.hours_per_distance >= 0.0))
    fail("hours_per_distance must be non-negative");
  if (p.items_per_origin < 1) fail("items_per_origin must be >= 1");
  if (!(p.speed_threshold_hours > 0.0))
    fail("speed_threshold_hours must be positive");
  if (!(p.conversion_factor >= 0.0))
    fail("conversion_factor must be non-negative");
}

}  // namespace detail

/// Random instance: nodes uniform in the unit square, one commodity per
/// origin-destination pair, a direct path plus one path through each hub.
/// Edges are created only when a path first uses them.
inline Instance generate_random(int n_origins, int n_destinations, int n_hubs,
                                std::uint64_t seed,
                                const GenerationParams& params = {}) {
  detail::check_generation_params(n_origins, n_destinations, n_hubs, params);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Instance inst;
  inst.speed_threshold_hours = params.speed_threshold_hours;
  inst.conversion_factor = params.conversion_factor;
  inst.generation = GenerationInfo{n_origins, n_destinations, n_hubs, seed,
                                   params};

  auto add_nodes = [&](int count, NodeKind kind) {
    for (int i = 0; i < count; ++i) {
      Node n;
      n.id = static_cast<int>(inst.nodes.size());
      n.kind = kind;
      n.x = unit(rng);
      n.y = unit(rng);
      inst.nodes.push_back(n);
    }
  };
  add_nodes(n_origins, NodeKind::origin);
  add_nodes(n_destinations, NodeKind::destination);
  add_nodes(n_hubs, NodeKind::hub);

  std::map<std::pair<int, int>, int> edge_ids;
  auto edge_between = [&](int tail, int head) {
    auto [it, fresh] =
        edge_ids.try_emplace({tail, head}, static_cast<int>(inst.edges.size()));
    if (fresh) {
      const Node& a = inst.nodes[static_cast<std::size_t>(tail)];
      const Node& b = inst.nodes[static_cast<std::size_t>(head)];
      const double dist = std::hypot(a.x - b.x, a.y - b.y);
      Edge e;
      e.id = it->second;
      e.tail = tail;
      e.head = head;
      e.cost_per_truck = params.cost_per_distance * dist;
      e.truck_capacity = params.truck_capacity;
      e.transit_time = params.hours_per_distance * dist;
      inst.edges.push_back(e);
    }
    return it->second;
  };

  std::uniform_real_distribution<double> vol(params.volume_min,
                                             params.volume_max);
  for (int o = 0; o < n_origins; ++o) {
    for (int di = 0; di < n_destinations; ++di) {
      const int d = n_origins + di;
      Commodity c;
      c.id = static_cast<int>(inst.commodities.size());
      c.origin = o;
      c.destination = d;
      c.volume = vol(rng);
      inst.commodities.push_back(c);

      auto add_path = [&](std::vector<int> edges) {
        Path p;
        p.id = static_cast<int>(inst.paths.size());
        p.commodity = c.id;
        p.edges = std::move(edges);
        p.is_short = inst.path_transit_time(p) <= inst.speed_threshold_hours;
        inst.paths.push_back(std::move(p));
      };
      add_path({edge_between(o, d)});
      for (int h = 0; h < n_hubs; ++h) {
        const int hub = n_origins + n_destinations + h;
        add_path({edge_between(o, hub), edge_between(hub, d)});
      }
    }
  }

  const auto n_items =
      static_cast<std::size_t>(params.items_per_origin) *
      static_cast<std::size_t>(n_origins);
  inst.inventory =
      InventoryMatrix(static_cast<std::size_t>(n_origins), n_items);
  std::bernoulli_distribution stocked(params.p_store);
  for (std::size_t o = 0; o < static_cast<std::size_t>(n_origins); ++o)
    for (std::size_t it = 0; it < n_items; ++it)
      if (stocked(rng)) inst.inventory.set(o, it);
  return inst;
}

}  // namespace speedcov
