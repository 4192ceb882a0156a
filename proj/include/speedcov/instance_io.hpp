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

// Versioned JSON persistence for Instance. Inventory rows are stored as
// sorted item-id arrays rather than raw bitmaps.

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "speedcov/error.hpp"
#include "speedcov/instance.hpp"

namespace speedcov {

inline constexpr int kInstanceSchemaVersion = 1;

namespace detail {

using nlohmann::json;

inline const json& require(const json& j, const char* key,
                           const std::string& where) {
  if (!j.is_object())
    throw LoadError("expected an object at '" + where + "'");
  auto it = j.find(key);
  if (it == j.end())
    throw LoadError("missing field '" + std::string(key) + "' in " + where);
  return *it;
}

template <typename T>
T read_field(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw LoadError("field '" + std::string(key) + "' in " + where +
                    " has the wrong type");
  }
}

inline json params_to_json(const GenerationParams& p) {
  return json{{"cost_per_distance", p.cost_per_distance},
              {"hours_per_distance", p.hours_per_distance},
              {"truck_capacity", p.truck_capacity},
              {"volume_min", p.volume_min},
              {"volume_max", p.volume_max},
              {"p_store", p.p_store},
              {"items_per_origin", p.items_per_origin},
              {"speed_threshold_hours", p.speed_threshold_hours},
              {"conversion_factor", p.conversion_factor}};
}

inline GenerationParams params_from_json(const json& j) {
  const std::string w = "generation_params.params";
  GenerationParams p;
  p.cost_per_distance = read_field<double>(j, "cost_per_distance", w);
  p.hours_per_distance = read_field<double>(j, "hours_per_distance", w);
  p.truck_capacity = read_field<double>(j, "truck_capacity", w);
  p.volume_min = read_field<double>(j, "volume_min", w);
  p.volume_max = read_field<double>(j, "volume_max", w);
  p.p_store = read_field<double>(j, "p_store", w);
  p.items_per_origin = read_field<int>(j, "items_per_origin", w);
  p.speed_threshold_hours = read_field<double>(j, "speed_threshold_hours", w);
  p.conversion_factor = read_field<double>(j, "conversion_factor", w);
  return p;
}

}  // namespace detail

inline nlohmann::json to_json(const Instance& inst) {
  using nlohmann::json;
  json j;
  j["version"] = kInstanceSchemaVersion;
  json nodes = json::array();
  for (const auto& n : inst.nodes)
    nodes.push_back(
        {{"id", n.id}, {"kind", to_string(n.kind)}, {"x", n.x}, {"y", n.y}});
  j["nodes"] = std::move(nodes);
  json edges = json::array();
  for (const auto& e : inst.edges)
    edges.push_back({{"id", e.id},
                     {"tail", e.tail},
                     {"head", e.head},
                     {"cost_per_truck", e.cost_per_truck},
                     {"truck_capacity", e.truck_capacity},
                     {"transit_time", e.transit_time}});
  j["edges"] = std::move(edges);
  json comms = json::array();
  for (const auto& c : inst.commodities)
    comms.push_back({{"id", c.id},
                     {"origin", c.origin},
                     {"destination", c.destination},
                     {"volume", c.volume}});
  j["commodities"] = std::move(comms);
  json paths = json::array();
  for (const auto& p : inst.paths)
    paths.push_back({{"id", p.id},
                     {"commodity", p.commodity},
                     {"edges", p.edges},
                     {"is_short", p.is_short}});
  j["paths"] = std::move(paths);
  json rows = json::array();
  for (std::size_t o = 0; o < inst.inventory.n_origins(); ++o)
    rows.push_back(inst.inventory.items(o));
  j["inventory"] = {{"n_items", inst.inventory.n_items()},
                    {"items", std::move(rows)}};
  j["speed_threshold_hours"] = inst.speed_threshold_hours;
  j["conversion_factor"] = inst.conversion_factor;
  if (inst.generation) {
    const auto& g = *inst.generation;
    j["generation_params"] = {{"n_origins", g.n_origins},
                              {"n_destinations", g.n_destinations},
                              {"n_hubs", g.n_hubs},
                              {"seed", g.seed},
                              {"params", detail::params_to_json(g.params)}};
  }
  return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
  using detail::read_field;
  using detail::require;
  using nlohmann::json;
  if (!j.is_object()) throw LoadError("instance document is not an object");
  const int version = read_field<int>(j, "version", "instance");
  if (version != kInstanceSchemaVersion)
    throw LoadError("unsupported instance schema version " +
                    std::to_string(version) + " (expected " +
                    std::to_string(kInstanceSchemaVersion) + ")");

  Instance inst;
  const json& nodes = require(j, "nodes", "instance");
  if (!nodes.is_array()) throw LoadError("field 'nodes' must be an array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string w = "nodes[" + std::to_string(i) + "]";
    Node n;
    n.id = read_field<int>(nodes[i], "id", w);
    const auto kind = read_field<std::string>(nodes[i], "kind", w);
    if (kind == "origin")
      n.kind = NodeKind::origin;
    else if (kind == "destination")
      n.kind = NodeKind::destination;
    else if (kind == "hub")
      n.kind = NodeKind::hub;
    else
      throw LoadError("field 'kind' in " + w + " has unknown value '" + kind +
                      "'");
    n.x = read_field<double>(nodes[i], "x", w);
    n.y = read_field<double>(nodes[i], "y", w);
    inst.nodes.push_back(n);
  }

  const json& edges = require(j, "edges", "instance");
  if (!edges.is_array()) throw LoadError("field 'edges' must be an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string w = "edges[" + std::to_string(i) + "]";
    Edge e;
    e.id = read_field<int>(edges[i], "id", w);
    e.tail = read_field<int>(edges[i], "tail", w);
    e.head = read_field<int>(edges[i], "head", w);
    e.cost_per_truck = read_field<double>(edges[i], "cost_per_truck", w);
    e.truck_capacity = read_field<double>(edges[i], "truck_capacity", w);
    e.transit_time = read_field<double>(edges[i], "transit_time", w);
    inst.edges.push_back(e);
  }

  const json& comms = require(j, "commodities", "instance");
  if (!comms.is_array())
    throw LoadError("field 'commodities' must be an array");
  for (std::size_t i = 0; i < comms.size(); ++i) {
    const std::string w = "commodities[" + std::to_string(i) + "]";
    Commodity c;
    c.id = read_field<int>(comms[i], "id", w);
    c.origin = read_field<int>(comms[i], "origin", w);
    c.destination = read_field<int>(comms[i], "destination", w);
    c.volume = read_field<double>(comms[i], "volume", w);
    inst.commodities.push_back(c);
  }

  const json& paths = require(j, "paths", "instance");
  if (!paths.is_array()) throw LoadError("field 'paths' must be an array");
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const std::string w = "paths[" + std::to_string(i) + "]";
    Path p;
    p.id = read_field<int>(paths[i], "id", w);
    p.commodity = read_field<int>(paths[i], "commodity", w);
    p.edges = read_field<std::vector<int>>(paths[i], "edges", w);
    p.is_short = read_field<bool>(paths[i], "is_short", w);
    inst.paths.push_back(std::move(p));
  }

  const json& inv = require(j, "inventory", "instance");
  const auto n_items = read_field<std::size_t>(inv, "n_items", "inventory");
  const auto rows =
      read_field<std::vector<std::vector<std::size_t>>>(inv, "items",
                                                        "inventory");
  for (std::size_t o = 0; o < rows.size(); ++o)
    for (std::size_t item : rows[o])
      if (item >= n_items)
        throw LoadError("field 'items' in inventory: item " +
                        std::to_string(item) + " of origin " +
                        std::to_string(o) + " exceeds n_items");
  inst.inventory = InventoryMatrix::from_item_lists(n_items, rows);

  inst.speed_threshold_hours =
      read_field<double>(j, "speed_threshold_hours", "instance");
  inst.conversion_factor =
      read_field<double>(j, "conversion_factor", "instance");

  if (auto it = j.find("generation_params"); it != j.end()) {
    const std::string w = "generation_params";
    GenerationInfo g;
    g.n_origins = read_field<int>(*it, "n_origins", w);
    g.n_destinations = read_field<int>(*it, "n_destinations", w);
    g.n_hubs = read_field<int>(*it, "n_hubs", w);
    g.seed = read_field<std::uint64_t>(*it, "seed", w);
    g.params = detail::params_from_json(require(*it, "params", w));
    inst.generation = g;
  }
  return inst;
}

inline std::string serialize(const Instance& inst) {
  return to_json(inst).dump(1) + "\n";
}

inline void save(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << serialize(inst);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

inline Instance parse_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw LoadError(std::string("malformed JSON: ") + e.what());
  }
  return instance_from_json(j);
}

inline Instance load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

}  // namespace speedcov
