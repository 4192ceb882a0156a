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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace speedcov;
using namespace speedcov::testing;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("hand-built toy validates cleanly") {
  CHECK(validate(toy_2x1x1(0.4, 0.4, 10, 6)).empty());
}

TEST_CASE("commodity without paths is reported") {
  ToyBuilder b(1, 1, 0);
  b.commodity(0, 1, 0.5);
  const auto v = validate(b.build());
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "commodity 0 has no candidate paths");
}

TEST_CASE("inconsistent short flag is reported on its path") {
  ToyBuilder b(1, 1, 1);
  const int e1 = b.edge(0, 2, 1.0, 4.5);
  const int e2 = b.edge(2, 1, 1.0, 4.5);
  const int k = b.commodity(0, 1, 0.5);
  b.path(k, {e1, e2});
  auto inst = b.build();
  REQUIRE(inst.paths[0].is_short == false);  // 9h against 8h
  inst.paths[0].is_short = true;
  const auto v = validate(inst);
  REQUIRE(v.size() == 1);
  CHECK_THAT(v[0], ContainsSubstring("path 0"));
}

TEST_CASE("broken walks, ids and inventories are reported") {
  auto inst = toy_2x1x1(0.4, 0.4, 10, 6);
  inst.paths[1].edges = {3, 4};  // starts at the other origin
  inst.edges[0].truck_capacity = 0.0;
  inst.commodities[1].origin = 0;  // duplicate pair
  inst.inventory = InventoryMatrix(3, 5);
  const auto v = validate(inst);
  CHECK(v.size() >= 4);
}

TEST_CASE("generated 10x10x5 instance has the reference shape") {
  const auto inst = generate_random(10, 10, 5, 1);
  CHECK(validate(inst).empty());
  CHECK(inst.commodities.size() == 100);
  CHECK(inst.paths.size() == 600);
  CHECK(inst.inventory.n_items() == 500);
  CHECK(inst.inventory.n_origins() == 10);
  CHECK(inst.nodes.size() == 25);

  const auto by_comm = inst.paths_by_commodity();
  std::set<std::pair<int, int>> pairs;
  for (const auto& c : inst.commodities) {
    const auto& ps = by_comm[static_cast<std::size_t>(c.id)];
    CHECK(ps.size() == 6);
    int direct = 0;
    for (int p : ps) direct += inst.paths[static_cast<std::size_t>(p)].edges.size() == 1;
    CHECK(direct == 1);
    CHECK(c.volume >= 0.1);
    CHECK(c.volume <= 1.0);
    pairs.insert({c.origin, c.destination});
  }
  CHECK(pairs.size() == 100);

  for (const auto& n : inst.nodes) {
    CHECK(n.x >= 0.0);
    CHECK(n.x <= 1.0);
  }
  // cost and time proportional to distance
  for (const auto& e : inst.edges) {
    const auto& a = inst.nodes[static_cast<std::size_t>(e.tail)];
    const auto& b = inst.nodes[static_cast<std::size_t>(e.head)];
    const double dist = std::hypot(a.x - b.x, a.y - b.y);
    CHECK(e.cost_per_truck == Catch::Approx(100.0 * dist));
    CHECK(e.transit_time == Catch::Approx(12.0 * dist));
    CHECK(e.truck_capacity == 1.0);
  }
}

TEST_CASE("minimal generated instance") {
  const auto inst = generate_random(1, 1, 0, 0);
  CHECK(inst.commodities.size() == 1);
  CHECK(inst.paths.size() == 1);
  CHECK(inst.paths[0].edges.size() == 1);
  CHECK(inst.inventory.n_items() == 50);
}

TEST_CASE("generation is deterministic per seed") {
  CHECK(serialize(generate_random(4, 3, 2, 42)) ==
        serialize(generate_random(4, 3, 2, 42)));
  CHECK(serialize(generate_random(4, 3, 2, 42)) !=
        serialize(generate_random(4, 3, 2, 43)));
}

TEST_CASE("invalid generation parameters are rejected") {
  GenerationParams p;
  p.p_store = 0.0;
  CHECK_THROWS_AS(generate_random(2, 2, 1, 1, p), ParameterError);
  p.p_store = 1.5;
  CHECK_THROWS_AS(generate_random(2, 2, 1, 1, p), ParameterError);
  CHECK_THROWS_AS(generate_random(0, 2, 1, 1), ParameterError);
  CHECK_THROWS_AS(generate_random(2, 0, 1, 1), ParameterError);
  CHECK_THROWS_AS(generate_random(2, 2, -1, 1), ParameterError);
}

TEST_CASE("inventory density follows p_store") {
  GenerationParams p;
  p.p_store = 0.5;
  const auto inst = generate_random(10, 1, 0, 3, p);
  std::size_t stocked = 0;
  for (std::size_t o = 0; o < 10; ++o) stocked += inst.inventory.items(o).size();
  const double rate = static_cast<double>(stocked) / (10.0 * 500.0);
  CHECK(rate == Catch::Approx(0.5).margin(0.03));
}

TEST_CASE("save and load round-trip") {
  const auto dir = std::filesystem::temp_directory_path() / "speedcov_instance_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "inst.json";
  const auto inst = generate_random(10, 10, 5, 1);
  save(inst, file);
  CHECK(load(file) == inst);

  const auto toy = toy_2x1x1(0.4, 0.4, 10, 6);
  CHECK(parse_instance(serialize(toy)) == toy);
  std::filesystem::remove_all(dir);
}

TEST_CASE("load errors name the problem") {
  auto j = to_json(generate_random(2, 2, 1, 5));
  j.erase("conversion_factor");
  CHECK_THROWS_WITH(parse_instance(j.dump()), ContainsSubstring("conversion_factor"));
  CHECK_THROWS_AS(parse_instance(j.dump()), LoadError);

  auto v = to_json(generate_random(2, 2, 1, 5));
  v["version"] = 999;
  CHECK_THROWS_WITH(parse_instance(v.dump()), ContainsSubstring("version 999"));

  CHECK_THROWS_AS(parse_instance("{ not json"), LoadError);
  CHECK_THROWS_AS(load("/nonexistent/speedcov/instance.json"), LoadError);
}
