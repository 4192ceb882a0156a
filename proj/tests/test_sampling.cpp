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

#include <random>
#include <set>

#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace speedcov;
using namespace speedcov::testing;

namespace {

using Mask = std::vector<std::uint8_t>;

std::set<Mask> masks_of(const SampleSet& s) {
  std::set<Mask> out;
  for (const auto& p : s.points) out.insert(p.bits);
  return out;
}

// H-sets written out from their definitions, ranking given explicitly.
std::set<Mask> h_sets(std::size_t n, std::size_t kappa,
                      const std::vector<std::size_t>& rank) {
  std::set<Mask> out;
  for (std::uint64_t s = 0; s < (1ULL << kappa); ++s) {
    Mask m(n, 0);
    for (std::size_t j = 0; j < kappa; ++j)
      if ((s >> j) & 1U) m[rank[j]] = 1;
    out.insert(m);
  }
  for (std::size_t j = kappa; j < n; ++j) {
    Mask top(n, 0), single(n, 0);
    for (std::size_t i = 0; i < kappa; ++i) top[rank[i]] = 1;
    top[rank[j]] = 1;
    single[rank[j]] = 1;
    out.insert(top);
    out.insert(single);
  }
  for (std::size_t i = kappa + 1; i <= n; ++i) {
    Mask prefix(n, 0);
    for (std::size_t j = 0; j < i; ++j) prefix[rank[j]] = 1;
    out.insert(prefix);
  }
  return out;
}

}  // namespace

TEST_CASE("kappa 2 over 5 origins gives the twelve listed vectors") {
  std::mt19937_64 rng(1);
  const auto rows = random_items(rng, 5, 100, 0.3);
  const auto inv = InventoryMatrix::from_item_lists(100, rows);
  const auto s = build_samples(inv, 7, 2, {0, 1, 2, 3, 4});

  const std::vector<Mask> listed = {
      {0, 0, 0, 0, 0}, {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {1, 1, 0, 0, 0},
      {1, 1, 1, 0, 0}, {1, 1, 0, 1, 0}, {1, 1, 0, 0, 1}, {0, 0, 1, 0, 0},
      {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}, {1, 1, 1, 0, 0}, {1, 1, 1, 1, 0},
      {1, 1, 1, 1, 1}};
  const std::set<Mask> distinct(listed.begin(), listed.end());
  REQUIRE(distinct.size() == 12);
  CHECK(s.points.size() == 12);
  CHECK(masks_of(s) == distinct);
  CHECK(s.destination == 7);
  CHECK(s.kappa == 2);
  for (const auto& p : s.points) CHECK(p.value == union_oracle(rows, p.bits));
}

TEST_CASE("sample count bound") {
  CHECK(sample_count_bound(2, 5) == 13);
  CHECK(sample_count_bound(6, 6) == 64);
  CHECK(sample_count_bound(10, 20) == 1054);
  CHECK_THROWS_AS(sample_count_bound(0, 3), ParameterError);
  CHECK_THROWS_AS(sample_count_bound(4, 3), ParameterError);
}

TEST_CASE("kappa equal to the origin count is the full vertex set") {
  std::mt19937_64 rng(4);
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto rows = random_items(rng, n, 60, 0.3);
    const auto inv = InventoryMatrix::from_item_lists(60, rows);
    const auto s = build_samples(inv, 0, n);
    CHECK(s.points.size() == (1ULL << n));
    std::set<Mask> all;
    for (std::uint64_t m = 0; m < (1ULL << n); ++m) all.insert(bits_of(m, n));
    CHECK(masks_of(s) == all);
  }
}

TEST_CASE("kappa 1 over 4 origins matches the H-set definitions") {
  std::mt19937_64 rng(8);
  const auto rows = random_items(rng, 4, 50, 0.4);
  const auto inv = InventoryMatrix::from_item_lists(50, rows);
  const auto s = build_samples(inv, 0, 1);
  CHECK(s.points.size() <= 11);
  // ranking recomputed from the raw item lists
  std::vector<std::size_t> rank = {0, 1, 2, 3};
  std::stable_sort(rank.begin(), rank.end(), [&](auto a, auto b) {
    return rows[a].size() > rows[b].size();
  });
  CHECK(masks_of(s) == h_sets(4, 1, rank));
}

TEST_CASE("sample set invariants over random kappa and origin counts") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    const std::size_t kappa = 1 + rng() % n;
    const auto rows = random_items(rng, n, 80, 0.25);
    const auto inv = InventoryMatrix::from_item_lists(80, rows);
    const auto s = build_samples(inv, 0, kappa);
    REQUIRE(s.points.size() <= sample_count_bound(kappa, n));
    const auto masks = masks_of(s);
    REQUIRE(masks.size() == s.points.size());
    CHECK(masks.count(Mask(n, 0)) == 1);
    CHECK(masks.count(Mask(n, 1)) == 1);
    for (std::size_t o = 0; o < n; ++o) {
      Mask e(n, 0);
      e[o] = 1;
      CHECK(masks.count(e) == 1);
    }
    for (const auto& p : s.points) REQUIRE(p.value == union_oracle(rows, p.bits));
    CHECK(masks == h_sets(n, kappa, rank_origins(inv)));

    // values along the prefix chain never decrease
    const auto rank = rank_origins(inv);
    Mask prefix(n, 0);
    std::size_t last = 0;
    for (std::size_t i = 0; i < n; ++i) {
      prefix[rank[i]] = 1;
      const auto v = union_oracle(rows, prefix);
      CHECK(v >= last);
      last = v;
    }
  }
}

TEST_CASE("invalid kappa and ranking are rejected") {
  const auto inv = overlap_inventory();
  CHECK_THROWS_AS(build_samples(inv, 0, 0), ParameterError);
  CHECK_THROWS_AS(build_samples(inv, 0, 3), ParameterError);
  CHECK_THROWS_AS(build_samples(inv, 0, 1, {0}), DimensionError);
}

TEST_CASE("identical inputs give identical sample sets") {
  std::mt19937_64 rng(6);
  const auto rows = random_items(rng, 8, 100, 0.2);
  const auto inv = InventoryMatrix::from_item_lists(100, rows);
  CHECK(build_samples(inv, 3, 3) == build_samples(inv, 3, 3));
}
