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

// Self-contained invariant suites behind `speedcov verify`.

#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "speedcov/speedcov.hpp"

namespace speedcov::verify {

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

using Rows = std::vector<std::vector<std::size_t>>;

inline Rows random_rows(std::mt19937_64& rng, std::size_t n, std::size_t items) {
  std::bernoulli_distribution stock(0.3);
  Rows rows(n);
  for (auto& r : rows)
    for (std::size_t i = 0; i < items; ++i)
      if (stock(rng)) r.push_back(i);
  return rows;
}

inline OriginMask mask_bits(std::uint64_t m, std::size_t n) {
  OriginMask b(n);
  for (std::size_t o = 0; o < n; ++o) b[o] = (m >> o) & 1U;
  return b;
}

inline std::size_t naive_union(const Rows& rows, const OriginMask& b) {
  std::unordered_set<std::size_t> s;
  for (std::size_t o = 0; o < rows.size(); ++o)
    if (b[o]) s.insert(rows[o].begin(), rows[o].end());
  return s.size();
}

inline void fail(SuiteResult& r, const std::string& what) {
  if (r.passed) r.detail = what;
  r.passed = false;
}

}  // namespace detail

inline SuiteResult coverage_suite(int trials) {
  using namespace detail;
  SuiteResult r{"coverage oracle"};
  std::mt19937_64 rng(1);
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = 1 + t % 6;
    const auto rows = random_rows(rng, n, 200);
    const auto inv = InventoryMatrix::from_item_lists(200, rows);
    for (std::uint64_t m = 0; m < (1ULL << n); ++m)
      if (coverage(inv, mask_bits(m, n)) != naive_union(rows, mask_bits(m, n)))
        fail(r, "mismatch on trial " + std::to_string(t));
  }
  return r;
}

inline SuiteResult submodularity_suite(int trials) {
  using namespace detail;
  SuiteResult r{"monotone submodular coverage"};
  std::mt19937_64 rng(2);
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = 1 + t % 5;
    const auto inv = InventoryMatrix::from_item_lists(100, random_rows(rng, n, 100));
    std::vector<long> f(1ULL << n);
    for (std::uint64_t m = 0; m < f.size(); ++m)
      f[m] = static_cast<long>(coverage(inv, mask_bits(m, n)));
    for (std::uint64_t a = 0; a < f.size(); ++a)
      for (std::uint64_t b = 0; b < f.size(); ++b) {
        if ((a & b) != a) continue;
        if (f[a] > f[b]) fail(r, "monotonicity violated");
        for (std::size_t o = 0; o < n; ++o) {
          const std::uint64_t e = 1ULL << o;
          if (!(b & e) && f[a | e] - f[a] < f[b | e] - f[b])
            fail(r, "submodularity violated");
        }
      }
  }
  return r;
}

inline SuiteResult closure_suite(int seeds) {
  using namespace detail;
  SuiteResult r{"closure exact at vertices"};
  std::mt19937_64 rng(3);
  for (int s = 0; s < seeds; ++s) {
    const std::size_t n = 1 + s % 6;
    const auto inv = InventoryMatrix::from_item_lists(60, random_rows(rng, n, 60));
    if (!closure_exactness_check(full_vertex_closure(inv, 0)).exact())
      fail(r, "full vertex set, seed " + std::to_string(s));
    for (std::size_t k = 1; k <= n; ++k)
      if (!closure_exactness_check(build_samples(inv, 0, k)).exact())
        fail(r, "sampled set, seed " + std::to_string(s));
  }
  return r;
}

inline SuiteResult sampling_suite(int trials) {
  using namespace detail;
  SuiteResult r{"sample set bound and values"};
  std::mt19937_64 rng(4);
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = 1 + rng() % 12;
    const std::size_t k = 1 + rng() % n;
    const auto rows = random_rows(rng, n, 80);
    const auto s = build_samples(InventoryMatrix::from_item_lists(80, rows), 0, k);
    if (s.points.size() > sample_count_bound(k, n)) fail(r, "bound exceeded");
    for (const auto& p : s.points)
      if (p.value != naive_union(rows, p.bits)) fail(r, "wrong sample value");
  }
  return r;
}

inline SuiteResult oracle_suite(int seeds) {
  SuiteResult r{"MILP equals enumeration"};
  for (int s = 0; s < seeds; ++s) {
    const auto inst = generate_random(1 + s % 3, 1 + s % 2, s % 3,
                                      static_cast<std::uint64_t>(s));
    const auto samples = full_vertex_samples(inst);
    for (double g : {0.0, 0.1, 1.0}) {
      const auto nm = build_speed_aware_model(inst, samples, g, ClosureMode::equality);
      SolveOptions o;
      o.relative_gap_target = 0.0;
      const auto res = solve_milp(nm.milp, o);
      const auto e = enumerate_p2(inst, g);
      if (!res.has_incumbent() || !check_solution(nm.milp, res.values).feasible)
        detail::fail(r, "bad incumbent, seed " + std::to_string(s));
      else if (std::abs(res.objective - e.objective) > 1e-6)
        detail::fail(r, "objective differs, seed " + std::to_string(s));
      if (res.best_bound > e.objective + 1e-6)
        detail::fail(r, "bound above optimum, seed " + std::to_string(s));
    }
  }
  return r;
}

inline SuiteResult mps_suite(int models) {
  SuiteResult r{"MPS round-trip"};
  for (int i = 0; i < models; ++i) {
    const auto inst = generate_random(3 + i % 4, 2 + i % 3, 2,
                                      static_cast<std::uint64_t>(i));
    const auto samples = build_all_samples(inst, 2);
    const auto nm = i % 2 ? build_cost_model(inst)
                          : build_speed_aware_model(inst, samples, 0.1,
                                                    ClosureMode::dominated);
    const auto text = write_mps(nm.milp);
    const auto back = parse_mps(text);
    if (!structurally_equal(back, nm.milp) || write_mps(back) != text)
      detail::fail(r, "model " + std::to_string(i));
  }
  return r;
}

/// Runs every suite; `full` raises the trial counts.
inline std::vector<SuiteResult> run_all(bool full) {
  const int scale = full ? 1 : 4;
  const std::vector<std::pair<std::string, std::function<SuiteResult()>>>
      suites = {
          {"coverage oracle", [&] { return coverage_suite(50 / scale); }},
          {"monotone submodular coverage",
           [&] { return submodularity_suite(20 / scale); }},
          {"closure exact at vertices", [&] { return closure_suite(20 / scale); }},
          {"sample set bound and values",
           [&] { return sampling_suite(100 / scale); }},
          {"MILP equals enumeration", [&] { return oracle_suite(20 / scale); }},
          {"MPS round-trip", [&] { return mps_suite(full ? 10 : 5); }},
      };
  std::vector<SuiteResult> out;
  for (const auto& [name, run] : suites) {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteResult r{name};
    try {
      r = run();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace speedcov::verify
