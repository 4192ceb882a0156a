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

#include <array>
#include <random>

#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace speedcov;
using namespace speedcov::testing;
using Catch::Approx;

namespace {

double det3(const std::array<std::array<double, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Equality-mode closure of a two-origin sample set by enumerating every
// basis of three vertices (Cramer's rule) and keeping the best feasible one.
double two_origin_closure(const SampleSet& s, double t0, double t1) {
  double best = -1.0;
  const std::size_t n = s.points.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        const std::array<std::size_t, 3> idx = {a, b, c};
        std::array<std::array<double, 3>, 3> m{};
        for (int col = 0; col < 3; ++col) {
          m[0][col] = s.points[idx[col]].bits[0];
          m[1][col] = s.points[idx[col]].bits[1];
          m[2][col] = 1.0;
        }
        const double d = det3(m);
        if (std::abs(d) < 1e-12) continue;
        const std::array<double, 3> rhs = {t0, t1, 1.0};
        std::array<double, 3> w{};
        for (int col = 0; col < 3; ++col) {
          auto mc = m;
          for (int r = 0; r < 3; ++r) mc[r][col] = rhs[r];
          w[col] = det3(mc) / d;
        }
        if (w[0] < -1e-12 || w[1] < -1e-12 || w[2] < -1e-12) continue;
        double v = 0.0;
        for (int col = 0; col < 3; ++col)
          v += w[col] * static_cast<double>(s.points[idx[col]].value);
        best = std::max(best, v);
      }
  return best;
}

double closure(const SampleSet& s, std::vector<double> t, ClosureMode mode) {
  return evaluate_closure({&s, std::move(t), mode}).value;
}

}  // namespace

TEST_CASE("closure of the two-origin sample set") {
  const auto s = full_vertex_closure(overlap_inventory(), 0);
  CHECK(closure(s, {1, 1}, ClosureMode::equality) == Approx(90).margin(1e-9));
  CHECK(closure(s, {0, 0}, ClosureMode::equality) == Approx(0).margin(1e-9));

  const double oracle = two_origin_closure(s, 0.5, 0.5);
  const auto r = evaluate_closure({&s, {0.5, 0.5}, ClosureMode::equality});
  CHECK(r.value == Approx(oracle).margin(1e-9));
  CHECK(r.value == Approx(55).margin(1e-9));
  double sum = 0.0;
  for (double w : r.weights) {
    CHECK(w >= -1e-12);
    sum += w;
  }
  CHECK(sum == Approx(1.0).margin(1e-9));
}

TEST_CASE("closure agrees with basis enumeration on random two-origin targets") {
  const auto s = full_vertex_closure(overlap_inventory(), 0);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const double a = u(rng), b = u(rng);
    CHECK(closure(s, {a, b}, ClosureMode::equality) ==
          Approx(two_origin_closure(s, a, b)).margin(1e-7));
  }
}

TEST_CASE("targets outside the sampled hull") {
  // Only the zero vertex and origin 0 sampled; origin 1 is unreachable.
  SampleSet s;
  s.points = {{{0, 0}, 0}, {{1, 0}, 60}};
  CHECK_THROWS_AS(closure(s, {0, 1}, ClosureMode::equality), InfeasibleError);
  const double lower = closure(s, {0, 1}, ClosureMode::dominated);
  CHECK(std::isfinite(lower));
  CHECK(lower <= 50.0);
  const double mixed = closure(s, {0.5, 1.0}, ClosureMode::dominated);
  const auto full = full_vertex_closure(overlap_inventory(), 0);
  CHECK(mixed <= closure(full, {0.5, 1.0}, ClosureMode::equality) + 1e-9);
  CHECK(mixed == Approx(30).margin(1e-9));
}

TEST_CASE("closure rejects malformed queries") {
  const auto s = full_vertex_closure(overlap_inventory(), 0);
  SampleSet empty;
  CHECK_THROWS_AS(closure(empty, {}, ClosureMode::equality), ParameterError);
  CHECK_THROWS_AS(closure(s, {0.5}, ClosureMode::equality), DimensionError);
  CHECK_THROWS_AS(closure(s, {1.5, 0}, ClosureMode::equality), ParameterError);
  CHECK_THROWS_AS(evaluate_closure({nullptr, {}, ClosureMode::equality}),
                  ParameterError);
}

TEST_CASE("closure is exact at sampled vertices") {
  CHECK(closure_exactness_check(full_vertex_closure(overlap_inventory(), 0)).exact());

  SampleSet zero;
  zero.points = {{{0, 0, 0}, 0}};
  CHECK(closure_exactness_check(zero).exact());

  std::mt19937_64 rng(31);
  for (int seed = 0; seed < 20; ++seed) {
    const std::size_t n = 1 + seed % 6;
    const auto rows = random_items(rng, n, 60, 0.3);
    const auto inv = InventoryMatrix::from_item_lists(60, rows);
    INFO("seed " << seed << " n " << n);
    CHECK(closure_exactness_check(full_vertex_closure(inv, 0)).exact());
    for (std::size_t k = 1; k <= n; ++k)
      CHECK(closure_exactness_check(build_samples(inv, 0, k)).exact());
  }
}

TEST_CASE("a duplicated vertex with a smaller value is reported") {
  auto s = full_vertex_closure(overlap_inventory(), 0);
  s.points.push_back({{1, 1}, 10});
  const auto rep = closure_exactness_check(s);
  REQUIRE(rep.deviations.size() == 1);
  CHECK(rep.deviations[0].point == 4);
  CHECK(rep.deviations[0].expected == 10.0);
  CHECK(rep.deviations[0].got == Approx(90).margin(1e-9));
}

TEST_CASE("closure is concave along random segments") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto rows = random_items(rng, 4, 80, 0.3);
  const auto s =
      full_vertex_closure(InventoryMatrix::from_item_lists(80, rows), 0);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> a(4), b(4), mid(4);
    const double lam = u(rng);
    for (int o = 0; o < 4; ++o) {
      a[o] = u(rng);
      b[o] = u(rng);
      mid[o] = lam * a[o] + (1 - lam) * b[o];
    }
    const double fa = closure(s, a, ClosureMode::equality);
    const double fb = closure(s, b, ClosureMode::equality);
    CHECK(closure(s, mid, ClosureMode::equality) >=
          lam * fa + (1 - lam) * fb - 1e-7);
  }
}

TEST_CASE("sampled closure never exceeds the full closure") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto rows = random_items(rng, n, 70, 0.3);
    const auto inv = InventoryMatrix::from_item_lists(70, rows);
    const auto full = full_vertex_closure(inv, 0);
    const auto sampled = build_samples(inv, 0, 1);
    for (int i = 0; i < 5; ++i) {
      std::vector<double> t(n);
      for (auto& x : t) x = u(rng);
      CHECK(closure(sampled, t, ClosureMode::dominated) <=
            closure(full, t, ClosureMode::equality) + 1e-7);
    }
  }
}

TEST_CASE("dominated and equality modes agree on vertices") {
  std::mt19937_64 rng(43);
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto rows = random_items(rng, n, 50, 0.35);
    const auto inv = InventoryMatrix::from_item_lists(50, rows);
    const auto s = full_vertex_closure(inv, 0);
    for (std::uint64_t m = 0; m < (1ULL << n); ++m) {
      const auto b = bits_of(m, n);
      const std::vector<double> t(b.begin(), b.end());
      const double eq = closure(s, t, ClosureMode::equality);
      const double dom = closure(s, t, ClosureMode::dominated);
      CHECK(dom == Approx(eq).margin(1e-7));
      CHECK(static_cast<double>(dominated_value_at_vertex(s, b)) ==
            Approx(dom).margin(1e-7));
    }
  }
}

TEST_CASE("closure mode names") {
  CHECK(closure_mode_from_string("equality") == ClosureMode::equality);
  CHECK(closure_mode_from_string("dominated") == ClosureMode::dominated);
  CHECK(std::string(to_string(ClosureMode::dominated)) == "dominated");
  CHECK_THROWS_AS(closure_mode_from_string("hull"), ParameterError);
}
