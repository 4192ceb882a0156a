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

#include <sstream>

#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace speedcov;
using namespace speedcov::testing;
using Catch::Approx;

namespace {

ExperimentOptions quick() {
  ExperimentOptions o;
  o.relative_gap_target = 0.0;
  o.time_limit_seconds = 60.0;
  return o;
}

void check_row(const Instance& inst, const ExperimentRow& r) {
  INFO("gamma " << r.gamma << " kappa " << (r.kappa ? *r.kappa : 0));
  REQUIRE(r.error.empty());
  CHECK(r.total_cost == Approx(r.transport_cost - r.exact_revenue).margin(1e-6));
  std::size_t covered = 0;
  const double obj = p2_objective(inst, r.paths, r.gamma, &covered);
  CHECK(r.exact_coverage == covered);
  CHECK(r.exact_revenue == Approx(r.gamma * static_cast<double>(covered)).margin(1e-9));
  CHECK(r.total_cost == Approx(obj).margin(1e-6));
  CHECK(r.directs_count == count_directs(inst, r.paths));
  if (r.baseline()) {
    CHECK_FALSE(r.approx_revenue.has_value());
    CHECK(r.n_app == 0);
  } else {
    REQUIRE(r.approx_revenue.has_value());
    CHECK(*r.approx_revenue <= r.exact_revenue + 1e-6);
    CHECK(r.n_app > 0);
  }
}

}  // namespace

TEST_CASE("gamma sweep rows are self-consistent") {
  const auto inst = generate_random(4, 3, 2, 5);
  const auto rep = run_gamma_sweep(inst, {0.0, 0.1, 1.0}, 2, quick());
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].baseline());
  CHECK_FALSE(rep.rows[1].baseline());
  for (const auto& r : rep.rows) {
    check_row(inst, r);
    CHECK(r.n_origins == 4);
    CHECK(r.n_destinations == 3);
    CHECK(r.seed == std::uint64_t{5});
  }
}

TEST_CASE("cost-only sweep still reports coverage") {
  const auto inst = generate_random(3, 2, 2, 6);
  const auto rep = run_gamma_sweep(inst, {0.0}, 2, quick());
  REQUIRE(rep.rows.size() == 1);
  check_row(inst, rep.rows[0]);
  CHECK(rep.rows[0].exact_coverage == total_coverage(inst, rep.rows[0].paths));
  const auto csv = to_csv(rep);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // version
  std::getline(in, line);  // header
  std::getline(in, line);
  std::vector<std::string> fields;
  std::istringstream row(line);
  for (std::string f; std::getline(row, f, ',');) fields.push_back(f);
  REQUIRE(fields.size() >= 8);
  CHECK(fields[3].empty());  // kappa
  CHECK(fields[5].empty());  // approx_revenue
  CHECK(fields[6] == "0");   // exact_revenue
  CHECK(fields[7] == std::to_string(rep.rows[0].exact_coverage));
}

TEST_CASE("empty gamma list gives an empty report") {
  const auto inst = generate_random(2, 2, 1, 1);
  CHECK(run_gamma_sweep(inst, {}, 1, quick()).rows.empty());
}

TEST_CASE("kappa sweep has a baseline row and deduplicates kappas") {
  const auto inst = generate_random(4, 2, 2, 7);
  const auto rep = run_kappa_sweep(inst, 0.1, {1, 3, 1, 4}, quick());
  REQUIRE(rep.rows.size() == 4);
  CHECK(rep.rows[0].baseline());
  CHECK(rep.rows[1].kappa == std::size_t{1});
  CHECK(rep.rows[2].kappa == std::size_t{3});
  CHECK(rep.rows[3].kappa == std::size_t{4});
  REQUIRE(rep.warnings.size() == 1);
  CHECK(rep.warnings[0].find("duplicate kappa 1") != std::string::npos);
  for (const auto& r : rep.rows) {
    check_row(inst, r);
    CHECK(r.gamma == 0.1);
  }
  // n_app follows the sample count of each kappa
  CHECK(rep.rows[1].n_app < rep.rows[3].n_app);
  // with every origin sampled the speed-aware run is at least as good
  CHECK(rep.rows[3].total_cost <= rep.rows[0].total_cost + 1e-6);
}

TEST_CASE("full kappa reaches the exhaustive optimum") {
  for (std::uint64_t seed : {2, 3, 4}) {
    const auto inst = generate_random(3, 2, 1, seed);
    const auto rep = run_kappa_sweep(inst, 0.5, {3}, quick());
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[1].total_cost ==
          Approx(enumerate_p2(inst, 0.5).objective).margin(1e-6));
  }
}

TEST_CASE("a failing row does not stop the sweep") {
  const auto inst = generate_random(3, 2, 1, 9);
  const auto rep = run_kappa_sweep(inst, 0.1, {2, 7}, quick());
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[1].error.empty());
  CHECK(rep.rows[2].status == "error");
  CHECK_FALSE(rep.rows[2].error.empty());
  CHECK(to_csv(rep).find("error") != std::string::npos);
}

TEST_CASE("single runs and parameter checks") {
  const auto inst = generate_random(3, 2, 1, 10);
  const auto row = solve_instance(inst, 0.2, 2, quick());
  check_row(inst, row);
  CHECK(row.status == "optimal");
  CHECK_THROWS_AS(solve_instance(inst, -0.2, 2, quick()), ParameterError);
  CHECK_THROWS_AS(run_gamma_sweep(inst, {0.1, -1.0}, 2, quick()), ParameterError);
}

TEST_CASE("report serialisation has a fixed schema") {
  const auto inst = generate_random(3, 2, 1, 11);
  const auto rep = run_gamma_sweep(inst, {0.0, 0.5}, 2, quick());
  const auto csv = to_csv(rep);
  std::istringstream in(csv);
  std::string version, header;
  std::getline(in, version);
  std::getline(in, header);
  CHECK(version == "# speedcov report v1");
  CHECK(header ==
        "n_O,n_D,gamma,kappa,transport_cost,approx_revenue,exact_revenue,"
        "exact_coverage,total_cost,directs_count,n_app,presolve_seconds,"
        "solve_seconds,relative_gap,status,seed,error");
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == 2);

  const auto j = to_json(rep);
  CHECK(j.at("version") == kReportSchemaVersion);
  CHECK(j.at("rows").size() == 2);
  CHECK(j.at("rows")[0].at("kappa").is_null());
  CHECK(j.at("rows")[1].at("kappa") == 2);
  CHECK(j.at("rows")[1].at("solver").contains("nodes"));
  CHECK(j.at("columns").size() == report_columns().size());
}

TEST_CASE("sharing incumbents never hurts a row") {
  const auto inst = generate_random(5, 3, 2, 13);
  ExperimentOptions o;
  o.relative_gap_target = 0.0;
  o.node_limit = 5;
  auto shared = run_gamma_sweep(inst, {0.0, 0.3, 3.0}, 2, o);
  o.share_incumbents = false;
  auto alone = run_gamma_sweep(inst, {0.0, 0.3, 3.0}, 2, o);
  for (std::size_t i = 0; i < 3; ++i) {
    check_row(inst, shared.rows[i]);
    CHECK(shared.rows[i].objective <= alone.rows[i].objective + 1e-9);
  }
}

TEST_CASE("shared pool keeps cost and coverage monotone in gamma") {
  for (std::uint64_t seed : {14, 15, 16}) {
    const auto inst = generate_random(4, 3, 2, seed);
    ExperimentOptions o;
    o.relative_gap_target = 0.0;
    o.node_limit = 3;
    const auto rep = run_gamma_sweep(inst, {0.0, 0.2, 1.0, 5.0}, 4, o);
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
      INFO("seed " << seed << " row " << i);
      CHECK(rep.rows[i - 1].transport_cost <= rep.rows[i].transport_cost + 1e-6);
      CHECK(rep.rows[i - 1].exact_coverage <= rep.rows[i].exact_coverage);
    }
  }
}

TEST_CASE("polishing never worsens a shared choice") {
  const auto inst = generate_random(4, 3, 2, 17);
  ExperimentOptions o;
  const auto run = detail::prepare_run(inst, 0.5, 2, o);
  PathLocalSearch search(inst, run.model, &run.samples);
  std::mt19937_64 rng(3);
  const auto by_comm = inst.paths_by_commodity();
  for (int t = 0; t < 10; ++t) {
    PathChoice c;
    for (const auto& ps : by_comm) c.push_back(ps[rng() % ps.size()]);
    const auto p = detail::polish(inst, run, c, o);
    CHECK(search.objective(p) <= search.objective(c) + 1e-9);
    o.polish_rounds = 0;
    CHECK(detail::polish(inst, run, c, o) == c);
    o.polish_rounds = 300;
  }
}
