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

// speedcov command-line harness.
//
// Exit codes: 0 success, 1 verify found a broken invariant, 2 bad
// parameters or usage, 3 solver failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "speedcov/speedcov.hpp"
#include "verify_suites.hpp"

namespace {

using namespace speedcov;

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

// Raised for anything the user has to fix on the command line.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InstanceArgs {
  std::string file;
  std::uint64_t seed = 1;
  int n_origins = 10;
  int n_destinations = 10;
  int n_hubs = 5;

  void attach(CLI::App* cmd, bool positional_file) {
    if (positional_file)
      cmd->add_option("instance", file, "Instance JSON (generated when omitted)");
    cmd->add_option("--seed", seed, "Generator seed");
    cmd->add_option("--n-origins", n_origins, "Origins")->check(CLI::PositiveNumber);
    cmd->add_option("--n-destinations", n_destinations, "Destinations")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--n-hubs", n_hubs, "Intermediate hubs")->check(CLI::NonNegativeNumber);
  }

  Instance instance() const {
    if (!file.empty()) return load(file);
    return generate_random(n_origins, n_destinations, n_hubs, seed);
  }
};

struct RunArgs {
  double gap = 0.001;
  double time_limit = 7200.0;
  std::string closure_mode = "dominated";

  void attach(CLI::App* cmd) {
    cmd->add_option("--gap", gap, "Relative gap target")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--time-limit", time_limit, "Seconds per solve")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--closure-mode", closure_mode, "equality or dominated");
  }

  ExperimentOptions options() const {
    ExperimentOptions o;
    o.relative_gap_target = gap;
    o.time_limit_seconds = time_limit;
    o.mode = closure_mode_from_string(closure_mode);
    return o;
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

// CSV to stdout, or CSV at `out` plus the JSON telemetry beside it.
int emit_report(const ExperimentReport& rep, const std::string& out) {
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  const std::string csv = to_csv(rep);
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_text(out, csv);
    write_text(std::filesystem::path(out).replace_extension(".json").string(),
               to_json(rep).dump(2) + "\n");
    std::cout << "wrote " << out << "\n";
  }
  for (const auto& r : rep.rows)
    if (!r.error.empty()) {
      std::cerr << "row gamma=" << r.gamma << " failed: " << r.error << "\n";
      return kExitSolver;
    }
  return kExitOk;
}

int run(int argc, char** argv) {
  CLI::App app{"speedcov: joint transportation cost and speed coverage"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  InstanceArgs gen_inst;
  gen_inst.attach(gen, false);
  GenerationParams params;
  gen->add_option("--p-store", params.p_store, "Probability an origin stocks an item");
  gen->add_option("--speed-threshold", params.speed_threshold_hours,
                  "Hours for a path to count as short");
  std::string gen_out = "instance.json";
  gen->add_option("--out", gen_out, "Output file");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one model");
  InstanceArgs solve_inst;
  solve_inst.attach(solve, true);
  RunArgs solve_run;
  solve_run.attach(solve);
  double solve_gamma = 0.0;
  std::size_t solve_kappa = 0;
  std::string solve_out;
  solve->add_option("--gamma", solve_gamma, "Conversion factor; 0 solves the cost model")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--kappa", solve_kappa, "Top origins sampled exhaustively");
  solve->add_option("--out", solve_out, "Report CSV (JSON written beside it)");

  // sweeps
  auto* sg = app.add_subcommand("sweep-gamma", "One run per gamma");
  InstanceArgs sg_inst;
  sg_inst.attach(sg, true);
  RunArgs sg_run;
  sg_run.attach(sg);
  std::vector<double> sg_gammas = {0.0, 0.1, 1.0};
  std::size_t sg_kappa = 10;
  std::string sg_out;
  sg->add_option("--gamma", sg_gammas, "Gamma values")->delimiter(',');
  sg->add_option("--kappa", sg_kappa, "Top origins sampled exhaustively");
  sg->add_option("--out", sg_out, "Report CSV (JSON written beside it)");

  auto* sk = app.add_subcommand("sweep-kappa", "Baseline plus one run per kappa");
  InstanceArgs sk_inst;
  sk_inst.attach(sk, true);
  RunArgs sk_run;
  sk_run.attach(sk);
  double sk_gamma = 0.1;
  std::vector<std::size_t> sk_kappas = {1, 5, 10};
  std::string sk_out;
  sk->add_option("--gamma", sk_gamma, "Conversion factor")->check(CLI::NonNegativeNumber);
  sk->add_option("--kappa", sk_kappas, "Kappa values")->delimiter(',');
  sk->add_option("--out", sk_out, "Report CSV (JSON written beside it)");

  // export
  auto* ex = app.add_subcommand("export-mps", "Write a model as MPS");
  InstanceArgs ex_inst;
  ex_inst.attach(ex, true);
  double ex_gamma = 0.0;
  std::size_t ex_kappa = 0;
  std::string ex_mode = "dominated";
  std::string ex_out = "model.mps";
  ex->add_option("--gamma", ex_gamma, "Conversion factor; 0 exports the cost model")
      ->check(CLI::NonNegativeNumber);
  ex->add_option("--kappa", ex_kappa, "Top origins sampled exhaustively");
  ex->add_option("--closure-mode", ex_mode, "equality or dominated");
  ex->add_option("--out", ex_out, "MPS file (metadata written beside it)");

  // verify
  auto* ver = app.add_subcommand("verify", "Run the invariant suites");
  std::string level = "quick";
  ver->add_option("--level", level, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  // kappa 0 means "every origin"
  auto kappa_for = [](const Instance& inst, std::size_t k) {
    return k == 0 ? static_cast<std::size_t>(inst.n_origins()) : k;
  };

  if (gen->parsed()) {
    const auto inst = generate_random(gen_inst.n_origins, gen_inst.n_destinations,
                                      gen_inst.n_hubs, gen_inst.seed, params);
    save(inst, gen_out);
    std::cout << "wrote " << gen_out << " (" << inst.commodities.size()
              << " commodities, " << inst.paths.size() << " paths)\n";
    return kExitOk;
  }
  if (solve->parsed()) {
    const auto inst = solve_inst.instance();
    const auto opts = solve_run.options();
    std::optional<std::size_t> kappa;
    if (solve_gamma > 0.0) kappa = kappa_for(inst, solve_kappa);
    ExperimentReport rep;
    rep.rows.push_back(solve_instance(inst, solve_gamma, kappa, opts));
    const auto& r = rep.rows.front();
    std::cerr << "status " << r.status << ", transport cost " << r.transport_cost
              << ", coverage " << r.exact_coverage << ", gap " << r.relative_gap
              << "\n";
    const int code = emit_report(rep, solve_out);
    if (r.status == "infeasible" || r.status == "unbounded" || r.paths.empty())
      return kExitSolver;
    return code;
  }
  if (sg->parsed()) {
    const auto inst = sg_inst.instance();
    return emit_report(
        run_gamma_sweep(inst, sg_gammas, kappa_for(inst, sg_kappa), sg_run.options()),
        sg_out);
  }
  if (sk->parsed()) {
    const auto inst = sk_inst.instance();
    return emit_report(run_kappa_sweep(inst, sk_gamma, sk_kappas, sk_run.options()),
                       sk_out);
  }
  if (ex->parsed()) {
    const auto inst = ex_inst.instance();
    const auto mode = closure_mode_from_string(ex_mode);
    NetworkModel nm;
    if (ex_gamma > 0.0) {
      const auto samples = build_all_samples(inst, kappa_for(inst, ex_kappa));
      nm = build_speed_aware_model(inst, samples, ex_gamma, mode);
    } else {
      nm = build_cost_model(inst);
    }
    export_mps(nm.milp, ex_out);
    std::cout << "wrote " << ex_out << " (" << nm.milp.num_variables()
              << " columns, " << nm.milp.num_constraints() << " rows)\n";
    return kExitOk;
  }
  if (ver->parsed()) {
    bool ok = true;
    for (const auto& r : verify::run_all(level == "full")) {
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " ("
                << r.seconds << " s)";
      if (!r.passed) std::cout << ": " << r.detail;
      std::cout << "\n";
      ok = ok && r.passed;
    }
    return ok ? kExitOk : kExitInvariant;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const speedcov::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const speedcov::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const speedcov::LoadError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const speedcov::InvalidInstanceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const speedcov::ExportError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}
