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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace speedcov;
using namespace speedcov::testing;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct MpsShape {
  std::set<std::string> columns;
  int rows = 0;
  bool has_objective = false;
};

// Reads section membership straight from the text.
MpsShape shape_of(const std::string& text) {
  MpsShape s;
  std::istringstream in(text);
  std::string line, section;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '*') continue;
    if (line[0] != ' ') {
      std::istringstream h(line);
      h >> section;
      continue;
    }
    std::istringstream f(line);
    std::vector<std::string> tok;
    for (std::string t; f >> t;) tok.push_back(t);
    if (section == "ROWS") {
      if (tok[0] == "N") s.has_objective = true;
      else ++s.rows;
    } else if (section == "COLUMNS" && tok.size() >= 2 && tok[1] != "'MARKER'") {
      s.columns.insert(tok[0]);
    }
  }
  return s;
}

}  // namespace

TEST_CASE("toy cost model exports nine columns and seven rows") {
  const auto nm = build_cost_model(toy_2x1x1(0.4, 0.4, 10, 6));
  const auto text = write_mps(nm.milp);
  const auto s = shape_of(text);
  CHECK(s.columns.size() == 9);
  CHECK(s.rows == 7);
  CHECK(s.has_objective);
  CHECK(text.find("OBJSENSE") != std::string::npos);
  CHECK(text.find("'INTORG'") != std::string::npos);
  CHECK(text.find("'INTEND'") != std::string::npos);
  CHECK(text.find("RANGES") == std::string::npos);
}

TEST_CASE("model without rows exports bounds only") {
  MilpModel m;
  m.metadata.name = "bare";
  m.add_variable("a", VarKind::integer, -2.0, 7.0, 1.0);
  m.add_variable("b", VarKind::continuous, -kInf, kInf, 0.0);
  m.add_variable("c", VarKind::binary, 0.0, 1.0, -3.0);
  m.add_variable("d", VarKind::continuous, 4.0, 4.0, 0.0);
  const auto text = write_mps(m);
  CHECK(shape_of(text).rows == 0);
  CHECK(text.find("BOUNDS") != std::string::npos);
  CHECK(structurally_equal(parse_mps(text), m));
}

TEST_CASE("generated models survive export and re-parse") {
  int count = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = generate_random(3 + static_cast<int>(seed), 3, 2, seed);
    const auto cost = build_cost_model(inst);
    const auto s = build_all_samples(inst, 2);
    const auto sa = build_speed_aware_model(inst, s, 0.1 * static_cast<double>(seed),
                                            ClosureMode::dominated);
    for (const auto* m : {&cost.milp, &sa.milp}) {
      const auto back = parse_mps(write_mps(*m));
      CHECK(structurally_equal(back, *m));
      CHECK(write_mps(back) == write_mps(*m));
      ++count;
    }
  }
  CHECK(count == 10);
}

TEST_CASE("file export writes a metadata sidecar") {
  const auto dir = std::filesystem::temp_directory_path() / "speedcov_mps_test";
  std::filesystem::create_directories(dir);
  const auto inst = generate_random(3, 2, 1, 8);
  const auto s = build_all_samples(inst, 2);
  const auto nm = build_speed_aware_model(inst, s, 0.25, ClosureMode::equality);
  const auto file = (dir / "m.mps").string();
  export_mps(nm.milp, file);
  CHECK(std::filesystem::exists(sidecar_path(file)));
  const auto back = read_mps(file);
  CHECK(structurally_equal(back, nm.milp));
  CHECK(back.metadata == nm.milp.metadata);
  CHECK(back.metadata.gamma == 0.25);
  CHECK(back.metadata.kappa == std::size_t{2});
  CHECK(back.metadata.closure_mode == "equality");
  std::filesystem::remove_all(dir);
}

TEST_CASE("export is byte-stable against the golden files") {
  const std::filesystem::path golden = SPEEDCOV_GOLDEN_DIR;
  const auto toy = toy_2x1x1(0.4, 0.4, 10, 6);
  CHECK(write_mps(build_cost_model(toy).milp) == slurp(golden / "toy_cost.mps"));
  const auto s = full_vertex_samples(toy);
  CHECK(write_mps(build_speed_aware_model(toy, s, 0.1, ClosureMode::dominated).milp) ==
        slurp(golden / "toy_speed.mps"));
  const auto a = write_mps(build_cost_model(generate_random(4, 3, 2, 1)).milp);
  const auto b = write_mps(build_cost_model(generate_random(4, 3, 2, 1)).milp);
  CHECK(a == b);
}

TEST_CASE("bad names are export errors") {
  MilpModel dup;
  dup.add_variable("x", VarKind::continuous, 0, 1, 0);
  dup.add_variable("x", VarKind::continuous, 0, 1, 0);
  CHECK_THROWS_AS(write_mps(dup), ExportError);

  MilpModel space;
  space.add_variable("has space", VarKind::continuous, 0, 1, 0);
  CHECK_THROWS_AS(write_mps(space), ExportError);

  MilpModel longname;
  longname.add_variable(std::string(300, 'v'), VarKind::continuous, 0, 1, 0);
  CHECK_THROWS_AS(write_mps(longname), ExportError);

  MilpModel rowclash;
  const int v = rowclash.add_variable("v", VarKind::continuous, 0, 1, 0);
  rowclash.add_constraint("OBJ", {{v, 1.0}}, RowSense::less_equal, 1.0);
  CHECK_THROWS_AS(write_mps(rowclash), ExportError);

  CHECK_THROWS_AS(export_mps(dup, "/nonexistent/dir/x.mps"), ExportError);
}

TEST_CASE("reader rejects what the writer never produces") {
  CHECK_THROWS(parse_mps("NAME t\nROWS\n N OBJ\nCOLUMNS\nRANGES\n R1 c 1\nENDATA\n"));
  CHECK_THROWS(parse_mps("NAME t\nOBJSENSE\n    MAX\nROWS\n N OBJ\nENDATA\n"));
}
