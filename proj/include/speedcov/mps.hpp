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

// MPS export and import.
//
// The writer uses the fixed-format column layout (fields start at columns
// 2, 5, 15, 25, 40, 50) and pads wider when a name is longer than eight
// characters. The reader splits on whitespace, so it accepts both that
// output and free-format files, but names must not contain blanks.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "speedcov/error.hpp"
#include "speedcov/milp_model.hpp"

namespace speedcov {

inline constexpr std::size_t kMaxMpsName = 255;

namespace detail {

inline std::string mps_number(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

// One data line: field 1 (2 chars) at column 2, then name fields of width
// 8 and numeric fields of width 12, separated as in the fixed layout.
inline std::string mps_line(const std::string& f1, const std::string& f2,
                            const std::string& f3 = "",
                            const std::string& f4 = "") {
  std::string s = " " + pad(f1, 2) + " " + pad(f2, 8);
  if (!f3.empty()) s += "  " + pad(f3, 8);
  if (!f4.empty()) s += "  " + f4;
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s + "\n";
}

inline void check_name(const std::string& name, const char* what) {
  if (name.empty() || name.size() > kMaxMpsName)
    throw ExportError(std::string(what) + " name '" + name +
                      "' must have 1 to 255 characters");
  for (char c : name)
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
      throw ExportError(std::string(what) + " name '" + name +
                        "' contains whitespace");
  if (name.front() == '$')
    throw ExportError(std::string(what) + " name '" + name +
                      "' starts with '$'");
}

inline const char* row_code(RowSense s) {
  switch (s) {
    case RowSense::less_equal: return "L";
    case RowSense::equal: return "E";
    case RowSense::greater_equal: return "G";
  }
  return "E";
}

}  // namespace detail

inline constexpr const char* kObjectiveRow = "OBJ";

/// MPS text of `model`. Throws ExportError on invalid or colliding names.
inline std::string write_mps(const MilpModel& model) {
  using detail::mps_line;
  using detail::mps_number;
  std::unordered_set<std::string> row_names{kObjectiveRow};
  for (const auto& r : model.constraints()) {
    detail::check_name(r.name, "row");
    if (!row_names.insert(r.name).second)
      throw ExportError("duplicate row name '" + r.name + "'");
  }
  std::unordered_set<std::string> col_names;
  for (const auto& v : model.variables()) {
    detail::check_name(v.name, "column");
    if (!col_names.insert(v.name).second)
      throw ExportError("duplicate column name '" + v.name + "'");
  }
  std::string model_name = model.metadata.name.empty() ? "model"
                                                       : model.metadata.name;
  detail::check_name(model_name, "model");

  // entries per column, in row order
  std::vector<std::vector<std::pair<int, double>>> cols(model.variables().size());
  for (int i = 0; i < model.num_constraints(); ++i)
    for (const Term& t : model.constraint(i).terms)
      cols[static_cast<std::size_t>(t.var)].push_back({i, t.coef});

  std::ostringstream out;
  out << "NAME          " << model_name << "\n";
  out << "OBJSENSE\n    MIN\n";
  out << "ROWS\n";
  out << mps_line("N", kObjectiveRow);
  for (const auto& r : model.constraints())
    out << mps_line(detail::row_code(r.sense), r.name);

  out << "COLUMNS\n";
  bool in_marker = false;
  int marker_id = 0;
  auto marker = [&](const char* kind) {
    char name[16];
    std::snprintf(name, sizeof name, "MARKER%02d", marker_id++);
    out << "    " << detail::pad(name, 8) << "  'MARKER'                 '"
        << kind << "'\n";
  };
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const Variable& v = model.variables()[j];
    if (v.is_integral() != in_marker) {
      marker(v.is_integral() ? "INTORG" : "INTEND");
      in_marker = v.is_integral();
    }
    if (v.objective != 0.0 || cols[j].empty())
      out << mps_line("", v.name, kObjectiveRow, mps_number(v.objective));
    for (auto [i, a] : cols[j])
      out << mps_line("", v.name, model.constraint(i).name, mps_number(a));
  }
  if (in_marker) marker("INTEND");

  out << "RHS\n";
  for (const auto& r : model.constraints())
    if (r.rhs != 0.0) out << mps_line("", "RHS", r.name, mps_number(r.rhs));

  out << "BOUNDS\n";
  for (const auto& v : model.variables()) {
    if (v.kind == VarKind::binary) {
      out << mps_line("BV", "BND", v.name);
      if (v.lower == v.upper)
        out << mps_line("FX", "BND", v.name, mps_number(v.lower));
      continue;
    }
    if (v.lower == v.upper) {
      out << mps_line("FX", "BND", v.name, mps_number(v.lower));
      continue;
    }
    if (v.lower == -kInf)
      out << mps_line("MI", "BND", v.name);
    else if (v.lower != 0.0)
      out << mps_line("LO", "BND", v.name, mps_number(v.lower));
    if (v.upper != kInf)
      out << mps_line("UP", "BND", v.name, mps_number(v.upper));
    else if (v.is_integral())
      out << mps_line("PL", "BND", v.name);
  }
  out << "ENDATA\n";
  return out.str();
}

namespace detail {

inline double parse_mps_number(const std::string& tok, int line) {
  double v = 0.0;
  auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) {
    if (tok == "inf" || tok == "Inf" || tok == "1e+30" || tok == "Infinity")
      return kInf;
    if (tok == "-inf" || tok == "-Inf" || tok == "-Infinity") return -kInf;
    throw LoadError("MPS line " + std::to_string(line) + ": bad number '" +
                    tok + "'");
  }
  if (v >= 1e30) return kInf;
  if (v <= -1e30) return -kInf;
  return v;
}

}  // namespace detail

/// Parses MPS text into a model (minimisation; RANGES are rejected).
inline MilpModel parse_mps(const std::string& text) {
  struct Col {
    std::string name;
    bool integral = false;
    bool binary = false;
    double lower = 0.0;
    double upper = kInf;
    double obj = 0.0;
  };
  struct Row {
    std::string name;
    RowSense sense = RowSense::equal;
    double rhs = 0.0;
    std::vector<Term> terms;
  };
  std::string model_name = "model";
  std::string obj_row;
  std::vector<Row> rows;
  std::unordered_map<std::string, int> row_index;
  std::vector<Col> cols;
  std::unordered_map<std::string, int> col_index;
  bool integral = false;
  bool expect_sense = false;
  bool seen_end = false;
  std::string section;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> LoadError {
    return LoadError("MPS line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (line[0] != ' ' && line[0] != '\t') {
      section = tok[0];
      if (section == "NAME") {
        if (tok.size() > 1) model_name = tok[1];
      } else if (section == "OBJSENSE") {
        if (tok.size() > 1) {
          if (tok[1] != "MIN" && tok[1] != "MINIMIZE")
            throw fail("only minimisation is supported");
        } else {
          expect_sense = true;
        }
      } else if (section == "ENDATA") {
        seen_end = true;
        break;
      } else if (section == "RANGES") {
        throw fail("RANGES section is not supported");
      } else if (section != "ROWS" && section != "COLUMNS" && section != "RHS" &&
                 section != "BOUNDS") {
        throw fail("unknown section '" + section + "'");
      }
      continue;
    }

    if (expect_sense) {
      if (tok[0] != "MIN" && tok[0] != "MINIMIZE")
        throw fail("only minimisation is supported");
      expect_sense = false;
      continue;
    }
    if (section == "ROWS") {
      if (tok.size() != 2) throw fail("ROWS entry needs a type and a name");
      if (tok[0] == "N") {
        if (obj_row.empty()) obj_row = tok[1];
        continue;
      }
      Row r;
      r.name = tok[1];
      if (tok[0] == "L") r.sense = RowSense::less_equal;
      else if (tok[0] == "G") r.sense = RowSense::greater_equal;
      else if (tok[0] == "E") r.sense = RowSense::equal;
      else throw fail("unknown row type '" + tok[0] + "'");
      if (!row_index.emplace(r.name, static_cast<int>(rows.size())).second)
        throw fail("duplicate row '" + r.name + "'");
      rows.push_back(std::move(r));
    } else if (section == "COLUMNS") {
      if (tok.size() >= 3 && tok[1] == "'MARKER'") {
        if (tok[2] == "'INTORG'") integral = true;
        else if (tok[2] == "'INTEND'") integral = false;
        else throw fail("unknown marker " + tok[2]);
        continue;
      }
      if (tok.size() != 3 && tok.size() != 5)
        throw fail("COLUMNS entry needs 3 or 5 fields");
      auto [it, fresh] =
          col_index.emplace(tok[0], static_cast<int>(cols.size()));
      if (fresh) cols.push_back({tok[0], integral, false, 0.0, kInf, 0.0});
      const int j = it->second;
      for (std::size_t f = 1; f + 1 < tok.size(); f += 2) {
        const double a = detail::parse_mps_number(tok[f + 1], lineno);
        if (tok[f] == obj_row) {
          cols[static_cast<std::size_t>(j)].obj = a;
          continue;
        }
        auto r = row_index.find(tok[f]);
        if (r == row_index.end()) throw fail("unknown row '" + tok[f] + "'");
        rows[static_cast<std::size_t>(r->second)].terms.push_back({j, a});
      }
    } else if (section == "RHS") {
      const std::size_t first = tok.size() % 2 == 1 ? 1 : 0;
      for (std::size_t f = first; f + 1 < tok.size(); f += 2) {
        const double b = detail::parse_mps_number(tok[f + 1], lineno);
        if (tok[f] == obj_row) continue;
        auto r = row_index.find(tok[f]);
        if (r == row_index.end()) throw fail("unknown row '" + tok[f] + "'");
        rows[static_cast<std::size_t>(r->second)].rhs = b;
      }
    } else if (section == "BOUNDS") {
      if (tok.size() < 3) throw fail("BOUNDS entry too short");
      auto c = col_index.find(tok[2]);
      if (c == col_index.end()) throw fail("unknown column '" + tok[2] + "'");
      Col& col = cols[static_cast<std::size_t>(c->second)];
      const std::string& t = tok[0];
      const bool needs_value =
          t == "UP" || t == "LO" || t == "FX" || t == "LI" || t == "UI";
      if (needs_value && tok.size() < 4) throw fail(t + " bound needs a value");
      const double val =
          needs_value ? detail::parse_mps_number(tok[3], lineno) : 0.0;
      if (t == "UP") col.upper = val;
      else if (t == "LO") col.lower = val;
      else if (t == "FX") col.lower = col.upper = val;
      else if (t == "MI") col.lower = -kInf;
      else if (t == "PL") col.upper = kInf;
      else if (t == "BV") {
        col.binary = true;
        col.lower = 0.0;
        col.upper = 1.0;
      } else if (t == "LI") {
        col.integral = true;
        col.lower = val;
      } else if (t == "UI") {
        col.integral = true;
        col.upper = val;
      } else if (t == "FR") {
        col.lower = -kInf;
        col.upper = kInf;
      } else {
        throw fail("unknown bound type '" + t + "'");
      }
    } else {
      throw fail("data line outside a section");
    }
  }
  if (!seen_end) throw LoadError("MPS text has no ENDATA line");

  MilpModel m;
  m.metadata.name = model_name;
  for (const Col& c : cols) {
    const VarKind kind = c.binary     ? VarKind::binary
                         : c.integral ? VarKind::integer
                                      : VarKind::continuous;
    m.add_variable(c.name, kind, c.lower, c.upper, c.obj);
  }
  for (Row& r : rows)
    m.add_constraint(r.name, std::move(r.terms), r.sense, r.rhs);
  return m;
}

inline nlohmann::json metadata_to_json(const ModelMetadata& md) {
  nlohmann::json j;
  j["name"] = md.name;
  j["instance_id"] = md.instance_id;
  j["gamma"] = md.gamma ? nlohmann::json(*md.gamma) : nlohmann::json(nullptr);
  j["kappa"] = md.kappa ? nlohmann::json(*md.kappa) : nlohmann::json(nullptr);
  j["closure_mode"] = md.closure_mode;
  return j;
}

inline ModelMetadata metadata_from_json(const nlohmann::json& j) {
  ModelMetadata md;
  try {
    md.name = j.at("name").get<std::string>();
    md.instance_id = j.at("instance_id").get<std::string>();
    if (!j.at("gamma").is_null()) md.gamma = j.at("gamma").get<double>();
    if (!j.at("kappa").is_null()) md.kappa = j.at("kappa").get<std::size_t>();
    md.closure_mode = j.at("closure_mode").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("bad model metadata: ") + e.what());
  }
  return md;
}

inline std::string sidecar_path(const std::string& mps_path) {
  return mps_path + ".meta.json";
}

/// Writes `path` and the metadata sidecar next to it.
inline void export_mps(const MilpModel& model, const std::string& path) {
  const std::string text = write_mps(model);
  {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ExportError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw ExportError("write to '" + path + "' failed");
  }
  nlohmann::json meta = metadata_to_json(model.metadata);
  meta["variables"] = model.num_variables();
  meta["constraints"] = model.num_constraints();
  meta["integral_variables"] = model.num_integral();
  std::ofstream f(sidecar_path(path), std::ios::binary);
  if (!f) throw ExportError("cannot open '" + sidecar_path(path) + "'");
  f << meta.dump(2) << "\n";
  if (!f) throw ExportError("write to '" + sidecar_path(path) + "' failed");
}

/// Reads an MPS file; picks up the sidecar metadata when present.
inline MilpModel read_mps(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw LoadError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  MilpModel m = parse_mps(ss.str());
  std::ifstream meta(sidecar_path(path));
  if (meta) {
    nlohmann::json j;
    try {
      meta >> j;
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(std::string("malformed model metadata: ") + e.what());
    }
    m.metadata = metadata_from_json(j);
  }
  return m;
}

}  // namespace speedcov
