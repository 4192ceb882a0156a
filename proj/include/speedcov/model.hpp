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

// MILP formulations of the network design problem.
//
// Cost model (unsplittable multicommodity design with truck units):
//   min  sum_e c_e y_e
//   s.t. sum_{p uses e} v_k x_p - V_e y_e <= 0      cap_e<id>
//        sum_{p in P_k} x_p = 1                     assign_k<id>
//        x binary, y integer in [0, ceil(load_e / V_e)]
//
// The speed-aware model adds, per destination d with commodities,
//   z_od - sum_{p in P_(o,d)} w_p x_p = 0           zdef_o<o>_d<d>
//   sum_i a_di = 1                                  conv_d<d>
//   sum_i a_di b_io - z_od  (= or <=)  0            clo_o<o>_d<d>
// and rewards each weight a_di with -gamma * coverage(b_i) in the
// objective. z is continuous: binary x and the defining row force 0/1.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "speedcov/closure.hpp"
#include "speedcov/coverage.hpp"
#include "speedcov/error.hpp"
#include "speedcov/instance.hpp"
#include "speedcov/milp_model.hpp"
#include "speedcov/sampling.hpp"
#include "speedcov/solver.hpp"

namespace speedcov {

/// Sample set per destination node id.
using SampleMap = std::map<int, SampleSet>;

/// Variable indices of a built model, by role.
struct ModelLayout {
  std::vector<int> path_var;  // per path id
  std::vector<int> edge_var;  // per edge id, -1 when no path uses the edge
  std::vector<int> destinations;  // destinations carrying z / weight columns
  std::vector<int> origins;       // origin node ids, inventory row order
  std::vector<std::vector<int>> z_var;      // [destination][origin]
  std::vector<std::vector<int>> alpha_var;  // [destination][sample point]
};

struct NetworkModel {
  MilpModel milp;
  ModelLayout layout;
  bool speed_aware = false;
  double gamma = 0.0;
  ClosureMode mode = ClosureMode::dominated;
};

/// Path choice per commodity (a path id), the decision that fixes every
/// other variable of a network model.
using PathChoice = std::vector<int>;

namespace detail {

inline void require_valid(const Instance& inst) {
  const auto problems = validate(inst);
  if (!problems.empty())
    throw InvalidInstanceError("invalid instance: " + problems.front() +
                               (problems.size() > 1
                                    ? " (and " +
                                          std::to_string(problems.size() - 1) +
                                          " more)"
                                    : ""));
}

inline std::string instance_tag(const Instance& inst) {
  if (!inst.generation) return "custom";
  const auto& g = *inst.generation;
  return "gen_o" + std::to_string(g.n_origins) + "_d" +
         std::to_string(g.n_destinations) + "_h" + std::to_string(g.n_hubs) +
         "_s" + std::to_string(g.seed);
}

}  // namespace detail

inline NetworkModel build_cost_model(const Instance& inst) {
  detail::require_valid(inst);
  NetworkModel nm;
  MilpModel& m = nm.milp;
  m.metadata.name = "cost";
  m.metadata.instance_id = detail::instance_tag(inst);

  for (const auto& p : inst.paths)
    nm.layout.path_var.push_back(m.add_variable(
        "x_p" + std::to_string(p.id), VarKind::binary, 0.0, 1.0, 0.0));

  std::vector<double> load(inst.edges.size(), 0.0);
  std::vector<std::vector<Term>> cap_terms(inst.edges.size());
  for (const auto& p : inst.paths) {
    const double v = inst.commodities[static_cast<std::size_t>(p.commodity)].volume;
    for (int e : p.edges) {
      cap_terms[static_cast<std::size_t>(e)].push_back(
          {nm.layout.path_var[static_cast<std::size_t>(p.id)], v});
    }
  }
  // A commodity counts once towards an edge's bound even if several of its
  // paths share the edge.
  for (std::size_t k = 0; k < inst.commodities.size(); ++k) {
    std::set<int> used;
    for (const auto& p : inst.paths)
      if (p.commodity == static_cast<int>(k))
        used.insert(p.edges.begin(), p.edges.end());
    for (int e : used)
      load[static_cast<std::size_t>(e)] += inst.commodities[k].volume;
  }

  nm.layout.edge_var.assign(inst.edges.size(), -1);
  for (const auto& e : inst.edges) {
    const auto ei = static_cast<std::size_t>(e.id);
    if (cap_terms[ei].empty()) continue;
    const double ub =
        std::max(0.0, std::ceil(load[ei] / e.truck_capacity - 1e-9));
    nm.layout.edge_var[ei] =
        m.add_variable("y_e" + std::to_string(e.id), VarKind::integer, 0.0, ub,
                       e.cost_per_truck);
  }
  for (const auto& e : inst.edges) {
    const auto ei = static_cast<std::size_t>(e.id);
    if (cap_terms[ei].empty()) continue;
    auto terms = cap_terms[ei];
    terms.push_back({nm.layout.edge_var[ei], -e.truck_capacity});
    m.add_constraint("cap_e" + std::to_string(e.id), std::move(terms),
                     RowSense::less_equal, 0.0);
  }
  const auto by_comm = inst.paths_by_commodity();
  for (std::size_t k = 0; k < inst.commodities.size(); ++k) {
    std::vector<Term> terms;
    for (int p : by_comm[k])
      terms.push_back({nm.layout.path_var[static_cast<std::size_t>(p)], 1.0});
    m.add_constraint("assign_k" + std::to_string(k), std::move(terms),
                     RowSense::equal, 1.0);
  }
  return nm;
}

inline NetworkModel build_speed_aware_model(const Instance& inst,
                                            const SampleMap& samples,
                                            double gamma, ClosureMode mode) {
  if (!(gamma >= 0.0)) throw ParameterError("gamma must be non-negative");
  NetworkModel nm = build_cost_model(inst);
  nm.speed_aware = true;
  nm.gamma = gamma;
  nm.mode = mode;
  MilpModel& m = nm.milp;
  m.metadata.name = "speed_aware";
  m.metadata.gamma = gamma;
  m.metadata.closure_mode = to_string(mode);

  const auto origins = inst.nodes_of_kind(NodeKind::origin);
  const auto dests = inst.active_destinations();
  nm.layout.origins = origins;
  nm.layout.destinations = dests;
  std::optional<std::size_t> kappa;
  for (int d : dests) {
    auto it = samples.find(d);
    if (it == samples.end())
      throw ParameterError("missing sample set for destination " +
                           std::to_string(d));
    if (it->second.points.empty() ||
        it->second.n_origins() != origins.size())
      throw DimensionError("sample set of destination " + std::to_string(d) +
                           " does not match the origin count");
    kappa = kappa ? std::max(*kappa, it->second.kappa) : it->second.kappa;
  }
  m.metadata.kappa = kappa;

  // commodity of each (origin, destination) pair
  std::map<std::pair<int, int>, int> od;
  for (const auto& c : inst.commodities) od[{c.origin, c.destination}] = c.id;
  const auto by_comm = inst.paths_by_commodity();

  for (int d : dests) {
    std::vector<int> zs;
    for (int o : origins)
      zs.push_back(m.add_variable(
          "z_o" + std::to_string(o) + "_d" + std::to_string(d),
          VarKind::continuous, 0.0, 1.0, 0.0));
    nm.layout.z_var.push_back(std::move(zs));
  }
  for (int d : dests) {
    const SampleSet& s = samples.at(d);
    std::vector<int> as;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const double reward = static_cast<double>(s.points[i].value);
      as.push_back(m.add_variable(
          "a_d" + std::to_string(d) + "_i" + std::to_string(i),
          VarKind::continuous, 0.0, kInf, gamma == 0.0 ? 0.0 : -gamma * reward));
    }
    nm.layout.alpha_var.push_back(std::move(as));
  }

  for (std::size_t di = 0; di < dests.size(); ++di) {
    const int d = dests[di];
    for (std::size_t oi = 0; oi < origins.size(); ++oi) {
      const int o = origins[oi];
      std::vector<Term> terms{{nm.layout.z_var[di][oi], 1.0}};
      if (auto it = od.find({o, d}); it != od.end())
        for (int p : by_comm[static_cast<std::size_t>(it->second)])
          if (inst.paths[static_cast<std::size_t>(p)].is_short)
            terms.push_back(
                {nm.layout.path_var[static_cast<std::size_t>(p)], -1.0});
      m.add_constraint("zdef_o" + std::to_string(o) + "_d" + std::to_string(d),
                       std::move(terms), RowSense::equal, 0.0);
    }
  }
  for (std::size_t di = 0; di < dests.size(); ++di) {
    std::vector<Term> terms;
    for (int a : nm.layout.alpha_var[di]) terms.push_back({a, 1.0});
    m.add_constraint("conv_d" + std::to_string(dests[di]), std::move(terms),
                     RowSense::equal, 1.0);
  }
  for (std::size_t di = 0; di < dests.size(); ++di) {
    const int d = dests[di];
    const SampleSet& s = samples.at(d);
    for (std::size_t oi = 0; oi < origins.size(); ++oi) {
      std::vector<Term> terms;
      for (std::size_t i = 0; i < s.points.size(); ++i)
        if (s.points[i].bits[oi])
          terms.push_back({nm.layout.alpha_var[di][i], 1.0});
      terms.push_back({nm.layout.z_var[di][oi], -1.0});
      m.add_constraint("clo_o" + std::to_string(origins[oi]) + "_d" +
                           std::to_string(d),
                       std::move(terms), closure_sense(mode), 0.0);
    }
  }
  return nm;
}

/// Sample sets for every destination with commodities.
inline SampleMap build_all_samples(const Instance& inst, std::size_t kappa) {
  SampleMap out;
  const auto ranking = rank_origins(inst.inventory);
  for (int d : inst.active_destinations())
    out.emplace(d, build_samples(inst.inventory, d, kappa, ranking));
  return out;
}

/// Cut-set aggregates: for every node and each of its edge groups (all
/// in-edges, all out-edges, and those restricted to hub neighbours), the
/// volume of commodities whose path crosses the group must fit on the
/// group's trucks. Groups with mixed truck capacities are skipped.
inline std::vector<CapacityAggregate> cut_set_aggregates(const Instance& inst,
                                                         const NetworkModel& nm) {
  std::vector<std::vector<int>> in(inst.nodes.size()), out(inst.nodes.size());
  for (const auto& e : inst.edges) {
    if (nm.layout.edge_var[static_cast<std::size_t>(e.id)] < 0) continue;
    out[static_cast<std::size_t>(e.tail)].push_back(e.id);
    in[static_cast<std::size_t>(e.head)].push_back(e.id);
  }
  auto is_hub = [&](int node) {
    return inst.nodes[static_cast<std::size_t>(node)].kind == NodeKind::hub;
  };
  std::set<std::vector<int>> groups;
  for (std::size_t n = 0; n < inst.nodes.size(); ++n) {
    std::vector<int> in_hub, out_hub;
    for (int e : in[n])
      if (is_hub(inst.edges[static_cast<std::size_t>(e)].tail)) in_hub.push_back(e);
    for (int e : out[n])
      if (is_hub(inst.edges[static_cast<std::size_t>(e)].head)) out_hub.push_back(e);
    for (auto* g : {&in[n], &out[n], &in_hub, &out_hub})
      if (g->size() > 1) groups.insert(*g);
  }

  std::vector<CapacityAggregate> aggs;
  const auto by_comm = inst.paths_by_commodity();
  for (const auto& g : groups) {
    const double cap = inst.edges[static_cast<std::size_t>(g.front())].truck_capacity;
    bool same = true;
    for (int e : g)
      same = same && inst.edges[static_cast<std::size_t>(e)].truck_capacity == cap;
    if (!same) continue;
    const std::set<int> members(g.begin(), g.end());
    CapacityAggregate agg;
    for (int e : g)
      agg.trucks.push_back(nm.layout.edge_var[static_cast<std::size_t>(e)]);
    for (std::size_t k = 0; k < by_comm.size(); ++k) {
      CapacityAggregate::Item item{inst.commodities[k].volume / cap, {}};
      for (int p : by_comm[k]) {
        const auto& edges = inst.paths[static_cast<std::size_t>(p)].edges;
        if (std::any_of(edges.begin(), edges.end(),
                        [&](int e) { return members.count(e) > 0; }))
          item.vars.push_back(nm.layout.path_var[static_cast<std::size_t>(p)]);
      }
      if (!item.vars.empty()) agg.items.push_back(std::move(item));
    }
    aggs.push_back(std::move(agg));
  }
  return aggs;
}

// ---------------------------------------------------------------------------
// Evaluating path choices.

/// Trucks needed per edge when every commodity follows `choice`.
inline std::vector<double> trucks_for(const Instance& inst,
                                      const PathChoice& choice) {
  std::vector<double> flow(inst.edges.size(), 0.0);
  for (std::size_t k = 0; k < choice.size(); ++k)
    for (int e : inst.paths[static_cast<std::size_t>(choice[k])].edges)
      flow[static_cast<std::size_t>(e)] += inst.commodities[k].volume;
  std::vector<double> y(inst.edges.size(), 0.0);
  for (std::size_t e = 0; e < y.size(); ++e)
    y[e] = std::max(0.0,
                    std::ceil(flow[e] / inst.edges[e].truck_capacity - 1e-9));
  return y;
}

inline double transport_cost(const Instance& inst, const PathChoice& choice) {
  const auto y = trucks_for(inst, choice);
  double c = 0.0;
  for (std::size_t e = 0; e < y.size(); ++e)
    c += inst.edges[e].cost_per_truck * y[e];
  return c;
}

/// Speed assignment of `destination` implied by a path choice.
inline OriginMask speed_mask(const Instance& inst, const PathChoice& choice,
                             int destination) {
  OriginMask bits(inst.inventory.n_origins(), 0);
  for (std::size_t k = 0; k < choice.size(); ++k) {
    const auto& c = inst.commodities[k];
    if (c.destination != destination) continue;
    if (!inst.paths[static_cast<std::size_t>(choice[k])].is_short) continue;
    const int oi = inst.origin_index(c.origin);
    if (oi >= 0) bits[static_cast<std::size_t>(oi)] = 1;
  }
  return bits;
}

/// Exact unique-item coverage summed over destinations.
inline std::size_t total_coverage(const Instance& inst,
                                  const PathChoice& choice) {
  std::size_t s = 0;
  for (int d : inst.active_destinations())
    s += coverage(inst.inventory, speed_mask(inst, choice, d));
  return s;
}

inline std::size_t count_directs(const Instance& inst,
                                 const PathChoice& choice) {
  std::size_t n = 0;
  for (int p : choice)
    if (inst.paths[static_cast<std::size_t>(p)].edges.size() == 1) ++n;
  return n;
}

/// Reads the path choice out of a model solution (largest x per commodity).
inline PathChoice path_choice_of(const Instance& inst, const NetworkModel& nm,
                                 std::span<const double> values) {
  PathChoice choice(inst.commodities.size(), -1);
  std::vector<double> best(inst.commodities.size(), -kInf);
  for (const auto& p : inst.paths) {
    const double v = values[static_cast<std::size_t>(
        nm.layout.path_var[static_cast<std::size_t>(p.id)])];
    const auto k = static_cast<std::size_t>(p.commodity);
    if (v > best[k] + 1e-12) {
      best[k] = v;
      choice[k] = p.id;
    }
  }
  return choice;
}

/// Closure weight chosen for one destination at an integral speed mask:
/// index of the sample point carrying all the weight, or nullopt when the
/// mask is not representable (equality mode off the sample set).
inline std::optional<std::size_t> weight_point(const SampleSet& s,
                                               const OriginMask& mask,
                                               ClosureMode mode) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto& b = s.points[i].bits;
    if (mode == ClosureMode::equality) {
      if (b == mask) return i;
      continue;
    }
    bool inside = true;
    for (std::size_t o = 0; o < mask.size(); ++o)
      if (b[o] && !mask[o]) {
        inside = false;
        break;
      }
    if (inside && (!best || s.points[i].value > s.points[*best].value))
      best = i;
  }
  return best;
}

/// Full variable vector for a path choice: y at the minimal truck count,
/// z from the short flags, all closure weight on one sample point.
inline std::optional<std::vector<double>> complete_solution(
    const Instance& inst, const NetworkModel& nm, const SampleMap* samples,
    const PathChoice& choice) {
  std::vector<double> x(static_cast<std::size_t>(nm.milp.num_variables()), 0.0);
  for (int p : choice)
    x[static_cast<std::size_t>(nm.layout.path_var[static_cast<std::size_t>(p)])] =
        1.0;
  const auto y = trucks_for(inst, choice);
  for (std::size_t e = 0; e < y.size(); ++e)
    if (nm.layout.edge_var[e] >= 0)
      x[static_cast<std::size_t>(nm.layout.edge_var[e])] = y[e];
  if (!nm.speed_aware) return x;
  if (samples == nullptr) throw ParameterError("speed-aware model needs samples");
  for (std::size_t di = 0; di < nm.layout.destinations.size(); ++di) {
    const int d = nm.layout.destinations[di];
    const auto mask = speed_mask(inst, choice, d);
    for (std::size_t oi = 0; oi < mask.size(); ++oi)
      x[static_cast<std::size_t>(nm.layout.z_var[di][oi])] = mask[oi];
    const auto pt = weight_point(samples->at(d), mask, nm.mode);
    if (!pt) return std::nullopt;
    x[static_cast<std::size_t>(nm.layout.alpha_var[di][*pt])] = 1.0;
  }
  return x;
}

// ---------------------------------------------------------------------------
// Primal heuristic: round the LP path choice, then improve it by single
// commodity re-routing until no move lowers the model objective.

class PathLocalSearch {
 public:
  PathLocalSearch(const Instance& inst, const NetworkModel& nm,
                  const SampleMap* samples)
      : inst_(inst), nm_(nm), samples_(samples) {
    by_comm_ = inst.paths_by_commodity();
    speed_ = nm.speed_aware && nm.gamma != 0.0;
    dest_pos_.assign(inst.nodes.size(), -1);
    for (std::size_t di = 0; di < nm.layout.destinations.size(); ++di)
      dest_pos_[static_cast<std::size_t>(nm.layout.destinations[di])] =
          static_cast<int>(di);
    memo_.resize(nm.layout.destinations.size());
    // Speed masks are packed into 64-bit words.
    enabled_ = !speed_ || inst.inventory.n_origins() <= 64;
  }

  /// Model objective of a choice; +inf when not representable.
  double objective(const PathChoice& choice) const {
    if (!enabled_) return kInf;
    double obj = transport_cost(inst_, choice);
    if (!speed_) return obj;
    for (std::size_t di = 0; di < nm_.layout.destinations.size(); ++di) {
      const double v = coverage_term(
          di, encode(speed_mask(inst_, choice, nm_.layout.destinations[di])));
      if (v == -kInf) return kInf;
      obj -= nm_.gamma * v;
    }
    return obj;
  }

  /// Descent over single-commodity re-routings, then over re-routings of
  /// two commodities at once, until neither lowers the objective.
  void improve(PathChoice& choice) const {
    if (!enabled_) return;
    State s = state_of(choice);
    while (true) {
      if (single_pass(s)) continue;
      if (!pair_pass(s)) break;
    }
    choice = s.choice;
  }

  /// Iterated local search around the best choice so far. Odd rounds move
  /// every commodity off one used edge; even rounds re-route between 2 and
  /// `max_kick` random commodities. Each kick is followed by `improve`.
  void perturb(PathChoice& choice, int rounds, int max_kick,
               std::uint64_t seed) const {
    if (!enabled_ || choice.empty()) return;
    improve(choice);
    double best = objective(choice);
    std::mt19937_64 rng(seed);
    auto uses = [&](int p, int e) {
      const auto& es = inst_.paths[static_cast<std::size_t>(p)].edges;
      return std::find(es.begin(), es.end(), e) != es.end();
    };
    for (int r = 0; r < rounds; ++r) {
      PathChoice c = choice;
      if (r % 2 == 1) {
        std::vector<int> used;
        for (int p : c)
          for (int e : inst_.paths[static_cast<std::size_t>(p)].edges)
            used.push_back(e);
        const int e = used[rng() % used.size()];
        for (std::size_t k = 0; k < c.size(); ++k) {
          if (!uses(c[k], e)) continue;
          std::vector<int> alt;
          for (int p : by_comm_[k])
            if (!uses(p, e)) alt.push_back(p);
          if (!alt.empty()) c[k] = alt[rng() % alt.size()];
        }
      } else {
        const int kick =
            2 + static_cast<int>(rng() % static_cast<std::uint64_t>(
                                              std::max(1, max_kick - 1)));
        for (int j = 0; j < kick; ++j) {
          const std::size_t k = rng() % c.size();
          c[k] = by_comm_[k][rng() % by_comm_[k].size()];
        }
      }
      improve(c);
      const double v = objective(c);
      if (v < best - 1e-9 * std::max(1.0, std::abs(best))) {
        best = v;
        choice = std::move(c);
      }
    }
  }

 private:
  struct State {
    PathChoice choice;
    std::vector<double> flow;
    std::vector<std::uint64_t> masks;  // per destination, bit o = origin o
  };

  struct Move {
    double delta = 0.0;
    int di = -1;
    std::uint64_t mask = 0;
  };

  static std::uint64_t encode(const OriginMask& m) {
    std::uint64_t b = 0;
    for (std::size_t o = 0; o < m.size(); ++o)
      if (m[o]) b |= std::uint64_t{1} << o;
    return b;
  }

  // Closure term at an integral mask, -inf when not representable.
  double coverage_term(std::size_t di, std::uint64_t mask) const {
    auto& memo = memo_[di];
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    const SampleSet& s = samples_->at(nm_.layout.destinations[di]);
    OriginMask bits(s.n_origins(), 0);
    for (std::size_t o = 0; o < bits.size(); ++o) bits[o] = (mask >> o) & 1u;
    const auto pt = weight_point(s, bits, nm_.mode);
    const double v =
        pt ? static_cast<double>(s.points[*pt].value) : -kInf;
    memo.emplace(mask, v);
    return v;
  }

  State state_of(const PathChoice& choice) const {
    State s{choice, std::vector<double>(inst_.edges.size(), 0.0), {}};
    for (std::size_t k = 0; k < choice.size(); ++k)
      for (int e : inst_.paths[static_cast<std::size_t>(choice[k])].edges)
        s.flow[static_cast<std::size_t>(e)] += inst_.commodities[k].volume;
    if (speed_)
      for (int d : nm_.layout.destinations)
        s.masks.push_back(encode(speed_mask(inst_, choice, d)));
    return s;
  }

  double trucks(std::size_t e, double f) const {
    return std::max(0.0, std::ceil(f / inst_.edges[e].truck_capacity - 1e-9));
  }

  // Objective change of re-routing commodity k onto path pid; delta is +inf
  // when the resulting speed assignment is not representable.
  Move evaluate(State& s, std::size_t k, int pid) const {
    Move mv;
    const double v = inst_.commodities[k].volume;
    const Path& cur = inst_.paths[static_cast<std::size_t>(s.choice[k])];
    const Path& alt = inst_.paths[static_cast<std::size_t>(pid)];
    for (int e : cur.edges) {
      const auto ei = static_cast<std::size_t>(e);
      mv.delta += inst_.edges[ei].cost_per_truck *
                  (trucks(ei, s.flow[ei] - v) - trucks(ei, s.flow[ei]));
      s.flow[ei] -= v;
    }
    for (int e : alt.edges) {
      const auto ei = static_cast<std::size_t>(e);
      mv.delta += inst_.edges[ei].cost_per_truck *
                  (trucks(ei, s.flow[ei] + v) - trucks(ei, s.flow[ei]));
      s.flow[ei] += v;
    }
    for (int e : alt.edges) s.flow[static_cast<std::size_t>(e)] -= v;
    for (int e : cur.edges) s.flow[static_cast<std::size_t>(e)] += v;

    const auto& comm = inst_.commodities[k];
    const int di = dest_pos_[static_cast<std::size_t>(comm.destination)];
    if (speed_ && di >= 0 && alt.is_short != cur.is_short) {
      const auto d = static_cast<std::size_t>(di);
      const auto bit = std::uint64_t{1}
                       << static_cast<unsigned>(inst_.origin_index(comm.origin));
      const std::uint64_t mask =
          alt.is_short ? (s.masks[d] | bit) : (s.masks[d] & ~bit);
      const double nv = coverage_term(d, mask);
      if (nv == -kInf) {
        mv.delta = kInf;
        return mv;
      }
      mv.delta -= nm_.gamma * (nv - coverage_term(d, s.masks[d]));
      mv.di = di;
      mv.mask = mask;
    }
    return mv;
  }

  void apply(State& s, std::size_t k, int pid, const Move& mv) const {
    const double v = inst_.commodities[k].volume;
    for (int e : inst_.paths[static_cast<std::size_t>(s.choice[k])].edges)
      s.flow[static_cast<std::size_t>(e)] -= v;
    for (int e : inst_.paths[static_cast<std::size_t>(pid)].edges)
      s.flow[static_cast<std::size_t>(e)] += v;
    if (mv.di >= 0) s.masks[static_cast<std::size_t>(mv.di)] = mv.mask;
    s.choice[k] = pid;
  }

  bool single_pass(State& s) const {
    bool improved = false;
    for (std::size_t k = 0; k < s.choice.size(); ++k) {
      int best_p = -1;
      Move best{-1e-9, -1, 0};
      for (int pid : by_comm_[k]) {
        if (pid == s.choice[k]) continue;
        const Move mv = evaluate(s, k, pid);
        if (mv.delta < best.delta) {
          best = mv;
          best_p = pid;
        }
      }
      if (best_p >= 0) {
        apply(s, k, best_p, best);
        improved = true;
      }
    }
    return improved;
  }

  // First improving pair (k1, k2) of simultaneous re-routings.
  bool pair_pass(State& s) const {
    const std::size_t nk = s.choice.size();
    for (std::size_t k1 = 0; k1 < nk; ++k1) {
      for (int p1 : by_comm_[k1]) {
        if (p1 == s.choice[k1]) continue;
        const Move m1 = evaluate(s, k1, p1);
        if (m1.delta == kInf) continue;
        const int old1 = s.choice[k1];
        apply(s, k1, p1, m1);
        for (std::size_t k2 = k1 + 1; k2 < nk; ++k2) {
          for (int p2 : by_comm_[k2]) {
            if (p2 == s.choice[k2]) continue;
            const Move m2 = evaluate(s, k2, p2);
            if (m1.delta + m2.delta < -1e-9) {
              apply(s, k2, p2, m2);
              return true;
            }
          }
        }
        // undo the first move
        Move back = evaluate(s, k1, old1);
        apply(s, k1, old1, back);
      }
    }
    return false;
  }

  const Instance& inst_;
  const NetworkModel& nm_;
  const SampleMap* samples_;
  bool speed_ = false;
  bool enabled_ = true;
  std::vector<std::vector<int>> by_comm_;
  std::vector<int> dest_pos_;
  mutable std::vector<std::unordered_map<std::uint64_t, double>> memo_;
};

/// Rounding + local-search heuristic for solve_milp. The returned callable
/// keeps references to its arguments.
inline PrimalHeuristic make_path_heuristic(const Instance& inst,
                                           const NetworkModel& nm,
                                           const SampleMap* samples) {
  auto search = std::make_shared<PathLocalSearch>(inst, nm, samples);
  auto seen = std::make_shared<std::set<PathChoice>>();
  auto best = std::make_shared<double>(kInf);
  return [&inst, &nm, samples, search, seen, best](
             std::span<const double> lp,
             std::int64_t node) -> std::optional<std::vector<double>> {
    PathChoice choice = path_choice_of(inst, nm, lp);
    if (!seen->insert(choice).second) return std::nullopt;
    if (seen->size() > 200000) seen->clear();
    search->improve(choice);
    // New best descent point: spend a perturbation budget around it.
    if (search->objective(choice) < *best - 1e-9 * std::max(1.0, std::abs(*best))) {
      search->perturb(choice, 300, 10, static_cast<std::uint64_t>(node) + 1);
      *best = search->objective(choice);
    }
    return complete_solution(inst, nm, samples, choice);
  };
}

}  // namespace speedcov
