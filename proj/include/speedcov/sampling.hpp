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

// Reduced vertex sets for the coverage interpolation.
//
// Origins are ranked by individual coverage and the top `kappa` of them
// are enumerated exhaustively. The remaining origins only appear in three
// linear families:
//   H0  every short/long combination of the top-kappa origins
//   H1  all top-kappa origins short plus one other origin short
//   H2  exactly one non-top origin short
//   H3  the top-i origins short, i = kappa+1 .. n_origins
// Duplicates across the families are dropped, keeping first occurrence.

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "speedcov/coverage.hpp"
#include "speedcov/error.hpp"

namespace speedcov {

struct SamplePoint {
  OriginMask bits;
  std::size_t value = 0;

  friend bool operator==(const SamplePoint&, const SamplePoint&) = default;
};

struct SampleSet {
  int destination = -1;
  std::size_t kappa = 0;
  std::vector<SamplePoint> points;

  std::size_t n_origins() const {
    return points.empty() ? 0 : points.front().bits.size();
  }

  friend bool operator==(const SampleSet&, const SampleSet&) = default;
};

/// Upper bound 2^kappa + 3 (n_origins - kappa) on the size of a sample set.
inline std::uint64_t sample_count_bound(std::size_t kappa,
                                        std::size_t n_origins) {
  if (kappa < 1 || kappa > n_origins)
    throw ParameterError("kappa must lie in [1, n_origins]");
  if (kappa >= 63) throw ParameterError("kappa too large for a 64-bit count");
  return (std::uint64_t{1} << kappa) + 3 * (n_origins - kappa);
}

namespace detail {

class SampleCollector {
 public:
  SampleCollector(const InventoryMatrix& inv, SampleSet& out)
      : inv_(inv), out_(out) {}

  void add(OriginMask bits) {
    if (!seen_.insert(bits).second) return;
    const std::size_t value = coverage(inv_, bits);
    out_.points.push_back({std::move(bits), value});
  }

 private:
  const InventoryMatrix& inv_;
  SampleSet& out_;
  std::set<OriginMask> seen_;
};

}  // namespace detail

/// Builds the sample set for `destination` using the supplied origin
/// ranking (most valuable first).
inline SampleSet build_samples(const InventoryMatrix& inv, int destination,
                               std::size_t kappa,
                               const std::vector<std::size_t>& ranking) {
  const std::size_t n = inv.n_origins();
  if (kappa < 1 || kappa > n)
    throw ParameterError("kappa=" + std::to_string(kappa) +
                         " must lie in [1, " + std::to_string(n) + "]");
  if (kappa >= 31)
    throw ParameterError("kappa=" + std::to_string(kappa) +
                         " would enumerate more than 2^30 vertices");
  if (ranking.size() != n)
    throw DimensionError("ranking must list every origin once");

  SampleSet set;
  set.destination = destination;
  set.kappa = kappa;
  detail::SampleCollector collect(inv, set);

  // H0, subset mask bit j <-> ranking[j]
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << kappa); ++mask) {
    OriginMask bits(n, 0);
    for (std::size_t j = 0; j < kappa; ++j)
      if ((mask >> j) & 1U) bits[ranking[j]] = 1;
    collect.add(std::move(bits));
  }
  OriginMask top(n, 0);
  for (std::size_t j = 0; j < kappa; ++j) top[ranking[j]] = 1;
  // H1
  for (std::size_t j = kappa; j < n; ++j) {
    OriginMask bits = top;
    bits[ranking[j]] = 1;
    collect.add(std::move(bits));
  }
  // H2
  for (std::size_t j = kappa; j < n; ++j) {
    OriginMask bits(n, 0);
    bits[ranking[j]] = 1;
    collect.add(std::move(bits));
  }
  // H3
  OriginMask prefix = top;
  for (std::size_t j = kappa; j < n; ++j) {
    prefix[ranking[j]] = 1;
    collect.add(prefix);
  }
  return set;
}

/// Builds the sample set with origins ranked by `rank_origins`.
inline SampleSet build_samples(const InventoryMatrix& inv, int destination,
                               std::size_t kappa) {
  return build_samples(inv, destination, kappa, rank_origins(inv));
}

}  // namespace speedcov
