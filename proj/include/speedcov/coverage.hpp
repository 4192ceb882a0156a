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

// Speed-coverage oracle. Given which origins reach a destination over a
// short path, the coverage is the number of distinct items stocked at any
// of those origins. Inventories are kept as one fixed-width bitset per
// origin so a query is a word-wise OR followed by a popcount.

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "speedcov/error.hpp"

namespace speedcov {

/// 0/1 flag per origin. Index o is 1 when origin o is speed-connected.
using OriginMask = std::vector<std::uint8_t>;

class InventoryMatrix {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  InventoryMatrix() = default;
  InventoryMatrix(std::size_t n_origins, std::size_t n_items)
      : n_origins_(n_origins),
        n_items_(n_items),
        words_per_row_((n_items + kWordBits - 1) / kWordBits),
        bits_(n_origins * words_per_row_, 0) {}

  /// Builds the matrix from per-origin item-id lists.
  static InventoryMatrix from_item_lists(
      std::size_t n_items, const std::vector<std::vector<std::size_t>>& rows) {
    InventoryMatrix inv(rows.size(), n_items);
    for (std::size_t o = 0; o < rows.size(); ++o)
      for (std::size_t item : rows[o]) inv.set(o, item);
    return inv;
  }

  std::size_t n_origins() const { return n_origins_; }
  std::size_t n_items() const { return n_items_; }
  std::size_t words_per_row() const { return words_per_row_; }

  void set(std::size_t origin, std::size_t item, bool stocked = true) {
    check_cell(origin, item);
    Word& w = bits_[origin * words_per_row_ + item / kWordBits];
    const Word m = Word{1} << (item % kWordBits);
    w = stocked ? (w | m) : (w & ~m);
  }

  bool contains(std::size_t origin, std::size_t item) const {
    check_cell(origin, item);
    return (bits_[origin * words_per_row_ + item / kWordBits] >>
            (item % kWordBits)) &
           1U;
  }

  std::span<const Word> row(std::size_t origin) const {
    if (origin >= n_origins_)
      throw DimensionError("origin " + std::to_string(origin) +
                           " out of range (n_origins=" +
                           std::to_string(n_origins_) + ")");
    return {bits_.data() + origin * words_per_row_, words_per_row_};
  }

  /// Sorted item ids stocked at `origin`.
  std::vector<std::size_t> items(std::size_t origin) const {
    std::vector<std::size_t> out;
    auto r = row(origin);
    for (std::size_t w = 0; w < r.size(); ++w) {
      Word bits = r[w];
      while (bits) {
        out.push_back(w * kWordBits +
                      static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
    return out;
  }

  friend bool operator==(const InventoryMatrix&,
                         const InventoryMatrix&) = default;

 private:
  void check_cell(std::size_t origin, std::size_t item) const {
    if (origin >= n_origins_ || item >= n_items_)
      throw DimensionError("inventory cell (" + std::to_string(origin) + ", " +
                           std::to_string(item) + ") out of range");
  }

  std::size_t n_origins_ = 0;
  std::size_t n_items_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<Word> bits_;
};

/// Short/long status of every origin towards one destination.
struct SpeedAssignment {
  int destination = -1;
  OriginMask bits;
};

/// Number of unique items stocked at the origins flagged in `bits`.
inline std::size_t coverage(const InventoryMatrix& inv,
                            std::span<const std::uint8_t> bits) {
  if (bits.size() != inv.n_origins())
    throw DimensionError("speed assignment has " + std::to_string(bits.size()) +
                         " entries, inventory has " +
                         std::to_string(inv.n_origins()) + " origins");
  const std::size_t nw = inv.words_per_row();
  std::size_t total = 0;
  // Word-major so the union buffer is a single register.
  for (std::size_t w = 0; w < nw; ++w) {
    InventoryMatrix::Word acc = 0;
    for (std::size_t o = 0; o < bits.size(); ++o)
      if (bits[o]) acc |= inv.row(o)[w];
    total += static_cast<std::size_t>(std::popcount(acc));
  }
  return total;
}

inline std::size_t coverage(const InventoryMatrix& inv,
                            const SpeedAssignment& z) {
  return coverage(inv, std::span<const std::uint8_t>(z.bits));
}

/// Coverage when only `origin` is speed-connected.
inline std::size_t individual_coverage(const InventoryMatrix& inv,
                                       std::size_t origin) {
  std::size_t total = 0;
  for (auto w : inv.row(origin))
    total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

/// Origins by decreasing individual coverage; ties keep ascending index.
inline std::vector<std::size_t> rank_origins(const InventoryMatrix& inv) {
  std::vector<std::size_t> counts(inv.n_origins());
  for (std::size_t o = 0; o < inv.n_origins(); ++o)
    counts[o] = individual_coverage(inv, o);
  std::vector<std::size_t> order(inv.n_origins());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return counts[a] > counts[b];
                   });
  return order;
}

}  // namespace speedcov
