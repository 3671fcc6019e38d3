// Copyright 2026 The momentlab developers
//
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

#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace momentlab {

/**
 * Integer partition, canonicalized to non-increasing order on construction.
 * Parts must be strictly positive; duplicates are allowed.
 */
struct Partition {
  std::vector<int> parts;

  Partition() = default;
  explicit Partition(std::vector<int> p) : parts(std::move(p)) {
    for (int x : parts)
      if (x <= 0) throw std::invalid_argument("partition: parts must be positive");
    std::sort(parts.begin(), parts.end(), std::greater<int>());
  }
  Partition(std::initializer_list<int> p) : Partition(std::vector<int>(p)) {}

  int weight() const { return std::accumulate(parts.begin(), parts.end(), 0); }
  int length() const { return static_cast<int>(parts.size()); }

  bool operator==(const Partition &o) const { return parts == o.parts; }
  bool operator<(const Partition &o) const { return parts < o.parts; }
};

/// All partitions of `t`, parts non-increasing.
inline std::vector<Partition> partitions_of(int t) {
  std::vector<Partition> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (remaining == 0) {
      out.emplace_back(Partition{cur});
      return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
      cur.push_back(part);
      rec(remaining - part, part);
      cur.pop_back();
    }
  };
  rec(t, t);
  return out;
}

/// All set partitions of {0,...,k-1}; each partition is a list of blocks.
inline std::vector<std::vector<std::vector<int>>> set_partitions(int k) {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> blocks;
  std::function<void(int)> rec = [&](int elem) {
    if (elem == k) {
      out.push_back(blocks);
      return;
    }
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      blocks[bi].push_back(elem);
      rec(elem + 1);
      blocks[bi].pop_back();
    }
    blocks.push_back({elem});
    rec(elem + 1);
    blocks.pop_back();
  };
  rec(0);
  return out;
}

}  // namespace momentlab
