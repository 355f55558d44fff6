// Copyright 2026 The annealab Authors
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
#include <cstddef>
#include <cstdint>
#include <vector>

namespace annealab {

// Counts of how often each ground-state ordinal was reached. Outcomes that
// did not end in a ground state land in `misses`.
struct HitHistogram {
  std::vector<std::uint64_t> counts;
  std::uint64_t misses = 0;

  explicit HitHistogram(std::size_t n_states = 0) : counts(n_states, 0) {}

  std::uint64_t hits() const noexcept {
    std::uint64_t s = 0;
    for (auto c : counts) s += c;
    return s;
  }
  std::uint64_t total() const noexcept { return hits() + misses; }
  std::uint64_t mode() const noexcept { return counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end()); }
  std::uint64_t least() const noexcept { return counts.empty() ? 0 : *std::min_element(counts.begin(), counts.end()); }

  // Frequency of each state relative to the most frequent one.
  std::vector<double> relative_to_mode() const {
    std::vector<double> out(counts.size(), 0.0);
    const auto m = mode();
    if (m == 0) return out;
    for (std::size_t k = 0; k < counts.size(); ++k) out[k] = static_cast<double>(counts[k]) / static_cast<double>(m);
    return out;
  }

  // Ordinals sorted by descending count (ties by ordinal).
  std::vector<std::size_t> ranking() const {
    std::vector<std::size_t> order(counts.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
    return order;
  }

  HitHistogram& operator+=(const HitHistogram& other) {
    if (counts.size() < other.counts.size()) counts.resize(other.counts.size(), 0);
    for (std::size_t k = 0; k < other.counts.size(); ++k) counts[k] += other.counts[k];
    misses += other.misses;
    return *this;
  }
};

}  // namespace annealab
