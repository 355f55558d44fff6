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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "annealab/errors.hpp"

namespace annealab {

// Bit-packed assignment of N Ising spins. Bit i set means spin i is up (+1).
// Ordering compares the bit pattern as an unsigned integer with spin 0 as
// the least significant bit.
class SpinConfiguration {
 public:
  SpinConfiguration() = default;
  explicit SpinConfiguration(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  static SpinConfiguration all_down(std::size_t n) { return SpinConfiguration(n); }
  static SpinConfiguration all_up(std::size_t n) {
    SpinConfiguration c(n);
    for (auto& w : c.words_) w = ~std::uint64_t{0};
    c.clear_padding();
    return c;
  }
  static SpinConfiguration from_bits(std::size_t n, std::uint64_t bits) {
    if (n > 64) throw InputError("from_bits: more than 64 spins");
    SpinConfiguration c(n);
    if (n > 0) c.words_[0] = bits;
    c.clear_padding();
    return c;
  }
  static SpinConfiguration from_spins(const std::vector<int>& spins) {
    SpinConfiguration c(spins.size());
    for (std::size_t i = 0; i < spins.size(); ++i) {
      if (spins[i] != 1 && spins[i] != -1) throw InputError("from_spins: spin values must be +1 or -1");
      if (spins[i] == 1) c.set_up(i, true);
    }
    return c;
  }

  std::size_t size() const noexcept { return n_; }

  bool up(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  int spin(std::size_t i) const noexcept { return up(i) ? 1 : -1; }

  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  void set_up(std::size_t i, bool value) noexcept {
    const auto mask = std::uint64_t{1} << (i & 63);
    if (value) words_[i >> 6] |= mask;
    else words_[i >> 6] &= ~mask;
  }

  SpinConfiguration global_flip() const {
    SpinConfiguration c = *this;
    for (auto& w : c.words_) w = ~w;
    c.clear_padding();
    return c;
  }

  // Only valid for n <= 64; this is the basis index used by exact dynamics.
  std::uint64_t to_bits() const noexcept { return words_.empty() ? 0 : words_[0]; }

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  int magnetization() const noexcept {
    int up_count = 0;
    for (auto w : words_) up_count += __builtin_popcountll(w);
    return 2 * up_count - static_cast<int>(n_);
  }

  // Most significant nibble first, ceil(n/4) digits.
  std::string to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    const std::size_t n_digits = n_ == 0 ? 1 : (n_ + 3) / 4;
    std::string out(n_digits, '0');
    for (std::size_t d = 0; d < n_digits; ++d) {
      unsigned nibble = 0;
      for (std::size_t b = 0; b < 4; ++b) {
        const std::size_t i = 4 * d + b;
        if (i < n_ && up(i)) nibble |= 1U << b;
      }
      out[n_digits - 1 - d] = digits[nibble];
    }
    return out;
  }

  static SpinConfiguration from_hex(std::size_t n, std::string_view hex) {
    SpinConfiguration c(n);
    std::size_t d = 0;
    for (auto it = hex.rbegin(); it != hex.rend(); ++it, ++d) {
      const char ch = *it;
      unsigned nibble;
      if (ch >= '0' && ch <= '9') nibble = ch - '0';
      else if (ch >= 'a' && ch <= 'f') nibble = ch - 'a' + 10;
      else if (ch >= 'A' && ch <= 'F') nibble = ch - 'A' + 10;
      else throw InputError("from_hex: invalid digit '" + std::string(1, ch) + "'");
      for (std::size_t b = 0; b < 4; ++b) {
        if (!((nibble >> b) & 1U)) continue;
        const std::size_t i = 4 * d + b;
        if (i >= n) throw InputError("from_hex: pattern has bits beyond n_spins");
        c.set_up(i, true);
      }
    }
    return c;
  }

  // "+" / "-" per site, site 0 first.
  std::string to_string() const {
    std::string s(n_, '-');
    for (std::size_t i = 0; i < n_; ++i)
      if (up(i)) s[i] = '+';
    return s;
  }

  friend bool operator==(const SpinConfiguration&, const SpinConfiguration&) = default;
  friend std::strong_ordering operator<=>(const SpinConfiguration& a, const SpinConfiguration& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    for (std::size_t w = a.words_.size(); w-- > 0;)
      if (auto c = a.words_[w] <=> b.words_[w]; c != 0) return c;
    return std::strong_ordering::equal;
  }

 private:
  void clear_padding() noexcept {
    if (n_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

// Representative of {config, global_flip(config)}: the member with spin 0 up.
// The two members differ at every site, so this is the lexicographic minimum
// under the "+ before -" site-by-site order.
inline SpinConfiguration canonical_form(const SpinConfiguration& config) {
  if (config.size() == 0 || config.up(0)) return config;
  return config.global_flip();
}

struct SpinConfigurationHash {
  std::size_t operator()(const SpinConfiguration& c) const noexcept {
    std::uint64_t h = c.size();
    for (auto w : c.words()) h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace annealab
