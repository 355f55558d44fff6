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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "annealab/errors.hpp"
#include "annealab/format.hpp"
#include "annealab/problem.hpp"
#include "annealab/spin_config.hpp"

namespace annealab {

// All degenerate ground states of a problem, sorted by bit pattern so that
// ordinals are stable. With modulo_reversal each reversal pair is stored once
// as its canonical form.
class GroundStateSet {
 public:
  GroundStateSet() = default;
  GroundStateSet(std::size_t n_spins, double e0, std::vector<SpinConfiguration> states, bool modulo_reversal)
      : n_(n_spins), e0_(e0), states_(std::move(states)), modulo_reversal_(modulo_reversal) {
    std::sort(states_.begin(), states_.end());
    states_.erase(std::unique(states_.begin(), states_.end()), states_.end());
    index_.reserve(states_.size());
    for (std::size_t k = 0; k < states_.size(); ++k) {
      if (states_[k].size() != n_) throw InputError("GroundStateSet: state length mismatch");
      if (modulo_reversal_ && canonical_form(states_[k]) != states_[k])
        throw InputError("GroundStateSet: non-canonical state in a reversal-reduced set");
      index_.emplace(states_[k], k);
    }
  }

  std::size_t n_spins() const noexcept { return n_; }
  double e0() const noexcept { return e0_; }
  bool modulo_reversal() const noexcept { return modulo_reversal_; }
  std::size_t size() const noexcept { return states_.size(); }
  bool empty() const noexcept { return states_.empty(); }
  const std::vector<SpinConfiguration>& states() const noexcept { return states_; }
  const SpinConfiguration& operator[](std::size_t ordinal) const { return states_.at(ordinal); }

  std::optional<std::size_t> lookup(const SpinConfiguration& config) const {
    if (config.size() != n_) return std::nullopt;
    auto it = index_.find(modulo_reversal_ ? canonical_form(config) : config);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::size_t n_ = 0;
  double e0_ = 0.0;
  std::vector<SpinConfiguration> states_;
  bool modulo_reversal_ = true;
  std::unordered_map<SpinConfiguration, std::size_t, SpinConfigurationHash> index_;
};

inline std::optional<std::size_t> lookup(const GroundStateSet& gs, const SpinConfiguration& config) {
  return gs.lookup(config);
}

namespace detail {

inline void check_reversal_request(const IsingProblem& problem, bool modulo_reversal) {
  if (modulo_reversal && problem.field_h() != 0.0)
    throw InputError("modulo_reversal requires field_h = 0 (reversal is not a symmetry otherwise)");
}

// Collects configurations within tolerance of the running minimum.
class MinimumCollector {
 public:
  explicit MinimumCollector(double tol) : tol_(tol) {}

  void offer(double e, const SpinConfiguration& c) {
    if (e < best_ - tol_) {
      best_ = e;
      keep_.clear();
    }
    if (e <= best_ + tol_) {
      keep_.push_back({e, c});
      best_ = std::min(best_, e);
    }
  }

  double best() const noexcept { return best_; }

  std::vector<SpinConfiguration> take() {
    std::vector<SpinConfiguration> out;
    for (auto& [e, c] : keep_)
      if (e <= best_ + tol_) out.push_back(std::move(c));
    return out;
  }

 private:
  double tol_;
  double best_ = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, SpinConfiguration>> keep_;
};

}  // namespace detail

inline constexpr std::size_t kMaxExhaustiveSpins = 24;

// Scans every configuration in Gray-code order (site 0 pinned up when
// reducing by reversal). Energies are tracked incrementally and recomputed
// exactly for the survivors.
inline GroundStateSet enumerate_exhaustive(const IsingProblem& problem, bool modulo_reversal = true) {
  const std::size_t n = problem.n_spins();
  if (n > kMaxExhaustiveSpins)
    throw CapabilityError("enumerate_exhaustive: " + std::to_string(n) + " spins exceeds limit of " +
                          std::to_string(kMaxExhaustiveSpins));
  detail::check_reversal_request(problem, modulo_reversal);

  const std::size_t first_free = modulo_reversal ? 1 : 0;
  const std::size_t free_bits = n - first_free;
  SpinConfiguration config = modulo_reversal ? SpinConfiguration::from_bits(n, 1) : SpinConfiguration(n);
  double e = energy(problem, config);
  // Looser than the final tolerance: incremental sums drift for real couplings.
  detail::MinimumCollector collector(problem.integral() ? 0.0 : 1e-6);
  collector.offer(e, config);
  const std::uint64_t count = std::uint64_t{1} << free_bits;
  for (std::uint64_t g = 1; g < count; ++g) {
    const auto site = first_free + static_cast<std::size_t>(__builtin_ctzll(g));
    e += delta_energy(problem, config, site);
    config.flip(site);
    collector.offer(e, config);
  }

  auto candidates = collector.take();
  double e0 = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) e0 = std::min(e0, energy(problem, c));
  std::vector<SpinConfiguration> states;
  for (auto& c : candidates)
    if (energy(problem, c) <= e0 + problem.energy_tolerance()) states.push_back(std::move(c));
  return GroundStateSet(n, e0, std::move(states), modulo_reversal);
}

inline constexpr int kMaxLatticeL = 8;

// Row-by-row enumeration for L x L lattices (rows of L sites, site = y*L + x).
// For each choice of the first row, a backward pass gives the exact optimal
// completion energy of every later row pattern; a depth-first sweep then only
// follows rows whose partial energy plus optimal completion stays within the
// target, reconstructing every ground state without wasted branches.
// Couplings may only join sites in the same row or in cyclically adjacent rows.
class LatticeEnumerator {
 public:
  explicit LatticeEnumerator(const IsingProblem& problem) : problem_(problem) {
    if (!problem.lattice()) throw InputError("enumerate_lattice: problem has no lattice metadata");
    L_ = problem.lattice()->L;
    if (L_ < 2 || L_ > kMaxLatticeL)
      throw CapabilityError("enumerate_lattice: L=" + std::to_string(L_) + " outside [2," +
                            std::to_string(kMaxLatticeL) + "]");
    patterns_ = std::size_t{1} << L_;
    build_tables();
  }

  GroundStateSet run(std::optional<double> e0_hint, bool modulo_reversal) {
    detail::check_reversal_request(problem_, modulo_reversal);
    const double tol = problem_.energy_tolerance();
    const std::size_t first_row_step = modulo_reversal ? 2 : 1;  // site 0 is bit 0 of row 0
    const std::size_t first_row_begin = modulo_reversal ? 1 : 0;

    double target;
    if (e0_hint) {
      target = *e0_hint;
    } else {
      target = std::numeric_limits<double>::infinity();
      for (std::size_t r0 = first_row_begin; r0 < patterns_; r0 += first_row_step) {
        backward(r0);
        target = std::min(target, intra_[0][r0] + to_go_[0][r0]);
      }
    }

    detail::MinimumCollector collector(problem_.integral() ? 0.0 : 1e-6);
    std::vector<std::size_t> rows(L_);
    for (std::size_t r0 = first_row_begin; r0 < patterns_; r0 += first_row_step) {
      backward(r0);
      if (intra_[0][r0] + to_go_[0][r0] > target + tol) continue;
      rows[0] = r0;
      descend(1, intra_[0][r0], target, tol, rows, collector);
    }
    auto candidates = collector.take();
    if (candidates.empty())
      throw HintError("enumerate_lattice: no configuration reaches energy target " + format_real(target));
    double e0 = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) e0 = std::min(e0, energy(problem_, c));
    std::vector<SpinConfiguration> states;
    for (auto& c : candidates)
      if (energy(problem_, c) <= e0 + tol) states.push_back(std::move(c));
    return GroundStateSet(problem_.n_spins(), e0, std::move(states), modulo_reversal);
  }

 private:
  int row_of(std::size_t site) const { return static_cast<int>(site) / L_; }
  int col_of(std::size_t site) const { return static_cast<int>(site) % L_; }
  static int bit_spin(std::size_t pattern, int x) { return ((pattern >> x) & 1U) ? 1 : -1; }

  void build_tables() {
    const auto L = static_cast<std::size_t>(L_);
    intra_.assign(L, std::vector<double>(patterns_, 0.0));
    inter_.assign(L, std::vector<double>(patterns_ * patterns_, 0.0));
    std::vector<std::vector<Coupling>> intra_bonds(L), inter_bonds(L);
    for (const auto& c : problem_.couplings()) {
      const int ri = row_of(c.i), rj = row_of(c.j);
      if (ri == rj) {
        intra_bonds[ri].push_back(c);
      } else if ((ri + 1) % L_ == rj) {
        inter_bonds[ri].push_back(c);
      } else if ((rj + 1) % L_ == ri) {
        inter_bonds[rj].push_back({c.j, c.i, c.J});
      } else {
        throw CapabilityError("enumerate_lattice: coupling joins non-adjacent rows");
      }
    }
    const double h = problem_.field_h();
    for (std::size_t y = 0; y < L; ++y) {
      for (std::size_t p = 0; p < patterns_; ++p) {
        double e = 0.0;
        for (const auto& c : intra_bonds[y]) e -= c.J * bit_spin(p, col_of(c.i)) * bit_spin(p, col_of(c.j));
        if (h != 0.0) e -= h * (2.0 * __builtin_popcountll(p) - L_);
        intra_[y][p] = e;
      }
      // Bonds in inter_bonds[y] run from row y (first site) to row y+1 (second site).
      for (std::size_t p = 0; p < patterns_; ++p) {
        for (std::size_t q = 0; q < patterns_; ++q) {
          double e = 0.0;
          for (const auto& c : inter_bonds[y]) e -= c.J * bit_spin(p, col_of(c.i)) * bit_spin(q, col_of(c.j));
          inter_[y][p * patterns_ + q] = e;
        }
      }
    }
  }

  // to_go_[y][p]: minimum energy of rows y+1..L-1 plus all row couplings from
  // row y onward (including the wrap to row 0 = r0), given row y = p.
  void backward(std::size_t r0) {
    const auto L = static_cast<std::size_t>(L_);
    to_go_.assign(L, std::vector<double>(patterns_, 0.0));
    for (std::size_t p = 0; p < patterns_; ++p) to_go_[L - 1][p] = inter_[L - 1][p * patterns_ + r0];
    for (std::size_t y = L - 1; y-- > 0;) {
      for (std::size_t p = 0; p < patterns_; ++p) {
        double best = std::numeric_limits<double>::infinity();
        const double* row = &inter_[y][p * patterns_];
        for (std::size_t q = 0; q < patterns_; ++q) best = std::min(best, row[q] + intra_[y + 1][q] + to_go_[y + 1][q]);
        to_go_[y][p] = best;
      }
    }
  }

  void descend(std::size_t y, double partial, double target, double tol, std::vector<std::size_t>& rows,
               detail::MinimumCollector& collector) {
    const auto L = static_cast<std::size_t>(L_);
    if (y == L) {
      const double e = partial + inter_[L - 1][rows[L - 1] * patterns_ + rows[0]];
      SpinConfiguration c(problem_.n_spins());
      for (std::size_t r = 0; r < L; ++r)
        for (int x = 0; x < L_; ++x)
          if ((rows[r] >> x) & 1U) c.set_up(r * L + x, true);
      collector.offer(e, c);
      return;
    }
    const double* link = &inter_[y - 1][rows[y - 1] * patterns_];
    for (std::size_t q = 0; q < patterns_; ++q) {
      const double next = partial + link[q] + intra_[y][q];
      if (next + to_go_[y][q] > target + tol) continue;
      rows[y] = q;
      descend(y + 1, next, target, tol, rows, collector);
    }
  }

  const IsingProblem& problem_;
  int L_ = 0;
  std::size_t patterns_ = 0;
  std::vector<std::vector<double>> intra_;
  std::vector<std::vector<double>> inter_;
  std::vector<std::vector<double>> to_go_;
};

// e0_hint, when given, replaces the computed minimum as the pruning target.
// A hint below the true minimum leaves nothing to collect and raises HintError.
inline GroundStateSet enumerate_lattice(const IsingProblem& problem, std::optional<double> e0_hint = std::nullopt,
                                        bool modulo_reversal = true) {
  return LatticeEnumerator(problem).run(e0_hint, modulo_reversal);
}

// Text form: "n_spins e0 count modulo_reversal" then one hex pattern per line.
inline void write_ground_states(std::ostream& out, const GroundStateSet& gs) {
  out << gs.n_spins() << ' ' << format_real(gs.e0()) << ' ' << gs.size() << ' ' << (gs.modulo_reversal() ? 1 : 0)
      << '\n';
  for (const auto& s : gs.states()) out << s.to_hex() << '\n';
}

inline GroundStateSet read_ground_states(std::istream& in) {
  std::string n_text, e0_text, count_text, rev_text;
  if (!(in >> n_text >> e0_text >> count_text >> rev_text)) throw InputError("ground-state file: bad header");
  const auto n = parse_integer(n_text, "ground-state header n_spins");
  const double e0 = parse_real(e0_text, "ground-state header e0");
  const auto count = parse_integer(count_text, "ground-state header count");
  const auto rev = parse_integer(rev_text, "ground-state header modulo_reversal");
  if (n <= 0 || count < 0 || (rev != 0 && rev != 1)) throw InputError("ground-state file: bad header values");
  std::vector<SpinConfiguration> states;
  std::string hex;
  for (long long k = 0; k < count; ++k) {
    if (!(in >> hex)) throw InputError("ground-state file: fewer patterns than declared");
    states.push_back(SpinConfiguration::from_hex(static_cast<std::size_t>(n), hex));
  }
  GroundStateSet gs(static_cast<std::size_t>(n), e0, std::move(states), rev == 1);
  if (static_cast<long long>(gs.size()) != count) throw InputError("ground-state file: duplicate patterns");
  return gs;
}

}  // namespace annealab
