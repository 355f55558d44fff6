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
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "annealab/errors.hpp"
#include "annealab/format.hpp"
#include "annealab/rng.hpp"
#include "annealab/spin_config.hpp"

namespace annealab {

struct Coupling {
  std::size_t i;
  std::size_t j;
  double J;
  friend bool operator==(const Coupling&, const Coupling&) = default;
};

struct LatticeInfo {
  int L;
  bool periodic;
  friend bool operator==(const LatticeInfo&, const LatticeInfo&) = default;
};

// Target Hamiltonian  H = -sum_<ij> J_ij s_i s_j - h sum_i s_i.
// Immutable after construction; holds a per-site adjacency index so a
// single-flip energy change costs O(degree).
class IsingProblem {
 public:
  struct Neighbor {
    std::size_t site;
    double J;
  };

  IsingProblem(std::size_t n_spins, std::vector<Coupling> couplings, double field_h = 0.0,
               std::optional<LatticeInfo> lattice = std::nullopt)
      : n_(n_spins), couplings_(std::move(couplings)), h_(field_h), lattice_(lattice) {
    if (n_ == 0) throw InputError("IsingProblem: n_spins must be positive");
    // A periodic 2x2 lattice wraps onto its own interior bonds, so repeated
    // pairs are legitimate there and nowhere else.
    const bool allow_repeats = lattice_ && lattice_->L == 2;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto& c : couplings_) {
      if (c.i > c.j) std::swap(c.i, c.j);
      if (c.j >= n_) throw InputError("IsingProblem: coupling site index out of range");
      if (c.i == c.j) throw InputError("IsingProblem: self coupling");
      if (!std::isfinite(c.J)) throw InputError("IsingProblem: non-finite coupling");
      if (!seen.insert({c.i, c.j}).second && !allow_repeats)
        throw InputError("IsingProblem: duplicate coupling (" + std::to_string(c.i) + "," +
                         std::to_string(c.j) + ")");
    }
    if (lattice_) {
      const auto L = static_cast<std::size_t>(lattice_->L);
      if (L * L != n_) throw InputError("IsingProblem: lattice L*L does not match n_spins");
      if (lattice_->periodic && couplings_.size() != 2 * L * L)
        throw InputError("IsingProblem: periodic lattice needs 2*L*L couplings");
    }
    adjacency_.resize(n_);
    for (const auto& c : couplings_) {
      adjacency_[c.i].push_back({c.j, c.J});
      adjacency_[c.j].push_back({c.i, c.J});
    }
    integral_ = std::floor(h_) == h_ &&
                std::all_of(couplings_.begin(), couplings_.end(),
                            [](const Coupling& c) { return std::floor(c.J) == c.J; });
  }

  std::size_t n_spins() const noexcept { return n_; }
  const std::vector<Coupling>& couplings() const noexcept { return couplings_; }
  double field_h() const noexcept { return h_; }
  const std::optional<LatticeInfo>& lattice() const noexcept { return lattice_; }
  const std::vector<Neighbor>& neighbors(std::size_t site) const { return adjacency_[site]; }

  // True when every energy is an integer, so comparisons may be exact.
  bool integral() const noexcept { return integral_; }

  // Energy tolerance for degeneracy decisions.
  double energy_tolerance() const noexcept { return integral_ ? 0.0 : 1e-9; }

 private:
  std::size_t n_;
  std::vector<Coupling> couplings_;
  double h_;
  std::optional<LatticeInfo> lattice_;
  std::vector<std::vector<Neighbor>> adjacency_;
  bool integral_ = true;
};

inline void check_length(const IsingProblem& problem, const SpinConfiguration& config) {
  if (config.size() != problem.n_spins())
    throw InputError("configuration has " + std::to_string(config.size()) + " spins, problem has " +
                     std::to_string(problem.n_spins()));
}

inline double energy(const IsingProblem& problem, const SpinConfiguration& config) {
  check_length(problem, config);
  double e = 0.0;
  for (const auto& c : problem.couplings()) e -= c.J * config.spin(c.i) * config.spin(c.j);
  if (problem.field_h() != 0.0) e -= problem.field_h() * config.magnetization();
  return e;
}

// Sum of J_ij s_j over neighbours plus h; flipping site i changes the energy by 2 s_i * local_field.
inline double local_field(const IsingProblem& problem, const SpinConfiguration& config, std::size_t site) {
  double f = problem.field_h();
  for (const auto& nb : problem.neighbors(site)) f += nb.J * config.spin(nb.site);
  return f;
}

inline double delta_energy(const IsingProblem& problem, const SpinConfiguration& config, std::size_t site) {
  check_length(problem, config);
  if (site >= problem.n_spins()) throw InputError("delta_energy: site out of range");
  return 2.0 * config.spin(site) * local_field(problem, config, site);
}

inline constexpr double kFreeSpinTolerance = 1e-12;

inline int free_spin_count(const IsingProblem& problem, const SpinConfiguration& config) {
  check_length(problem, config);
  int count = 0;
  for (std::size_t i = 0; i < problem.n_spins(); ++i)
    if (std::abs(delta_energy(problem, config, i)) < kFreeSpinTolerance) ++count;
  return count;
}

namespace detail {

// Periodic L x L square lattice, site = y*L + x. For each site the bond to the
// right neighbour then the bond to the neighbour below; the callbacks pick J.
template <class Horizontal, class Vertical>
std::vector<Coupling> square_lattice_bonds(int L, Horizontal&& horizontal, Vertical&& vertical) {
  std::vector<Coupling> bonds;
  bonds.reserve(2 * static_cast<std::size_t>(L) * L);
  for (int y = 0; y < L; ++y) {
    for (int x = 0; x < L; ++x) {
      const auto site = static_cast<std::size_t>(y * L + x);
      bonds.push_back({site, static_cast<std::size_t>(y * L + (x + 1) % L), horizontal(y, x)});
      bonds.push_back({site, static_cast<std::size_t>(((y + 1) % L) * L + x), vertical(y, x)});
    }
  }
  return bonds;
}

}  // namespace detail

// Fully frustrated Villain model: vertical bonds ferromagnetic, horizontal
// bonds ferromagnetic in even rows and antiferromagnetic in odd rows, so every
// plaquette has bond product -1.
inline IsingProblem build_villain(int L) {
  if (L < 2 || L % 2 != 0) throw InputError("build_villain: L must be even and >= 2");
  auto bonds = detail::square_lattice_bonds(
      L, [](int y, int) { return y % 2 == 0 ? 1.0 : -1.0; }, [](int, int) { return 1.0; });
  return IsingProblem(static_cast<std::size_t>(L) * L, std::move(bonds), 0.0, LatticeInfo{L, true});
}

// +-J spin glass: every bond +1 or -1 with probability 1/2.
inline IsingProblem build_pm_j(int L, std::uint64_t seed) {
  if (L < 2) throw InputError("build_pm_j: L must be >= 2");
  Rng rng(derive_seed({seed, 0x706d6aULL}));
  auto draw = [&](int, int) { return rng.coin() ? 1.0 : -1.0; };
  auto bonds = detail::square_lattice_bonds(L, draw, draw);
  return IsingProblem(static_cast<std::size_t>(L) * L, std::move(bonds), 0.0, LatticeInfo{L, true});
}

// Gaussian spin glass: i.i.d. standard normal bonds plus a uniform field h.
inline IsingProblem build_gaussian(int L, double h, std::uint64_t seed) {
  if (L < 2) throw InputError("build_gaussian: L must be >= 2");
  Rng rng(derive_seed({seed, 0x6761757373ULL}));
  auto draw = [&](int, int) { return rng.normal(); };
  auto bonds = detail::square_lattice_bonds(L, draw, draw);
  return IsingProblem(static_cast<std::size_t>(L) * L, std::move(bonds), h, LatticeInfo{L, true});
}

// Five-spin toy instance with six degenerate ground states at E0 = -3:
// a frustrated triangle (0,1,2) whose (0,2) bond is antiferromagnetic, with
// pendant spins 3 on site 1 and 4 on site 2.
inline IsingProblem build_five_spin(double h = 0.0) {
  return IsingProblem(5, {{0, 1, 1.0}, {0, 2, -1.0}, {1, 2, 1.0}, {1, 3, 1.0}, {2, 4, 1.0}}, h);
}

// Plain-text edge list: "n_spins h" then "i j J" per bond. Lattice metadata,
// when present, rides along as a "# lattice L periodic|open" comment.
inline void write_edge_list(std::ostream& out, const IsingProblem& problem) {
  if (problem.lattice())
    out << "# lattice " << problem.lattice()->L << (problem.lattice()->periodic ? " periodic" : " open")
        << '\n';
  out << problem.n_spins() << ' ' << format_real(problem.field_h()) << '\n';
  for (const auto& c : problem.couplings()) out << c.i << ' ' << c.j << ' ' << format_real(c.J) << '\n';
}

inline IsingProblem read_edge_list(std::istream& in) {
  std::optional<LatticeInfo> lattice;
  std::optional<std::pair<std::size_t, double>> header;
  std::vector<Coupling> bonds;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    const std::string where = "edge list line " + std::to_string(line_no);
    if (first[0] == '#') {
      std::string tag, kind;
      int L = 0;
      std::istringstream cs(line.substr(line.find('#') + 1));
      if (cs >> tag >> L >> kind && tag == "lattice") lattice = LatticeInfo{L, kind == "periodic"};
      continue;
    }
    std::vector<std::string> fields{first};
    for (std::string f; ls >> f;) fields.push_back(f);
    if (!header) {
      if (fields.size() != 2) throw InputError(where + ": header must be 'n_spins h'");
      header = {static_cast<std::size_t>(parse_integer(fields[0], where)), parse_real(fields[1], where)};
      continue;
    }
    if (fields.size() != 3) throw InputError(where + ": expected 'i j J'");
    const auto i = parse_integer(fields[0], where), j = parse_integer(fields[1], where);
    if (i < 0 || j < 0) throw InputError(where + ": negative site index");
    bonds.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), parse_real(fields[2], where)});
  }
  if (!header) throw InputError("edge list: missing header");
  return IsingProblem(header->first, std::move(bonds), header->second, lattice);
}

}  // namespace annealab
