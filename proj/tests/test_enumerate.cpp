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

#include <gtest/gtest.h>

#include <chrono>
#include <set>
#include <sstream>

#include "annealab/enumerate.hpp"
#include "annealab/rng.hpp"

using namespace annealab;

namespace {

// Oracle: plain loop over every bit pattern, energy from the bond list.
struct BruteMinimum {
  double e0 = 1e300;
  std::set<SpinConfiguration> states;
};

BruteMinimum brute_minimum(const IsingProblem& p, double tol = 1e-9) {
  BruteMinimum out;
  const std::size_t n = p.n_spins();
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
    const auto c = SpinConfiguration::from_bits(n, k);
    double e = 0.0;
    for (const auto& b : p.couplings()) e -= b.J * c.spin(b.i) * c.spin(b.j);
    e -= p.field_h() * c.magnetization();
    if (e < out.e0 - tol) {
      out.e0 = e;
      out.states.clear();
    }
    if (std::abs(e - out.e0) <= tol) out.states.insert(c);
  }
  return out;
}

std::set<SpinConfiguration> as_set(const GroundStateSet& gs) { return {gs.states().begin(), gs.states().end()}; }

std::set<SpinConfiguration> canonical(const std::set<SpinConfiguration>& s) {
  std::set<SpinConfiguration> out;
  for (const auto& c : s) out.insert(canonical_form(c));
  return out;
}

}  // namespace

TEST(EnumerateExhaustive, FiveSpinDegeneracy) {
  const auto p = build_five_spin();
  const auto full = enumerate_exhaustive(p, false);
  const auto reduced = enumerate_exhaustive(p, true);
  EXPECT_EQ(full.e0(), -3.0);
  EXPECT_EQ(full.size(), 6U);
  EXPECT_EQ(reduced.size(), 3U);
  const auto oracle = brute_minimum(p);
  EXPECT_EQ(oracle.e0, -3.0);
  EXPECT_EQ(as_set(full), oracle.states);
  EXPECT_EQ(as_set(reduced), canonical(oracle.states));
}

TEST(EnumerateExhaustive, FerromagneticChainIsUnique) {
  IsingProblem chain(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  const auto gs = enumerate_exhaustive(chain, true);
  EXPECT_EQ(gs.e0(), -2.0);
  ASSERT_EQ(gs.size(), 1U);
  EXPECT_EQ(gs[0], SpinConfiguration::all_up(3));
}

TEST(EnumerateExhaustive, VillainL4) {
  const auto gs = enumerate_exhaustive(build_villain(4), true);
  EXPECT_EQ(gs.e0(), -16.0);
  EXPECT_EQ(gs.size(), 136U);
  EXPECT_EQ(enumerate_exhaustive(build_villain(4), false).size(), 272U);
}

TEST(EnumerateExhaustive, ReversalRejectedUnderField) {
  EXPECT_THROW(enumerate_exhaustive(build_five_spin(0.1), true), InputError);
  EXPECT_NO_THROW(enumerate_exhaustive(build_five_spin(0.1), false));
}

TEST(EnumerateExhaustive, TooManySpins) { EXPECT_THROW(enumerate_exhaustive(build_villain(6)), CapabilityError); }

TEST(EnumerateLattice, AgreesWithOracleOnSmallLattices) {
  for (int L : {2, 3, 4}) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      std::vector<IsingProblem> problems{build_pm_j(L, seed), build_gaussian(L, 0.0, seed)};
      if (L % 2 == 0 && seed == 0) problems.push_back(build_villain(L));
      for (const auto& p : problems) {
        const auto oracle = brute_minimum(p);
        const auto full = enumerate_lattice(p, std::nullopt, false);
        const auto reduced = enumerate_lattice(p, std::nullopt, true);
        EXPECT_NEAR(full.e0(), oracle.e0, 1e-9) << "L=" << L << " seed=" << seed;
        EXPECT_EQ(as_set(full), oracle.states) << "L=" << L << " seed=" << seed;
        EXPECT_EQ(as_set(reduced), canonical(oracle.states));
        EXPECT_EQ(as_set(enumerate_exhaustive(p, true)), as_set(reduced));
      }
    }
  }
}

TEST(EnumerateLattice, AgreesWithOracleUnderField) {
  for (int L : {3, 4}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto p = build_gaussian(L, 0.1, seed);
      const auto oracle = brute_minimum(p);
      const auto gs = enumerate_lattice(p, std::nullopt, false);
      EXPECT_NEAR(gs.e0(), oracle.e0, 1e-9);
      EXPECT_EQ(as_set(gs), oracle.states);
    }
  }
}

TEST(EnumerateLattice, VillainL2) {
  const auto oracle = brute_minimum(build_villain(2));
  const auto gs = enumerate_lattice(build_villain(2), std::nullopt, false);
  EXPECT_EQ(gs.e0(), -4.0);
  EXPECT_EQ(as_set(gs), oracle.states);
}

TEST(EnumerateLattice, VillainL6Count) {
  const auto start = std::chrono::steady_clock::now();
  const auto gs = enumerate_lattice(build_villain(6));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(gs.e0(), -36.0);
  EXPECT_EQ(gs.size(), 45088U);
  EXPECT_LT(seconds, 600.0);
}

TEST(EnumerateLattice, RequiresLattice) {
  EXPECT_THROW(enumerate_lattice(build_five_spin()), InputError);
  EXPECT_THROW(enumerate_lattice(build_pm_j(9, 0)), CapabilityError);
}

TEST(EnumerateLattice, HintBelowMinimum) {
  EXPECT_THROW(enumerate_lattice(build_villain(4), -17.0), HintError);
  const auto hinted = enumerate_lattice(build_villain(4), -16.0);
  EXPECT_EQ(hinted.size(), 136U);
}

TEST(GroundStateSet, LookupProperties) {
  const auto gs = enumerate_lattice(build_villain(4));
  for (std::size_t k = 0; k < gs.size(); ++k) {
    EXPECT_EQ(gs.lookup(gs[k]), k);
    EXPECT_EQ(gs.lookup(gs[k].global_flip()), k);
  }
  auto excited = gs[0];
  excited.flip(0);
  excited.flip(1);
  excited.flip(5);
  ASSERT_GT(energy(build_villain(4), excited), -16.0);
  EXPECT_FALSE(gs.lookup(excited).has_value());
  EXPECT_FALSE(gs.lookup(SpinConfiguration(3)).has_value());
}

TEST(GroundStateSet, FullSetClosedUnderReversal) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto gs = enumerate_lattice(build_pm_j(4, seed), std::nullopt, false);
    EXPECT_EQ(gs.size() % 2, 0U);
    for (const auto& s : gs.states()) EXPECT_TRUE(gs.lookup(s.global_flip()).has_value());
  }
}

TEST(GroundStateSet, RejectsNonCanonicalReducedState) {
  EXPECT_THROW(GroundStateSet(3, 0.0, {SpinConfiguration(3)}, true), InputError);
}

TEST(GroundStateSet, TextRoundTrip) {
  for (const auto& gs : {enumerate_lattice(build_villain(4)), enumerate_exhaustive(build_five_spin(0.1), false),
                         enumerate_lattice(build_gaussian(4, 0.0, 1))}) {
    std::stringstream ss;
    write_ground_states(ss, gs);
    const auto back = read_ground_states(ss);
    EXPECT_EQ(back.n_spins(), gs.n_spins());
    EXPECT_EQ(back.e0(), gs.e0());
    EXPECT_EQ(back.modulo_reversal(), gs.modulo_reversal());
    EXPECT_EQ(back.states(), gs.states());
  }
  std::stringstream truncated("5 -3 2 1\n1f\n");
  EXPECT_THROW(read_ground_states(truncated), InputError);
}
