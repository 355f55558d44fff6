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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "annealab/enumerate.hpp"
#include "annealab/errors.hpp"
#include "annealab/histogram.hpp"
#include "annealab/parallel.hpp"
#include "annealab/problem.hpp"
#include "annealab/rng.hpp"

namespace annealab {

// Metropolis test for a move whose weight ratio is exp(-x).
inline bool metropolis_accept(double x, Rng& rng) {
  if (x <= 0.0) return true;
  return rng.uniform() < std::exp(-x);
}

inline SpinConfiguration random_configuration(std::size_t n, Rng& rng) {
  SpinConfiguration c(n);
  for (std::size_t i = 0; i < n; ++i) c.set_up(i, rng.coin());
  return c;
}

// One raster pass of single-spin Metropolis at temperature T; T <= 0 accepts
// exactly the moves with dE <= 0. `current_energy` is kept in step.
// Returns the number of accepted flips.
inline std::size_t metropolis_sweep(const IsingProblem& problem, SpinConfiguration& config, double T, Rng& rng,
                                    double& current_energy) {
  std::size_t accepted = 0;
  const std::size_t n = problem.n_spins();
  const double beta = T > 0.0 ? 1.0 / T : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dE = 2.0 * config.spin(i) * local_field(problem, config, i);
    const bool accept = T > 0.0 ? metropolis_accept(beta * dE, rng) : dE <= 0.0;
    if (accept) {
      config.flip(i);
      current_energy += dE;
      ++accepted;
    }
  }
  return accepted;
}

// T(t) = (tau - t)/t over sweeps t = t_start .. tau-1, then one T = 0 sweep.
struct SaSchedule {
  std::int64_t tau = 1000;
  std::int64_t t_start = 1;

  double temperature(std::int64_t t) const { return static_cast<double>(tau - t) / static_cast<double>(t); }

  void validate() const {
    if (tau < 2) throw InputError("SaSchedule: tau must be >= 2");
    if (t_start < 1 || t_start > tau - 1) throw InputError("SaSchedule: t_start must lie in [1, tau-1]");
  }
};

struct SaResult {
  SpinConfiguration config;
  double energy = 0.0;
  // (sweep, energy) after sweeps 1, 10, 100, ... and after the final T = 0 sweep (sweep = tau).
  std::vector<std::pair<std::int64_t, double>> trace;
  std::uint64_t seed = 0;
};

inline SaResult run_sa(const IsingProblem& problem, const SaSchedule& schedule, std::uint64_t seed) {
  schedule.validate();
  Rng rng(seed);
  SaResult result;
  result.seed = seed;
  result.config = random_configuration(problem.n_spins(), rng);
  double e = energy(problem, result.config);
  std::int64_t next_decade = 1;
  while (next_decade < schedule.t_start) next_decade *= 10;
  for (std::int64_t t = schedule.t_start; t < schedule.tau; ++t) {
    metropolis_sweep(problem, result.config, schedule.temperature(t), rng, e);
    if (t == next_decade) {
      result.trace.emplace_back(t, e);
      next_decade *= 10;
    }
  }
  metropolis_sweep(problem, result.config, 0.0, rng, e);
  result.trace.emplace_back(schedule.tau, e);
  // Recompute to drop accumulated round-off for real couplings.
  result.energy = energy(problem, result.config);
  return result;
}

inline bool is_ground_energy(double e, const GroundStateSet& gs, const IsingProblem& problem) {
  return std::abs(e - gs.e0()) <= problem.energy_tolerance();
}

// Independent SA runs with seeds derive_seed({seed, run}); each run scores one
// hit for the ground state it ends in, or a miss.
inline HitHistogram gs_hit_histogram(const IsingProblem& problem, const GroundStateSet& gs, const SaSchedule& schedule,
                                     std::size_t n_runs, std::uint64_t seed) {
  if (gs.empty()) throw InputError("gs_hit_histogram: empty ground-state set");
  std::vector<std::optional<std::size_t>> outcome(n_runs);
  parallel_for(n_runs, [&](std::size_t run) {
    const auto r = run_sa(problem, schedule, derive_seed({seed, run}));
    if (is_ground_energy(r.energy, gs, problem)) outcome[run] = gs.lookup(r.config);
  });
  HitHistogram hist(gs.size());
  for (const auto& o : outcome) {
    if (o) ++hist.counts[*o];
    else ++hist.misses;
  }
  return hist;
}

}  // namespace annealab
