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
#include <limits>
#include <optional>
#include <vector>

#include "annealab/enumerate.hpp"
#include "annealab/errors.hpp"
#include "annealab/histogram.hpp"
#include "annealab/parallel.hpp"
#include "annealab/problem.hpp"
#include "annealab/rng.hpp"
#include "annealab/sa.hpp"

namespace annealab {

// M replicas of the classical system, periodic along the imaginary-time axis.
struct TrotterState {
  std::vector<SpinConfiguration> slices;

  TrotterState() = default;
  TrotterState(std::size_t m, std::size_t n_spins) : slices(m, SpinConfiguration(n_spins)) {
    if (m < 2) throw InputError("TrotterState: need at least 2 slices");
  }

  std::size_t m() const noexcept { return slices.size(); }
  std::size_t n_spins() const noexcept { return slices.empty() ? 0 : slices.front().size(); }

  static TrotterState random(std::size_t m, std::size_t n_spins, Rng& rng) {
    TrotterState s(m, n_spins);
    for (auto& slice : s.slices) slice = random_configuration(n_spins, rng);
    return s;
  }
};

// Inter-slice coupling K = 1/2 ln coth(gamma / (m T)); +infinity for gamma <= 0.
inline double trotter_coupling(double gamma, std::size_t m, double temperature) {
  if (!(gamma > 0.0)) return std::numeric_limits<double>::infinity();
  const double x = gamma / (static_cast<double>(m) * temperature);
  // ln tanh(x) = ln(1 - e^{-2x}) - ln(1 + e^{-2x}); the first term needs
  // expm1 for small x and log1p for large x.
  const double e = std::exp(-2.0 * x);
  const double log_one_minus = x < 0.5 ? std::log(-std::expm1(-2.0 * x)) : std::log1p(-e);
  return -0.5 * (log_one_minus - std::log1p(e));
}

// One Metropolis pass over all (slice, site) pairs, slice-major raster order.
// The weight of a flip is exp(-[dE/(mT) + K dE_trotter]) with
// dE_trotter = 2 s (s_prev + s_next). Returns the number of accepted flips.
inline std::size_t mc_sweep(TrotterState& state, const IsingProblem& problem, double gamma, double temperature,
                            Rng& rng) {
  const std::size_t m = state.m();
  const std::size_t n = problem.n_spins();
  if (state.n_spins() != n) throw InputError("mc_sweep: slice length does not match problem");
  if (!(temperature > 0.0)) throw InputError("mc_sweep: temperature must be positive");
  const double K = trotter_coupling(gamma, m, temperature);
  const bool locked = std::isinf(K);
  const double classical_factor = 1.0 / (static_cast<double>(m) * temperature);
  std::size_t accepted = 0;
  for (std::size_t k = 0; k < m; ++k) {
    SpinConfiguration& slice = state.slices[k];
    const SpinConfiguration& prev = state.slices[(k + m - 1) % m];
    const SpinConfiguration& next = state.slices[(k + 1) % m];
    for (std::size_t i = 0; i < n; ++i) {
      const int s = slice.spin(i);
      const double dE = 2.0 * s * local_field(problem, slice, i);
      const int dT = 2 * s * (prev.spin(i) + next.spin(i));
      bool accept;
      if (locked && dT != 0) accept = dT < 0;
      else accept = metropolis_accept(classical_factor * dE + (locked ? 0.0 : K * dT), rng);
      if (accept) {
        slice.flip(i);
        ++accepted;
      }
    }
  }
  return accepted;
}

struct QmcSchedule {
  std::size_t m = 16;
  std::int64_t pre_anneal_steps = 100;
  std::int64_t tau = 300;
  std::optional<double> gamma_pre;  // defaults to gamma(1) = tau - 1
  bool final_quench = true;

  // Fixed at 1/M.
  double temperature() const noexcept { return 1.0 / static_cast<double>(m); }
  double gamma(std::int64_t t) const noexcept { return static_cast<double>(tau - t) / static_cast<double>(t); }
  double pre_anneal_gamma() const noexcept { return gamma_pre.value_or(static_cast<double>(tau - 1)); }
  // Pre-annealing temperature P/(M t) for t = 1..P, ending at 1/M.
  double pre_anneal_temperature(std::int64_t t) const noexcept {
    return static_cast<double>(pre_anneal_steps) / (static_cast<double>(m) * static_cast<double>(t));
  }

  void validate() const {
    if (m < 2) throw InputError("QmcSchedule: m must be >= 2");
    if (tau < 1) throw InputError("QmcSchedule: tau must be >= 1");
    if (pre_anneal_steps < 0) throw InputError("QmcSchedule: pre_anneal_steps must be >= 0");
    if (gamma_pre && *gamma_pre < 0.0) throw InputError("QmcSchedule: gamma_pre must be >= 0");
  }
};

struct RunResult {
  std::vector<double> slice_energies;
  double average_energy = 0.0;
  double best_energy = 0.0;
  std::vector<std::optional<std::size_t>> hits;  // per slice; empty when no ground-state set was given
  std::uint64_t seed = 0;
};

// Path-integral annealing: random start, temperature pre-annealing at fixed
// field, field annealing gamma(t) = (tau - t)/t for t = 1..tau-1 at T = 1/M,
// then an optional gamma = 0 sweep before the per-slice measurement.
inline RunResult run_qa(const IsingProblem& problem, const QmcSchedule& schedule, const GroundStateSet* gs,
                        std::uint64_t seed) {
  schedule.validate();
  Rng rng(seed);
  TrotterState state = TrotterState::random(schedule.m, problem.n_spins(), rng);
  for (std::int64_t t = 1; t <= schedule.pre_anneal_steps; ++t)
    mc_sweep(state, problem, schedule.pre_anneal_gamma(), schedule.pre_anneal_temperature(t), rng);
  const double T = schedule.temperature();
  for (std::int64_t t = 1; t < schedule.tau; ++t) mc_sweep(state, problem, schedule.gamma(t), T, rng);
  if (schedule.final_quench) mc_sweep(state, problem, 0.0, T, rng);

  RunResult result;
  result.seed = seed;
  result.slice_energies.reserve(schedule.m);
  double sum = 0.0;
  result.best_energy = std::numeric_limits<double>::infinity();
  for (const auto& slice : state.slices) {
    const double e = energy(problem, slice);
    result.slice_energies.push_back(e);
    sum += e;
    result.best_energy = std::min(result.best_energy, e);
  }
  result.average_energy = sum / static_cast<double>(schedule.m);
  if (gs) {
    result.hits.reserve(schedule.m);
    for (std::size_t k = 0; k < schedule.m; ++k) {
      std::optional<std::size_t> hit;
      if (is_ground_energy(result.slice_energies[k], *gs, problem)) hit = gs->lookup(state.slices[k]);
      result.hits.push_back(hit);
    }
  }
  return result;
}

inline RunResult run_qa(const IsingProblem& problem, const QmcSchedule& schedule,
                        const std::optional<GroundStateSet>& gs, std::uint64_t seed) {
  return run_qa(problem, schedule, gs ? &*gs : nullptr, seed);
}

// Every Trotter slice of every run is one sample: a hit for its ground-state
// ordinal or a miss. Run seeds are derive_seed({seed, run}).
inline HitHistogram qmc_hit_histogram(const IsingProblem& problem, const GroundStateSet& gs,
                                      const QmcSchedule& schedule, std::size_t n_runs, std::uint64_t seed) {
  if (gs.empty()) throw InputError("qmc_hit_histogram: empty ground-state set");
  std::vector<HitHistogram> per_run(n_runs);
  parallel_for(n_runs, [&](std::size_t run) {
    const auto r = run_qa(problem, schedule, &gs, derive_seed({seed, run}));
    HitHistogram h(gs.size());
    for (const auto& hit : r.hits) {
      if (hit) ++h.counts[*hit];
      else ++h.misses;
    }
    per_run[run] = std::move(h);
  });
  HitHistogram total(gs.size());
  for (const auto& h : per_run) total += h;
  return total;
}

}  // namespace annealab
