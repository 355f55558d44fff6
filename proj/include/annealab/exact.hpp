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
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "annealab/enumerate.hpp"
#include "annealab/errors.hpp"
#include "annealab/format.hpp"
#include "annealab/problem.hpp"

namespace annealab {

using Complex = std::complex<double>;

// 2^N amplitudes; basis index bit i is spin i (1 = up).
struct WaveVector {
  std::vector<Complex> amplitudes;

  std::size_t dimension() const noexcept { return amplitudes.size(); }
  double norm() const noexcept {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
  }
  double probability(std::uint64_t k) const { return std::norm(amplitudes.at(k)); }

  static WaveVector uniform(std::size_t n_spins) {
    const std::size_t dim = std::size_t{1} << n_spins;
    return {std::vector<Complex>(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0))};
  }
  static WaveVector basis(std::size_t n_spins, std::uint64_t k) {
    WaveVector psi{std::vector<Complex>(std::size_t{1} << n_spins)};
    psi.amplitudes.at(k) = 1.0;
    return psi;
  }
};

// Distribution over the 2^N classical states, same indexing as WaveVector.
struct ProbabilityVector {
  std::vector<double> probabilities;

  std::size_t dimension() const noexcept { return probabilities.size(); }
  double total() const noexcept {
    double s = 0.0;
    for (double p : probabilities) s += p;
    return s;
  }
  double probability(std::uint64_t k) const { return probabilities.at(k); }

  static ProbabilityVector uniform(std::size_t n_spins) {
    const std::size_t dim = std::size_t{1} << n_spins;
    return {std::vector<double>(dim, 1.0 / static_cast<double>(dim))};
  }
};

enum class DriverKind {
  TransverseField,  // -sum_i sigma^x_i
  AllFlip,          // -sum over every nonempty subset of products of sigma^x
};

inline std::string to_string(DriverKind d) { return d == DriverKind::AllFlip ? "allflip" : "transverse"; }

inline DriverKind parse_driver(const std::string& text) {
  if (text == "transverse" || text == "transverse_field" || text == "tf") return DriverKind::TransverseField;
  if (text == "allflip" || text == "all_flip") return DriverKind::AllFlip;
  throw InputError("unknown driver '" + text + "' (expected transverse|allflip)");
}

struct AnnealSpec {
  double tau = 100.0;
  double dt = 0.0;  // 0 selects a step from the stability and drift budget
  DriverKind driver = DriverKind::TransverseField;
  std::optional<double> t_start;              // defaults depend on the evolution, see below
  std::optional<WaveVector> initial_state;    // quantum evolution only; defaults to the driver ground state
};

inline constexpr std::size_t kMaxExactSpins = 20;
inline constexpr std::size_t kMaxSpectrumSpins = 14;

// Matrix-free H(s) = (1-s) H_driver + s (H0 + H2) for dense state vectors.
class AnnealingHamiltonian {
 public:
  AnnealingHamiltonian(const IsingProblem& problem, DriverKind driver) : n_(problem.n_spins()), driver_(driver) {
    if (n_ > kMaxExactSpins)
      throw CapabilityError("exact dynamics: " + std::to_string(n_) + " spins exceeds limit of " +
                            std::to_string(kMaxExactSpins));
    const std::size_t dim = std::size_t{1} << n_;
    diagonal_.resize(dim);
    for (std::uint64_t k = 0; k < dim; ++k) diagonal_[k] = energy(problem, SpinConfiguration::from_bits(n_, k));
  }

  std::size_t n_spins() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return diagonal_.size(); }
  DriverKind driver() const noexcept { return driver_; }
  const std::vector<double>& diagonal() const noexcept { return diagonal_; }

  // Upper bound on the spectral norm of H(s) for any s in [0,1].
  double norm_bound() const noexcept {
    double diag_max = 0.0;
    for (double e : diagonal_) diag_max = std::max(diag_max, std::abs(e));
    const double driver_norm = driver_ == DriverKind::AllFlip ? static_cast<double>(dimension() - 1)
                                                               : static_cast<double>(n_);
    return std::max(diag_max, driver_norm);
  }

  template <class T>
  void apply(double s, std::span<const T> in, std::span<T> out) const {
    const std::size_t dim = dimension();
    const double a = 1.0 - s;
    if (driver_ == DriverKind::TransverseField) {
      for (std::size_t k = 0; k < dim; ++k) {
        T flips{};
        for (std::size_t i = 0; i < n_; ++i) flips += in[k ^ (std::size_t{1} << i)];
        out[k] = s * diagonal_[k] * in[k] - a * flips;
      }
    } else {
      // Every pair of distinct basis states is joined by exactly one subset
      // product (the XOR of the two patterns), so H_driver = -(ones - identity).
      T sum{};
      for (std::size_t k = 0; k < dim; ++k) sum += in[k];
      for (std::size_t k = 0; k < dim; ++k) out[k] = s * diagonal_[k] * in[k] - a * (sum - in[k]);
    }
  }

 private:
  std::size_t n_;
  DriverKind driver_;
  std::vector<double> diagonal_;
};

inline WaveVector apply_hamiltonian(const IsingProblem& problem, DriverKind driver, double s, const WaveVector& psi) {
  AnnealingHamiltonian h(problem, driver);
  if (psi.dimension() != h.dimension())
    throw InputError("apply_hamiltonian: state dimension " + std::to_string(psi.dimension()) + " != 2^" +
                     std::to_string(problem.n_spins()));
  WaveVector out{std::vector<Complex>(psi.dimension())};
  h.apply<Complex>(s, psi.amplitudes, out.amplitudes);
  return out;
}

// Dense matrix of H(s); used by the spectrum and as a test reference.
inline Eigen::MatrixXd dense_hamiltonian(const AnnealingHamiltonian& h, double s) {
  const std::size_t dim = h.dimension();
  Eigen::MatrixXd m(dim, dim);
  std::vector<double> e(dim, 0.0), col(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    e[k] = 1.0;
    h.apply<double>(s, e, col);
    for (std::size_t r = 0; r < dim; ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = col[r];
    e[k] = 0.0;
  }
  return m;
}

// RK4 norm loss per step for eigenvalue magnitude z = |lambda| dt is about z^6/72.
// Choose dt so the accumulated loss over `duration` stays near 1e-11, capped
// at the dt * norm <= 0.1 stability bound.
inline double recommended_schroedinger_dt(double norm_bound, double duration) {
  const double stability = 0.1 / norm_bound;
  if (duration <= 0.0) return stability;
  const double drift = std::pow(72.0 * 1e-11 / (duration * std::pow(norm_bound, 6)), 0.2);
  return std::min(stability, drift);
}

struct SchroedingerResult {
  WaveVector psi;
  double max_norm_drift = 0.0;
  std::size_t steps = 0;
  double dt = 0.0;
};

inline constexpr double kNormFailure = 1e-6;

// Integrates i d(psi)/dt = H(t/tau) psi with classical RK4 from t_start (default 0)
// to tau. The state is never renormalised; drift beyond kNormFailure throws.
inline SchroedingerResult evolve_schroedinger_detailed(const IsingProblem& problem, const AnnealSpec& spec) {
  if (!(spec.tau > 0.0)) throw InputError("evolve_schroedinger: tau must be positive");
  AnnealingHamiltonian h(problem, spec.driver);
  const double bound = h.norm_bound();
  const double t0 = spec.t_start.value_or(0.0);
  if (t0 < 0.0 || t0 > spec.tau) throw InputError("evolve_schroedinger: t_start outside [0, tau]");
  double dt = spec.dt > 0.0 ? spec.dt : recommended_schroedinger_dt(bound, spec.tau - t0);
  if (dt > spec.tau) throw InputError("evolve_schroedinger: dt exceeds tau");
  if (dt * bound > 0.1 + 1e-12)
    throw InputError("evolve_schroedinger: dt*|H| = " + format_real(dt * bound) + " exceeds 0.1");

  WaveVector psi = spec.initial_state.value_or(WaveVector::uniform(problem.n_spins()));
  if (psi.dimension() != h.dimension()) throw InputError("evolve_schroedinger: initial state dimension mismatch");
  const double norm0 = psi.norm();

  SchroedingerResult result;
  const double span = spec.tau - t0;
  const auto steps = span > 0.0 ? static_cast<std::size_t>(std::ceil(span / dt - 1e-9)) : std::size_t{0};
  dt = steps > 0 ? span / static_cast<double>(steps) : 0.0;
  result.steps = steps;
  result.dt = dt;

  const std::size_t dim = h.dimension();
  std::vector<Complex> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  std::vector<Complex>& y = psi.amplitudes;
  const Complex minus_i(0.0, -1.0);
  auto deriv = [&](double t, const std::vector<Complex>& in, std::vector<Complex>& out) {
    h.apply<Complex>(t / spec.tau, in, out);
    for (auto& v : out) v *= minus_i;
  };
  auto check_norm = [&](double t) {
    const double drift = std::abs(psi.norm() - norm0);
    result.max_norm_drift = std::max(result.max_norm_drift, drift);
    if (!(drift <= kNormFailure))
      throw IntegrationError("evolve_schroedinger: norm drift " + format_real(drift) + " at t=" + format_real(t) +
                                 "; reduce dt",
                             drift);
  };

  for (std::size_t step = 0; step < steps; ++step) {
    const double t = t0 + static_cast<double>(step) * dt;
    deriv(t, y, k1);
    for (std::size_t k = 0; k < dim; ++k) tmp[k] = y[k] + 0.5 * dt * k1[k];
    deriv(t + 0.5 * dt, tmp, k2);
    for (std::size_t k = 0; k < dim; ++k) tmp[k] = y[k] + 0.5 * dt * k2[k];
    deriv(t + 0.5 * dt, tmp, k3);
    for (std::size_t k = 0; k < dim; ++k) tmp[k] = y[k] + dt * k3[k];
    deriv(t + dt, tmp, k4);
    for (std::size_t k = 0; k < dim; ++k) y[k] += dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    if ((step & 255U) == 255U) check_norm(t + dt);
  }
  check_norm(spec.tau);
  result.psi = std::move(psi);
  return result;
}

inline WaveVector evolve_schroedinger(const IsingProblem& problem, const AnnealSpec& spec) {
  return evolve_schroedinger_detailed(problem, spec).psi;
}

// Glauber single-flip generator for the classical master equation dP/dt = W(T) P.
class GlauberGenerator {
 public:
  explicit GlauberGenerator(const IsingProblem& problem) : n_(problem.n_spins()) {
    if (n_ > kMaxExactSpins)
      throw CapabilityError("master equation: " + std::to_string(n_) + " spins exceeds limit of " +
                            std::to_string(kMaxExactSpins));
    const std::size_t dim = std::size_t{1} << n_;
    diagonal_.resize(dim);
    for (std::uint64_t k = 0; k < dim; ++k) diagonal_[k] = energy(problem, SpinConfiguration::from_bits(n_, k));
    rates_.resize(dim * n_);
  }

  std::size_t dimension() const noexcept { return diagonal_.size(); }
  std::size_t n_spins() const noexcept { return n_; }
  const std::vector<double>& diagonal() const noexcept { return diagonal_; }

  // w = 1 / (1 + exp(dE/T)); at T = 0 the step function with w(0) = 1/2.
  static double rate(double dE, double T) noexcept {
    if (!(T > 0.0)) return dE < 0.0 ? 1.0 : (dE > 0.0 ? 0.0 : 0.5);
    const double x = dE / T;
    if (x > 0.0) {
      const double ex = std::exp(-x);
      return ex / (1.0 + ex);
    }
    return 1.0 / (1.0 + std::exp(x));
  }

  // Caches the flip rates out of every state at temperature T.
  void set_temperature(double T) {
    if (cached_T_ && *cached_T_ == T) return;
    cached_T_ = T;
    const std::size_t dim = dimension();
    for (std::size_t k = 0; k < dim; ++k)
      for (std::size_t i = 0; i < n_; ++i)
        rates_[k * n_ + i] = rate(diagonal_[k ^ (std::size_t{1} << i)] - diagonal_[k], T);
  }

  void apply(std::span<const double> p, std::span<double> out) const {
    const std::size_t dim = dimension();
    for (std::size_t k = 0; k < dim; ++k) {
      double v = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j = k ^ (std::size_t{1} << i);
        v += rates_[j * n_ + i] * p[j] - rates_[k * n_ + i] * p[k];
      }
      out[k] = v;
    }
  }

 private:
  std::size_t n_;
  std::vector<double> diagonal_;
  std::vector<double> rates_;
  std::optional<double> cached_T_;
};

inline constexpr double kNegativeProbabilityFailure = -1e-9;

// RK4 on dP/dt = W(T(t)) P from t_begin to t_end with temperature functor T(t).
template <class Temperature>
ProbabilityVector integrate_master(const IsingProblem& problem, ProbabilityVector p, double t_begin, double t_end,
                                   double dt, Temperature&& temperature) {
  GlauberGenerator w(problem);
  if (p.dimension() != w.dimension()) throw InputError("master equation: distribution dimension mismatch");
  if (!(dt > 0.0)) throw InputError("master equation: dt must be positive");
  const double span = t_end - t_begin;
  if (span <= 0.0) return p;
  const auto steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
  dt = span / static_cast<double>(steps);
  const std::size_t dim = w.dimension();
  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  std::vector<double>& y = p.probabilities;
  auto deriv = [&](double t, const std::vector<double>& in, std::vector<double>& out) {
    w.set_temperature(temperature(t));
    w.apply(in, out);
  };
  for (std::size_t step = 0; step < steps; ++step) {
    const double t = t_begin + static_cast<double>(step) * dt;
    deriv(t, y, k1);
    for (std::size_t k = 0; k < dim; ++k) tmp[k] = y[k] + 0.5 * dt * k1[k];
    deriv(t + 0.5 * dt, tmp, k2);
    for (std::size_t k = 0; k < dim; ++k) tmp[k] = y[k] + 0.5 * dt * k2[k];
    deriv(t + 0.5 * dt, tmp, k3);
    for (std::size_t k = 0; k < dim; ++k) tmp[k] = y[k] + dt * k3[k];
    deriv(t + dt, tmp, k4);
    double lowest = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      y[k] += dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
      lowest = std::min(lowest, y[k]);
    }
    if (lowest < kNegativeProbabilityFailure)
      throw IntegrationError("master equation: probability " + format_real(lowest) + " at t=" + format_real(t + dt) +
                                 "; reduce dt",
                             lowest);
  }
  return p;
}

inline double recommended_master_dt(std::size_t n_spins) { return 0.25 / static_cast<double>(n_spins); }

// Simulated annealing on the full distribution with T(t) = (tau - t)/t,
// starting from the uniform (infinite temperature) distribution at
// t_start = max(dt, 1e-3 tau) unless overridden.
inline ProbabilityVector evolve_master(const IsingProblem& problem, const AnnealSpec& spec) {
  if (!(spec.tau > 0.0)) throw InputError("evolve_master: tau must be positive");
  const double dt = spec.dt > 0.0 ? spec.dt : recommended_master_dt(problem.n_spins());
  const double t0 = spec.t_start.value_or(std::max(dt, 1e-3 * spec.tau));
  auto p = ProbabilityVector::uniform(problem.n_spins());
  if (t0 >= spec.tau) return p;
  const double tau = spec.tau;
  return integrate_master(problem, std::move(p), t0, tau, dt, [tau](double t) { return (tau - t) / t; });
}

// Constant-temperature relaxation, mainly for equilibrium checks.
inline ProbabilityVector evolve_master_fixed(const IsingProblem& problem, ProbabilityVector initial, double temperature,
                                            double duration, double dt = 0.0) {
  if (dt <= 0.0) dt = recommended_master_dt(problem.n_spins());
  return integrate_master(problem, std::move(initial), 0.0, duration, dt, [temperature](double) { return temperature; });
}

// Full ascending spectrum of H(s) at each grid point.
inline std::vector<std::vector<double>> instantaneous_spectrum(const IsingProblem& problem, DriverKind driver,
                                                               std::span<const double> s_grid) {
  if (problem.n_spins() > kMaxSpectrumSpins)
    throw CapabilityError("instantaneous_spectrum: " + std::to_string(problem.n_spins()) +
                          " spins exceeds dense limit of " + std::to_string(kMaxSpectrumSpins));
  AnnealingHamiltonian h(problem, driver);
  std::vector<std::vector<double>> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_hamiltonian(h, s), Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    out.emplace_back(ev.data(), ev.data() + ev.size());
  }
  return out;
}

namespace detail {

inline std::vector<std::uint64_t> ground_basis_indices(const SpinConfiguration& state, bool modulo_reversal) {
  std::vector<std::uint64_t> out{state.to_bits()};
  if (modulo_reversal) out.push_back(state.global_flip().to_bits());
  return out;
}

template <class ProbabilityAt>
std::map<std::size_t, double> gather_ground_probabilities(const GroundStateSet& gs, std::size_t dim,
                                                          ProbabilityAt&& prob) {
  if ((std::size_t{1} << gs.n_spins()) != dim)
    throw InputError("ground_state_probabilities: ground-state set built for a different system size");
  std::map<std::size_t, double> out;
  for (std::size_t k = 0; k < gs.size(); ++k) {
    double p = 0.0;
    for (auto idx : ground_basis_indices(gs[k], gs.modulo_reversal())) p += prob(idx);
    out[k] = p;
  }
  return out;
}

}  // namespace detail

// Probability of each ground state ordinal. For a reversal-reduced set an
// ordinal covers both members of its pair.
inline std::map<std::size_t, double> ground_state_probabilities(const WaveVector& psi, const GroundStateSet& gs) {
  return detail::gather_ground_probabilities(gs, psi.dimension(), [&](std::uint64_t k) { return psi.probability(k); });
}

inline std::map<std::size_t, double> ground_state_probabilities(const ProbabilityVector& p, const GroundStateSet& gs) {
  return detail::gather_ground_probabilities(gs, p.dimension(), [&](std::uint64_t k) { return p.probability(k); });
}

namespace detail {

inline std::vector<double> classical_energies(const IsingProblem& problem, std::size_t dim) {
  if (problem.n_spins() > kMaxExactSpins || (std::size_t{1} << problem.n_spins()) != dim)
    throw InputError("residual_energy: state dimension does not match problem");
  std::vector<double> e(dim);
  for (std::uint64_t k = 0; k < dim; ++k) e[k] = energy(problem, SpinConfiguration::from_bits(problem.n_spins(), k));
  return e;
}

}  // namespace detail

// (<H0 + H2> - e0) / N
inline double residual_energy(const WaveVector& psi, const IsingProblem& problem, double e0) {
  const auto e = detail::classical_energies(problem, psi.dimension());
  double mean = 0.0, norm = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double p = psi.probability(k);
    mean += p * e[k];
    norm += p;
  }
  return (mean / norm - e0) / static_cast<double>(problem.n_spins());
}

inline double residual_energy(const ProbabilityVector& p, const IsingProblem& problem, double e0) {
  const auto e = detail::classical_energies(problem, p.dimension());
  double mean = 0.0, total = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    mean += p.probabilities[k] * e[k];
    total += p.probabilities[k];
  }
  return (mean / total - e0) / static_cast<double>(problem.n_spins());
}

}  // namespace annealab
