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
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "annealab/enumerate.hpp"
#include "annealab/errors.hpp"
#include "annealab/exact.hpp"
#include "annealab/harness/config.hpp"
#include "annealab/harness/csv.hpp"
#include "annealab/histogram.hpp"
#include "annealab/parallel.hpp"
#include "annealab/qmc.hpp"
#include "annealab/rng.hpp"
#include "annealab/sa.hpp"
#include "annealab/stats.hpp"

namespace annealab::harness {

struct ExperimentReport {
  std::vector<std::string> files;
  std::vector<std::string> task_errors;  // capability failures of individual tasks
};

// Per-run outcome of a Monte Carlo solver; for SA e_avg == e_best == final energy and m == 0.
struct RunRecord {
  std::string method;
  std::string model;
  int L = 0;
  std::uint64_t disorder_seed = 0;
  std::size_t m = 0;
  std::int64_t tau = 0;
  std::uint64_t run_seed = 0;
  double e_avg = 0.0;
  double e_best = 0.0;
};

struct ReferenceEnergy {
  double e0 = 0.0;
  bool provisional = false;
};

struct AggregateRecord {
  std::string method;
  std::string model;
  int L = 0;
  std::size_t m = 0;
  std::int64_t tau = 0;
  std::int64_t effective_budget = 0;
  MeanError residual_avg;
  MeanError residual_best;
  std::size_t n_samples = 0;
  bool provisional = false;
};

inline constexpr int kMaxReferenceL = 6;

// Complete ground-state set when the instance is small enough to enumerate.
inline std::optional<GroundStateSet> exact_ground_states(const IsingProblem& problem) {
  const bool reversal = problem.field_h() == 0.0;
  if (problem.lattice() && problem.lattice()->L <= kMaxReferenceL) return enumerate_lattice(problem, std::nullopt, reversal);
  if (problem.n_spins() <= kMaxExactSpins) return enumerate_exhaustive(problem, reversal);
  return std::nullopt;
}

inline std::string instance_key(const std::string& model, int L, std::uint64_t seed) {
  return model + "/" + std::to_string(L) + "/" + std::to_string(seed);
}

// Exact e0 where enumerable, otherwise the lowest energy any record reached
// on that instance (flagged provisional).
inline std::map<std::string, ReferenceEnergy> reference_energies(const std::vector<RunRecord>& records,
                                                                 const ModelSection& model) {
  std::map<std::string, ReferenceEnergy> refs;
  std::map<std::string, double> observed;
  for (const auto& r : records) {
    auto key = instance_key(r.model, r.L, r.disorder_seed);
    auto [it, fresh] = observed.try_emplace(key, r.e_best);
    if (!fresh) it->second = std::min(it->second, r.e_best);
  }
  for (const auto& [key, best] : observed) {
    const auto& sample = *std::find_if(records.begin(), records.end(), [&](const RunRecord& r) {
      return instance_key(r.model, r.L, r.disorder_seed) == key;
    });
    ModelSection m = model;
    auto type = parse_model(sample.model);
    if (!type) throw InputError("unknown model '" + sample.model + "' in run records");
    m.type = *type;
    m.L = sample.L;
    std::optional<GroundStateSet> gs;
    if (m.L <= kMaxReferenceL) gs = exact_ground_states(build_model(m, sample.disorder_seed));
    refs[key] = gs ? ReferenceEnergy{gs->e0(), false} : ReferenceEnergy{best, true};
  }
  return refs;
}

// Groups by (method, model, L, M, tau); residuals are per spin against the reference.
inline std::vector<AggregateRecord> aggregate(const std::vector<RunRecord>& records,
                                              const std::map<std::string, ReferenceEnergy>& refs) {
  using Key = std::tuple<std::string, std::string, int, std::size_t, std::int64_t>;
  std::map<Key, std::pair<std::vector<double>, std::vector<double>>> groups;
  std::map<Key, bool> provisional;
  for (const auto& r : records) {
    const auto& ref = refs.at(instance_key(r.model, r.L, r.disorder_seed));
    const double n = static_cast<double>(r.L) * r.L;
    Key key{r.method, r.model, r.L, r.m, r.tau};
    groups[key].first.push_back((r.e_avg - ref.e0) / n);
    groups[key].second.push_back((r.e_best - ref.e0) / n);
    provisional[key] = provisional[key] || ref.provisional;
  }
  std::vector<AggregateRecord> out;
  for (const auto& [key, values] : groups) {
    AggregateRecord a;
    std::tie(a.method, a.model, a.L, a.m, a.tau) = key;
    a.effective_budget = a.method == "qmc" ? a.tau * static_cast<std::int64_t>(a.m) : a.tau;
    a.residual_avg = mean_stderr(values.first);
    a.residual_best = mean_stderr(values.second);
    a.n_samples = values.first.size();
    a.provisional = provisional[key];
    out.push_back(a);
  }
  return out;
}

inline void write_aggregate(const std::string& path, const std::vector<AggregateRecord>& rows) {
  CsvWriter w(path, {"method", "model", "L", "M", "tau", "effective_budget", "residual_avg", "residual_avg_stderr",
                     "residual_best", "residual_best_stderr", "n_samples", "provisional"});
  for (const auto& a : rows)
    w.row({a.method, a.model, cell(a.L), cell(a.m), cell(a.tau), cell(a.effective_budget), cell(a.residual_avg.mean),
           cell(a.residual_avg.error), cell(a.residual_best.mean), cell(a.residual_best.error), cell(a.n_samples),
           a.provisional ? "true" : "false"});
}

inline void write_hits(const std::string& path, const HitHistogram& hist, const GroundStateSet& gs,
                       const IsingProblem& problem) {
  CsvWriter w(path, {"gs_index", "hits", "rel_freq", "free_spins"});
  const auto rel = hist.relative_to_mode();
  for (auto k : hist.ranking())
    w.row({cell(k), cell(hist.counts[k]), cell(rel[k]), cell(free_spin_count(problem, gs[k]))});
}

namespace detail {

inline std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output.directory) / name).string();
}

inline ExperimentReport run_enumerate(const ExperimentConfig& cfg) {
  ExperimentReport report;
  CsvWriter summary(out_path(cfg, "enumerate.csv"),
                    {"model", "L", "disorder_seed", "n_spins", "e0", "count", "modulo_reversal"});
  CsvWriter states(out_path(cfg, "ground_states.csv"), {"disorder_seed", "gs_index", "pattern", "free_spins"});
  for (auto seed : cfg.model.disorder_seeds) {
    try {
      const auto problem = build_model(cfg.model, seed);
      const bool reversal = problem.field_h() == 0.0;
      const auto gs = problem.lattice() && problem.lattice()->L <= kMaxLatticeL
                          ? enumerate_lattice(problem, std::nullopt, reversal)
                          : enumerate_exhaustive(problem, reversal);
      summary.row({to_string(cfg.model.type), cell(cfg.model.L), cell(seed), cell(problem.n_spins()), cell(gs.e0()),
                   cell(gs.size()), reversal ? "true" : "false"});
      for (std::size_t k = 0; k < gs.size(); ++k)
        states.row({cell(seed), cell(k), gs[k].to_hex(), cell(free_spin_count(problem, gs[k]))});
      const auto name = out_path(cfg, "ground_states_d" + std::to_string(seed) + ".txt");
      std::ofstream f(name);
      write_ground_states(f, gs);
      report.files.push_back(name);
    } catch (const CapabilityError& e) {
      report.task_errors.push_back("disorder_seed " + std::to_string(seed) + ": " + e.what());
    }
  }
  report.files.push_back(summary.path());
  report.files.push_back(states.path());
  return report;
}

inline ExperimentReport run_spectrum(const ExperimentConfig& cfg) {
  ExperimentReport report;
  const auto problem = build_model(cfg.model, cfg.model.disorder_seeds.front());
  std::vector<double> grid(cfg.method.s_points);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = static_cast<double>(k) / static_cast<double>(grid.size() - 1);
  CsvWriter w(out_path(cfg, "spectrum.csv"), {"s", "level", "energy"});
  try {
    std::vector<std::vector<double>> levels(grid.size());
    parallel_for(
        grid.size(),
        [&](std::size_t k) { levels[k] = instantaneous_spectrum(problem, cfg.method.driver, std::span(&grid[k], 1)).front(); },
        cfg.method.workers);
    for (std::size_t k = 0; k < grid.size(); ++k)
      for (std::size_t l = 0; l < levels[k].size(); ++l) w.row({cell(grid[k]), cell(l), cell(levels[k][l])});
  } catch (const CapabilityError& e) {
    report.task_errors.push_back(e.what());
  }
  report.files.push_back(w.path());
  return report;
}

inline std::string exact_method_label(const ExperimentConfig& cfg) {
  if (cfg.method.type == MethodType::ExactSa) return "exact_sa";
  return cfg.method.driver == DriverKind::AllFlip ? "exact_qa_allflip" : "exact_qa";
}

inline ExperimentReport run_exact(const ExperimentConfig& cfg) {
  ExperimentReport report;
  const auto problem = build_model(cfg.model, cfg.model.disorder_seeds.front());
  const auto gs = enumerate_exhaustive(problem, false);
  const auto& taus = cfg.method.tau_list;
  std::vector<std::map<std::size_t, double>> probs(taus.size());
  std::vector<double> residual(taus.size());
  std::vector<std::string> errors(taus.size());
  parallel_for(
      taus.size(),
      [&](std::size_t k) {
        AnnealSpec spec;
        spec.tau = taus[k];
        spec.dt = cfg.method.dt;
        spec.driver = cfg.method.driver;
        try {
          if (cfg.method.type == MethodType::ExactQa) {
            const auto psi = evolve_schroedinger(problem, spec);
            probs[k] = ground_state_probabilities(psi, gs);
            residual[k] = residual_energy(psi, problem, gs.e0());
          } else {
            const auto p = evolve_master(problem, spec);
            probs[k] = ground_state_probabilities(p, gs);
            residual[k] = residual_energy(p, problem, gs.e0());
          }
        } catch (const IntegrationError& e) {
          errors[k] = "tau " + format_real(taus[k]) + ": " + e.what();
        }
      },
      cfg.method.workers);
  CsvWriter pw(out_path(cfg, "probs.csv"), {"tau", "gs_index", "probability"});
  CsvWriter rw(out_path(cfg, "residual_exact.csv"), {"method", "tau", "residual_per_spin"});
  const auto label = exact_method_label(cfg);
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (!errors[k].empty()) {
      report.task_errors.push_back(errors[k]);
      continue;
    }
    for (const auto& [idx, p] : probs[k]) pw.row({cell(taus[k]), cell(idx), cell(p)});
    rw.row({label, cell(taus[k]), cell(residual[k])});
  }
  report.files.push_back(pw.path());
  report.files.push_back(rw.path());
  return report;
}

inline ExperimentReport run_monte_carlo(const ExperimentConfig& cfg) {
  ExperimentReport report;
  const bool qmc = cfg.method.type == MethodType::Qmc;
  const auto& seeds = cfg.model.disorder_seeds;
  const std::vector<std::size_t> m_list = qmc ? cfg.method.m_list : std::vector<std::size_t>{0};
  const auto& taus = cfg.method.tau_list;
  const std::size_t runs = cfg.method.runs_per_tau;

  std::vector<IsingProblem> problems;
  std::vector<std::optional<GroundStateSet>> ground;
  for (auto s : seeds) {
    problems.push_back(build_model(cfg.model, s));
    ground.push_back(exact_ground_states(problems.back()));
  }

  struct Task {
    std::size_t disorder, m_index, tau_index, run;
  };
  std::vector<Task> tasks;
  for (std::size_t d = 0; d < seeds.size(); ++d)
    for (std::size_t mi = 0; mi < m_list.size(); ++mi)
      for (std::size_t ti = 0; ti < taus.size(); ++ti)
        for (std::size_t r = 0; r < runs; ++r) tasks.push_back({d, mi, ti, r});

  std::vector<RunRecord> records(tasks.size());
  std::vector<std::vector<std::optional<std::size_t>>> hits(tasks.size());
  parallel_for(
      tasks.size(),
      [&](std::size_t idx) {
        const auto& t = tasks[idx];
        const auto tau = static_cast<std::int64_t>(taus[t.tau_index]);
        const auto seed = derive_seed({cfg.method.base_seed, t.disorder, static_cast<std::uint64_t>(tau), t.run});
        RunRecord& rec = records[idx];
        rec.method = qmc ? "qmc" : "sa";
        rec.model = to_string(cfg.model.type);
        rec.L = cfg.model.L;
        rec.disorder_seed = seeds[t.disorder];
        rec.m = m_list[t.m_index];
        rec.tau = tau;
        rec.run_seed = seed;
        const auto& gs = ground[t.disorder];
        if (qmc) {
          QmcSchedule sched;
          sched.m = rec.m;
          sched.tau = tau;
          sched.pre_anneal_steps = cfg.method.pre_anneal_steps;
          sched.gamma_pre = cfg.method.gamma_pre;
          sched.final_quench = cfg.method.final_quench;
          const auto r = run_qa(problems[t.disorder], sched, gs ? &*gs : nullptr, seed);
          rec.e_avg = r.average_energy;
          rec.e_best = r.best_energy;
          hits[idx] = r.hits;
        } else {
          const auto r = run_sa(problems[t.disorder], SaSchedule{tau, 1}, seed);
          rec.e_avg = rec.e_best = r.energy;
          if (gs && is_ground_energy(r.energy, *gs, problems[t.disorder])) hits[idx] = {gs->lookup(r.config)};
          else hits[idx] = {std::nullopt};
        }
      },
      cfg.method.workers);

  {
    CsvWriter w = qmc ? CsvWriter(out_path(cfg, "qmc_runs.csv"),
                                  {"model", "L", "disorder_seed", "M", "tau", "run_seed", "e_avg", "e_best"})
                      : CsvWriter(out_path(cfg, "sa_runs.csv"),
                                  {"model", "L", "disorder_seed", "tau", "run_seed", "e_final"});
    for (const auto& r : records) {
      if (qmc)
        w.row({r.model, cell(r.L), cell(r.disorder_seed), cell(r.m), cell(r.tau), cell(r.run_seed), cell(r.e_avg),
               cell(r.e_best)});
      else
        w.row({r.model, cell(r.L), cell(r.disorder_seed), cell(r.tau), cell(r.run_seed), cell(r.e_best)});
    }
    report.files.push_back(w.path());
  }

  // One histogram per (disorder, M, tau) where the ground states are known.
  const std::size_t combos = seeds.size() * m_list.size() * taus.size();
  for (std::size_t d = 0; d < seeds.size(); ++d) {
    if (!ground[d]) continue;
    for (std::size_t mi = 0; mi < m_list.size(); ++mi) {
      for (std::size_t ti = 0; ti < taus.size(); ++ti) {
        HitHistogram hist(ground[d]->size());
        for (std::size_t idx = 0; idx < tasks.size(); ++idx) {
          const auto& t = tasks[idx];
          if (t.disorder != d || t.m_index != mi || t.tau_index != ti) continue;
          for (const auto& h : hits[idx]) {
            if (h) ++hist.counts[*h];
            else ++hist.misses;
          }
        }
        std::string name = "hits.csv";
        if (combos > 1) {
          name = "hits_d" + std::to_string(seeds[d]);
          if (qmc) name += "_M" + std::to_string(m_list[mi]);
          name += "_tau" + format_real(taus[ti]) + ".csv";
        }
        write_hits(out_path(cfg, name), hist, *ground[d], problems[d]);
        report.files.push_back(out_path(cfg, name));
      }
    }
  }

  write_aggregate(out_path(cfg, "aggregate.csv"), aggregate(records, reference_energies(records, cfg.model)));
  report.files.push_back(out_path(cfg, "aggregate.csv"));
  return report;
}

inline std::vector<RunRecord> read_run_records(const std::string& dir) {
  std::vector<RunRecord> out;
  const auto qmc_path = std::filesystem::path(dir) / "qmc_runs.csv";
  const auto sa_path = std::filesystem::path(dir) / "sa_runs.csv";
  if (std::filesystem::exists(qmc_path)) {
    const auto t = read_csv(qmc_path.string());
    const auto cm = t.column("model"), cl = t.column("L"), cd = t.column("disorder_seed"), cM = t.column("M"),
               ct = t.column("tau"), cs = t.column("run_seed"), ca = t.column("e_avg"), cb = t.column("e_best");
    for (const auto& row : t.rows)
      out.push_back({"qmc", row[cm], static_cast<int>(parse_integer(row[cl], "L")),
                     std::stoull(row[cd]), static_cast<std::size_t>(parse_integer(row[cM], "M")),
                     parse_integer(row[ct], "tau"), std::stoull(row[cs]), parse_real(row[ca], "e_avg"),
                     parse_real(row[cb], "e_best")});
  }
  if (std::filesystem::exists(sa_path)) {
    const auto t = read_csv(sa_path.string());
    const auto cm = t.column("model"), cl = t.column("L"), cd = t.column("disorder_seed"), ct = t.column("tau"),
               cs = t.column("run_seed"), ce = t.column("e_final");
    for (const auto& row : t.rows) {
      const double e = parse_real(row[ce], "e_final");
      out.push_back({"sa", row[cm], static_cast<int>(parse_integer(row[cl], "L")), std::stoull(row[cd]), 0,
                     parse_integer(row[ct], "tau"), std::stoull(row[cs]), e, e});
    }
  }
  return out;
}

inline ExperimentReport run_analyze(const ExperimentConfig& cfg) {
  ExperimentReport report;
  std::vector<RunRecord> records;
  std::vector<std::pair<std::string, std::pair<double, double>>> residuals;  // (method, (tau, residual))
  for (const auto& dir : cfg.analyze.inputs) {
    auto r = read_run_records(dir);
    records.insert(records.end(), r.begin(), r.end());
    const auto exact_path = std::filesystem::path(dir) / "residual_exact.csv";
    if (std::filesystem::exists(exact_path)) {
      const auto t = read_csv(exact_path.string());
      const auto cm = t.column("method"), ct = t.column("tau"), cr = t.column("residual_per_spin");
      for (const auto& row : t.rows)
        residuals.push_back({row[cm], {parse_real(row[ct], "tau"), parse_real(row[cr], "residual_per_spin")}});
    }
  }
  if (!records.empty()) {
    write_aggregate(out_path(cfg, "aggregate.csv"), aggregate(records, reference_energies(records, cfg.model)));
    report.files.push_back(out_path(cfg, "aggregate.csv"));
  }
  if (!residuals.empty()) {
    std::map<std::string, std::vector<std::pair<double, double>>> by_method;
    for (const auto& [m, pt] : residuals) by_method[m].push_back(pt);
    CsvWriter w(out_path(cfg, "fits.csv"),
                {"method", "tau_lo", "tau_hi", "exponent", "exponent_stderr", "prefactor", "points"});
    for (const auto& [m, pts] : by_method) {
      try {
        const auto fit = fit_power_law(pts, cfg.analyze.fit_lo, cfg.analyze.fit_hi);
        w.row({m, cell(cfg.analyze.fit_lo), cell(cfg.analyze.fit_hi), cell(fit.exponent), cell(fit.exponent_stderr),
               cell(fit.prefactor), cell(fit.points)});
      } catch (const InputError& e) {
        report.task_errors.push_back(m + ": " + e.what());
      }
    }
    report.files.push_back(w.path());
  }
  if (records.empty() && residuals.empty()) throw ConfigError("analyze.inputs", "no run or residual CSVs found");
  return report;
}

}  // namespace detail

// Dispatches one configured experiment and writes its CSVs into output.directory.
// Capability failures of individual tasks are collected instead of aborting.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  std::filesystem::create_directories(cfg.output.directory);
  switch (cfg.method.type) {
    case MethodType::Enumerate: return detail::run_enumerate(cfg);
    case MethodType::Spectrum: return detail::run_spectrum(cfg);
    case MethodType::ExactQa:
    case MethodType::ExactSa: return detail::run_exact(cfg);
    case MethodType::Qmc:
    case MethodType::Sa: return detail::run_monte_carlo(cfg);
    case MethodType::Analyze: return detail::run_analyze(cfg);
  }
  throw ConfigError("method.type", "unhandled method");
}

}  // namespace annealab::harness
