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
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "annealab/errors.hpp"
#include "annealab/exact.hpp"
#include "annealab/format.hpp"
#include "annealab/problem.hpp"

namespace annealab::harness {

// Flat "section.key = value" text; '#' starts a comment. Later entries win.
using KeyValues = std::map<std::string, std::string>;

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::pair<std::string, std::string> split_assignment(std::string_view line, const std::string& where) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) throw ConfigError(where, "expected 'key = value'");
  auto key = trim(line.substr(0, eq));
  if (key.empty()) throw ConfigError(where, "empty key");
  return {key, trim(line.substr(eq + 1))};
}

inline KeyValues parse_key_values(std::istream& in, const std::string& source = "config") {
  KeyValues kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto [k, v] = split_assignment(line, source + ":" + std::to_string(line_no));
    kv[k] = v;
  }
  return kv;
}

inline KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  return parse_key_values(in, path);
}

inline void apply_override(KeyValues& kv, std::string_view assignment) {
  auto [k, v] = split_assignment(assignment, "--set " + std::string(assignment));
  kv[k] = v;
}

enum class ModelType { Villain, PmJ, Gaussian, FiveSpin };
enum class MethodType { Enumerate, Spectrum, ExactQa, ExactSa, Qmc, Sa, Analyze };

inline std::string to_string(ModelType m) {
  switch (m) {
    case ModelType::Villain: return "villain";
    case ModelType::PmJ: return "pmj";
    case ModelType::Gaussian: return "gaussian";
    case ModelType::FiveSpin: return "five_spin";
  }
  return "?";
}

inline std::string to_string(MethodType m) {
  switch (m) {
    case MethodType::Enumerate: return "enumerate";
    case MethodType::Spectrum: return "spectrum";
    case MethodType::ExactQa: return "exact_qa";
    case MethodType::ExactSa: return "exact_sa";
    case MethodType::Qmc: return "qmc";
    case MethodType::Sa: return "sa";
    case MethodType::Analyze: return "analyze";
  }
  return "?";
}

inline std::optional<ModelType> parse_model(std::string_view s) {
  if (s == "villain") return ModelType::Villain;
  if (s == "pmj" || s == "pm_j") return ModelType::PmJ;
  if (s == "gaussian") return ModelType::Gaussian;
  if (s == "five_spin") return ModelType::FiveSpin;
  return std::nullopt;
}

inline std::optional<MethodType> parse_method(std::string_view s) {
  if (s == "enumerate") return MethodType::Enumerate;
  if (s == "spectrum") return MethodType::Spectrum;
  if (s == "exact_qa" || s == "exact-qa") return MethodType::ExactQa;
  if (s == "exact_sa" || s == "exact-sa") return MethodType::ExactSa;
  if (s == "qmc") return MethodType::Qmc;
  if (s == "sa") return MethodType::Sa;
  if (s == "analyze") return MethodType::Analyze;
  return std::nullopt;
}

struct ModelSection {
  ModelType type = ModelType::FiveSpin;
  int L = 4;
  double h = 0.0;
  std::vector<std::uint64_t> disorder_seeds{0};
};

struct MethodSection {
  MethodType type = MethodType::ExactQa;
  DriverKind driver = DriverKind::TransverseField;
  std::vector<std::size_t> m_list{16};
  std::vector<double> tau_list{100.0};
  std::size_t runs_per_tau = 1;
  std::uint64_t base_seed = 1;
  double dt = 0.0;
  std::int64_t pre_anneal_steps = 100;
  std::optional<double> gamma_pre;
  bool final_quench = true;
  std::size_t workers = 0;
  std::size_t s_points = 101;
};

struct OutputSection {
  std::string directory = "out";
  std::vector<std::string> formats{"csv"};
};

struct AnalyzeSection {
  std::vector<std::string> inputs;
  double fit_lo = 100.0;
  double fit_hi = 1000.0;
};

struct ExperimentConfig {
  ModelSection model;
  MethodSection method;
  OutputSection output;
  AnalyzeSection analyze;
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const KeyValues& kv) : kv_(kv) {}

  const std::string* raw(const std::string& key) {
    used_.insert(key);
    auto it = kv_.find(key);
    return it == kv_.end() ? nullptr : &it->second;
  }

  template <class T, class Parse>
  void read(const std::string& key, T& target, Parse&& parse) {
    if (const auto* v = raw(key)) {
      try {
        target = parse(*v);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw ConfigError(key, e.what());
      }
    }
  }

  void reject_unknown() const {
    for (const auto& [k, v] : kv_)
      if (!used_.count(k)) throw ConfigError(k, "unknown key");
  }

 private:
  const KeyValues& kv_;
  std::set<std::string> used_;
};

inline double to_real(const std::string& s) { return parse_real(s, "value"); }

inline long long to_int(const std::string& s) { return parse_integer(s, "value"); }

inline bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "off" || s == "no") return false;
  throw InputError("not a boolean: '" + s + "'");
}

// Either "a, b, c" or "logspace:lo:hi:count".
inline std::vector<double> to_real_list(const std::string& s) {
  if (s.rfind("logspace:", 0) == 0) {
    std::vector<std::string> parts;
    std::istringstream ss(s.substr(9));
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(trim(p));
    if (parts.size() != 3) throw InputError("logspace needs lo:hi:count");
    const double lo = to_real(parts[0]), hi = to_real(parts[1]);
    const auto count = to_int(parts[2]);
    if (!(lo > 0.0) || !(hi > lo) || count < 2) throw InputError("logspace needs 0 < lo < hi and count >= 2");
    std::vector<double> out;
    for (long long k = 0; k < count; ++k) {
      const double v = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * static_cast<double>(k) /
                                                   static_cast<double>(count - 1));
      // Keep round numbers exact at the ends and trim representation noise.
      out.push_back(k == 0 ? lo : k == count - 1 ? hi : std::stod(format_real(std::round(v * 1e6) / 1e6)));
    }
    return out;
  }
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(to_real(item));
  return out;
}

}  // namespace detail

inline ExperimentConfig parse_config(const KeyValues& kv) {
  ExperimentConfig cfg;
  detail::Reader r(kv);
  r.read("model.type", cfg.model.type, [](const std::string& s) {
    auto m = parse_model(s);
    if (!m) throw ConfigError("model.type", "unknown model '" + s + "' (villain|pmj|gaussian|five_spin)");
    return *m;
  });
  r.read("model.L", cfg.model.L, [](const std::string& s) { return static_cast<int>(detail::to_int(s)); });
  r.read("model.h", cfg.model.h, detail::to_real);
  r.read("model.disorder_seeds", cfg.model.disorder_seeds, [](const std::string& s) {
    std::vector<std::uint64_t> out;
    for (const auto& item : detail::split_list(s)) {
      const auto v = detail::to_int(item);
      if (v < 0) throw InputError("disorder seeds must be nonnegative");
      out.push_back(static_cast<std::uint64_t>(v));
    }
    return out;
  });

  r.read("method.type", cfg.method.type, [](const std::string& s) {
    auto m = parse_method(s);
    if (!m) throw ConfigError("method.type", "unknown method '" + s + "'");
    return *m;
  });
  r.read("method.driver", cfg.method.driver, parse_driver);
  r.read("method.M", cfg.method.m_list, [](const std::string& s) {
    std::vector<std::size_t> out;
    for (const auto& item : detail::split_list(s)) {
      const auto v = detail::to_int(item);
      if (v < 2) throw InputError("M must be >= 2");
      out.push_back(static_cast<std::size_t>(v));
    }
    return out;
  });
  r.read("method.tau_list", cfg.method.tau_list, detail::to_real_list);
  r.read("method.runs_per_tau", cfg.method.runs_per_tau, [](const std::string& s) {
    const auto v = detail::to_int(s);
    if (v < 1) throw ConfigError("method.runs_per_tau", "must be >= 1");
    return static_cast<std::size_t>(v);
  });
  r.read("method.base_seed", cfg.method.base_seed,
         [](const std::string& s) { return static_cast<std::uint64_t>(detail::to_int(s)); });
  r.read("method.dt", cfg.method.dt, detail::to_real);
  r.read("method.pre_anneal_steps", cfg.method.pre_anneal_steps,
         [](const std::string& s) { return static_cast<std::int64_t>(detail::to_int(s)); });
  r.read("method.gamma_pre", cfg.method.gamma_pre, [](const std::string& s) { return std::optional(detail::to_real(s)); });
  r.read("method.final_quench", cfg.method.final_quench, detail::to_bool);
  r.read("method.workers", cfg.method.workers,
         [](const std::string& s) { return static_cast<std::size_t>(std::max(0LL, detail::to_int(s))); });
  r.read("spectrum.s_points", cfg.method.s_points, [](const std::string& s) {
    const auto v = detail::to_int(s);
    if (v < 2) throw ConfigError("spectrum.s_points", "must be >= 2");
    return static_cast<std::size_t>(v);
  });

  r.read("output.directory", cfg.output.directory, [](const std::string& s) { return s; });
  r.read("output.formats", cfg.output.formats, detail::split_list);
  r.read("analyze.inputs", cfg.analyze.inputs, detail::split_list);
  r.read("analyze.fit_lo", cfg.analyze.fit_lo, detail::to_real);
  r.read("analyze.fit_hi", cfg.analyze.fit_hi, detail::to_real);
  r.reject_unknown();
  return cfg;
}

inline std::size_t model_spins(const ModelSection& m) {
  return m.type == ModelType::FiveSpin ? 5 : static_cast<std::size_t>(m.L) * static_cast<std::size_t>(m.L);
}

// Checks cross-field invariants; throws ConfigError naming the offending key.
inline void validate(const ExperimentConfig& cfg) {
  const auto& m = cfg.model;
  if (m.type != ModelType::FiveSpin) {
    if (m.L < 2) throw ConfigError("model.L", "must be >= 2");
    if (m.type == ModelType::Villain && m.L % 2 != 0) throw ConfigError("model.L", "villain needs even L");
  }
  if (m.disorder_seeds.empty()) throw ConfigError("model.disorder_seeds", "empty list");
  if (!std::isfinite(m.h)) throw ConfigError("model.h", "not finite");

  const auto& me = cfg.method;
  const bool uses_tau = me.type == MethodType::ExactQa || me.type == MethodType::ExactSa ||
                        me.type == MethodType::Qmc || me.type == MethodType::Sa;
  if (uses_tau) {
    if (me.tau_list.empty()) throw ConfigError("method.tau_list", "empty list");
    for (std::size_t k = 0; k < me.tau_list.size(); ++k) {
      if (!(me.tau_list[k] > 0.0)) throw ConfigError("method.tau_list", "values must be positive");
      if (k > 0 && !(me.tau_list[k] > me.tau_list[k - 1]))
        throw ConfigError("method.tau_list", "must be strictly increasing");
    }
  }
  if (me.type == MethodType::Qmc || me.type == MethodType::Sa) {
    for (double t : me.tau_list)
      if (std::floor(t) != t || t < 2.0) throw ConfigError("method.tau_list", "Monte Carlo tau must be an integer >= 2");
    if (m.type == ModelType::FiveSpin) throw ConfigError("model.type", "Monte Carlo methods need a lattice model");
  }
  if (me.type == MethodType::Qmc && me.m_list.empty()) throw ConfigError("method.M", "empty list");
  if ((me.type == MethodType::ExactQa || me.type == MethodType::ExactSa) && model_spins(m) > kMaxExactSpins)
    throw ConfigError("model.L", "exact methods need N <= " + std::to_string(kMaxExactSpins) + " spins");
  if (me.dt < 0.0) throw ConfigError("method.dt", "must be >= 0");
  if (me.pre_anneal_steps < 0) throw ConfigError("method.pre_anneal_steps", "must be >= 0");
  for (const auto& f : cfg.output.formats)
    if (f != "csv") throw ConfigError("output.formats", "only 'csv' is supported");
  if (cfg.output.directory.empty()) throw ConfigError("output.directory", "empty");
  if (me.type == MethodType::Analyze) {
    if (cfg.analyze.inputs.empty()) throw ConfigError("analyze.inputs", "no input directories");
    if (!(cfg.analyze.fit_lo > 0.0) || !(cfg.analyze.fit_hi > cfg.analyze.fit_lo))
      throw ConfigError("analyze.fit_lo", "need 0 < fit_lo < fit_hi");
  }
}

inline ExperimentConfig load_config(const KeyValues& kv) {
  auto cfg = parse_config(kv);
  validate(cfg);
  return cfg;
}

inline IsingProblem build_model(const ModelSection& m, std::uint64_t disorder_seed) {
  switch (m.type) {
    case ModelType::Villain: {
      auto p = build_villain(m.L);
      if (m.h == 0.0) return p;
      return IsingProblem(p.n_spins(), p.couplings(), m.h, p.lattice());
    }
    case ModelType::PmJ: {
      auto p = build_pm_j(m.L, disorder_seed);
      if (m.h == 0.0) return p;
      return IsingProblem(p.n_spins(), p.couplings(), m.h, p.lattice());
    }
    case ModelType::Gaussian: return build_gaussian(m.L, m.h, disorder_seed);
    case ModelType::FiveSpin: return build_five_spin(m.h);
  }
  throw ConfigError("model.type", "unhandled model");
}

}  // namespace annealab::harness
