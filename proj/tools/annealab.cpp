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

// Command-line front end: one subcommand per experiment kind, each reading a
// key/value config plus --set overrides.
// Exit status: 0 success, 1 configuration error, 2 solver capability error.

#include <iostream>
#include <string>
#include <vector>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "annealab/errors.hpp"
#include "annealab/harness/config.hpp"
#include "annealab/harness/experiment.hpp"

namespace {

struct Invocation {
  std::string config_path;
  std::vector<std::string> overrides;
};

int run(const std::string& method, const Invocation& inv) {
  using namespace annealab;
  try {
    harness::KeyValues kv;
    if (!inv.config_path.empty()) kv = harness::load_key_values(inv.config_path);
    for (const auto& o : inv.overrides) harness::apply_override(kv, o);
    kv["method.type"] = method;
    const auto cfg = harness::load_config(kv);
    const auto report = harness::run_experiment(cfg);
    for (const auto& f : report.files) std::cout << f << '\n';
    for (const auto& e : report.task_errors) std::cerr << "task failed: " << e << '\n';
    return report.task_errors.empty() ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const InputError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const CapabilityError& e) {
    std::cerr << "capability error: " << e.what() << '\n';
    return 2;
  } catch (const IntegrationError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"annealab: quantum vs classical annealing on degenerate Ising problems"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"enumerate", "enumerate all degenerate ground states"},
      {"spectrum", "instantaneous spectrum of H(s) = (1-s) H_driver + s H0"},
      {"exact-qa", "exact Schroedinger annealing (N <= 20)"},
      {"exact-sa", "exact master-equation annealing (N <= 20)"},
      {"qmc", "path-integral Monte Carlo quantum annealing"},
      {"sa", "Metropolis simulated annealing"},
      {"analyze", "aggregate run CSVs and fit residual power laws"},
  };
  std::vector<Invocation> invocations(commands.size());
  std::vector<CLI::App*> subs;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    auto* sub = app.add_subcommand(commands[k].first, commands[k].second);
    sub->add_option("--config,-c", invocations[k].config_path, "key/value config file");
    sub->add_option("--set,-s", invocations[k].overrides, "override, e.g. --set model.L=6")->take_all();
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  for (std::size_t k = 0; k < commands.size(); ++k)
    if (subs[k]->parsed()) return run(commands[k].first, invocations[k]);
  return 1;
}
