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

#include <stdexcept>
#include <string>

namespace annealab {

// Malformed arguments: wrong lengths, out-of-range sites, bad parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The request is valid but exceeds what a solver can handle (system too large).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical integration left its stability envelope (norm drift, negative probability).
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double magnitude)
      : std::runtime_error(what), magnitude_(magnitude) {}
  double magnitude() const noexcept { return magnitude_; }

 private:
  double magnitude_;
};

// Lattice enumeration was given an energy target no configuration can reach.
class HintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Experiment configuration problem; key() names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace annealab
