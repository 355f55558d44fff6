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

#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>

#include "annealab/errors.hpp"

namespace annealab {

// Shortest of %.15g / %.16g / %.17g that parses back to the same double.
inline std::string format_real(double x) {
  char buf[32];
  for (int precision : {15, 16, 17}) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

inline double parse_real(std::string_view text, const std::string& what) {
  std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw InputError(what + ": not a number: '" + s + "'");
  return v;
}

inline long long parse_integer(std::string_view text, const std::string& what) {
  std::string s(text);
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) throw InputError(what + ": not an integer: '" + s + "'");
  return v;
}

}  // namespace annealab
