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
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "annealab/errors.hpp"

namespace annealab {

struct MeanError {
  double mean = 0.0;
  double error = 0.0;
  std::size_t n = 0;
};

// Sample mean and standard error of the mean (0 for a single sample).
inline MeanError mean_stderr(std::span<const double> xs) {
  MeanError out;
  out.n = xs.size();
  if (xs.empty()) return out;
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.error = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  }
  return out;
}

inline double coefficient_of_variation(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1)) / m;
}

struct PowerLawFit {
  double exponent = 0.0;
  double exponent_stderr = 0.0;
  double prefactor = 0.0;  // y ~ prefactor * x^exponent
  std::size_t points = 0;
};

// Least-squares line through (ln x, ln y) for points with lo <= x <= hi.
inline PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points, double lo, double hi) {
  std::vector<std::pair<double, double>> logs;
  for (const auto& [x, y] : points) {
    if (x < lo || x > hi) continue;
    if (!(x > 0.0) || !(y > 0.0))
      throw InputError("fit_power_law: nonpositive value in fit window (x=" + std::to_string(x) +
                       ", y=" + std::to_string(y) + ")");
    logs.emplace_back(std::log(x), std::log(y));
  }
  if (logs.size() < 4) throw InputError("fit_power_law: need at least 4 points in the window");
  const double n = static_cast<double>(logs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [u, v] : logs) {
    mx += u;
    my += v;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [u, v] : logs) {
    sxx += (u - mx) * (u - mx);
    sxy += (u - mx) * (v - my);
  }
  if (sxx == 0.0) throw InputError("fit_power_law: all x values coincide");
  PowerLawFit fit;
  fit.points = logs.size();
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.prefactor = std::exp(intercept);
  double ssr = 0.0;
  for (const auto& [u, v] : logs) {
    const double r = v - intercept - fit.exponent * u;
    ssr += r * r;
  }
  fit.exponent_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
  return fit;
}

// Ranks starting at 1, ties share their average rank.
inline std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

// Spearman rank correlation: Pearson correlation of average ranks.
inline double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw InputError("spearman: need two equal-length samples");
  const auto rx = average_ranks(xs), ry = average_ranks(ys);
  const double n = static_cast<double>(rx.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace annealab
