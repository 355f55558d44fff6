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

#include <cmath>

#include "annealab/rng.hpp"
#include "annealab/stats.hpp"

using namespace annealab;

namespace {

std::vector<std::pair<double, double>> log_grid(double lo, double hi, int n, double exponent, double prefactor) {
  std::vector<std::pair<double, double>> out;
  for (int k = 0; k < n; ++k) {
    const double x = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
    out.emplace_back(x, prefactor * std::pow(x, exponent));
  }
  return out;
}

}  // namespace

TEST(FitPowerLaw, ExactInverseSquare) {
  const auto pts = log_grid(100, 1000, 9, -2.0, 3.0);
  const auto fit = fit_power_law(pts, 100, 1000);
  EXPECT_NEAR(fit.exponent, -2.0, 1e-12);
  EXPECT_NEAR(fit.prefactor, 3.0, 1e-9);
  EXPECT_NEAR(fit.exponent_stderr, 0.0, 1e-10);
  EXPECT_EQ(fit.points, 9U);
}

TEST(FitPowerLaw, NoisyInverse) {
  auto pts = log_grid(100, 1000, 9, -1.0, 1.0);
  Rng rng(5);
  for (auto& [x, y] : pts) y *= 1.0 + 0.01 * rng.normal();
  const auto fit = fit_power_law(pts, 100, 1000);
  EXPECT_NEAR(fit.exponent, -1.0, 0.1);
  EXPECT_GT(fit.exponent_stderr, 0.0);
}

TEST(FitPowerLaw, WindowSelectsPoints) {
  auto pts = log_grid(10, 10000, 13, -2.0, 1.0);
  pts.emplace_back(5.0, 1e9);  // outside the window, must be ignored
  const auto fit = fit_power_law(pts, 99, 1001);
  EXPECT_EQ(fit.points, 5U);
  EXPECT_NEAR(fit.exponent, -2.0, 1e-12);
}

TEST(FitPowerLaw, Errors) {
  auto pts = log_grid(100, 1000, 9, -1.0, 1.0);
  pts[3].second = 0.0;
  EXPECT_THROW(fit_power_law(pts, 100, 1000), InputError);
  EXPECT_THROW(fit_power_law(log_grid(100, 1000, 3, -1.0, 1.0), 100, 1000), InputError);
  const std::vector<std::pair<double, double>> same{{5, 1}, {5, 2}, {5, 3}, {5, 4}};
  EXPECT_THROW(fit_power_law(same, 1, 10), InputError);
}

TEST(MeanStderr, Values) {
  const std::vector<double> one{4.0};
  EXPECT_EQ(mean_stderr(one).mean, 4.0);
  EXPECT_EQ(mean_stderr(one).error, 0.0);
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const auto m = mean_stderr(xs);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  // sample sd sqrt(5/3), divided by sqrt(4)
  EXPECT_NEAR(m.error, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_EQ(m.n, 4U);
  EXPECT_EQ(mean_stderr(std::vector<double>{}).n, 0U);
}

TEST(CoefficientOfVariation, Values) {
  const std::vector<double> flat{2.0, 2.0, 2.0};
  EXPECT_EQ(coefficient_of_variation(flat), 0.0);
  const std::vector<double> xs{1.0, 3.0};
  EXPECT_NEAR(coefficient_of_variation(xs), std::sqrt(2.0) / 2.0, 1e-15);
}

TEST(Spearman, KnownValues) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> up{10, 20, 30, 40, 50}, down{5, 4, 3, 2, 1};
  EXPECT_NEAR(spearman(x, up), 1.0, 1e-15);
  EXPECT_NEAR(spearman(x, down), -1.0, 1e-15);
  // textbook example: d^2 sum = 2 for a single adjacent swap, rho = 1 - 6*2/(5*24) = 0.9
  const std::vector<double> swap{1, 2, 3, 5, 4};
  EXPECT_NEAR(spearman(x, swap), 0.9, 1e-12);
  const std::vector<double> flat{1, 1, 1, 1, 1};
  EXPECT_EQ(spearman(x, flat), 0.0);
  EXPECT_THROW(spearman(x, std::vector<double>{1, 2}), InputError);
}

TEST(AverageRanks, Ties) {
  const std::vector<double> x{10, 20, 20, 5};
  EXPECT_EQ(average_ranks(x), (std::vector<double>{2.0, 3.5, 3.5, 1.0}));
}
