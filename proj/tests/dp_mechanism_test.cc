// Copyright 2026 The Smartmarket Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "smartmarket/cs1_population.h"
#include "smartmarket/dp_mechanism.h"
#include "smartmarket/errors.h"
#include "smartmarket/normal.h"

namespace smartmarket {
namespace {

const std::vector<double> kSigmas = {1.0, 2.0, 0.5, 3.0};

double SumSquares(const std::vector<double>& v) {
  return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

TEST(AllocateNoiseTest, TotalVarianceFixedInEveryScenario) {
  for (AllocationScenario s : kAllScenarios) {
    for (double gamma : {0.0, 0.5, 2.0}) {
      const std::vector<double> dp = AllocateNoise(kSigmas, gamma, s, 9);
      EXPECT_NEAR(SumSquares(dp), gamma * SumSquares(kSigmas), 1e-12) << ScenarioName(s);
    }
  }
}

TEST(AllocateNoiseTest, ScenarioShapes) {
  const double g = 0.7;
  const auto corr = AllocateNoise(kSigmas, g, AllocationScenario::kCorr, 0);
  const auto inv = AllocateNoise(kSigmas, g, AllocationScenario::kInv, 0);
  const auto uni = AllocateNoise(kSigmas, g, AllocationScenario::kUni, 0);
  for (std::size_t i = 0; i < kSigmas.size(); ++i) {
    EXPECT_NEAR(corr[i], std::sqrt(g) * kSigmas[i], 1e-12);
    EXPECT_NEAR(uni[i], uni[0], 1e-15);
    // inv: sigma_dp_i sigma_s_i is the same for everyone.
    EXPECT_NEAR(inv[i] * kSigmas[i], inv[0] * kSigmas[0], 1e-12);
  }
}

TEST(AllocateNoiseTest, RandomIsSeeded) {
  const auto a = AllocateNoise(kSigmas, 1.0, AllocationScenario::kRand, 3);
  EXPECT_EQ(a, AllocateNoise(kSigmas, 1.0, AllocationScenario::kRand, 3));
  EXPECT_NE(a, AllocateNoise(kSigmas, 1.0, AllocationScenario::kRand, 4));
}

TEST(AllocateNoiseTest, Errors) {
  EXPECT_THROW(AllocateNoise(kSigmas, -0.1, AllocationScenario::kUni, 0), DomainError);
  EXPECT_THROW(AllocateNoise(std::vector<double>{1.0, 0.0}, 1.0, AllocationScenario::kUni, 0),
               DomainError);
  EXPECT_THROW(ParseScenario("both"), ConfigError);
  EXPECT_EQ(ParseScenario("INV"), AllocationScenario::kInv);
}

// Oracle: delta = integral of (p(x) - e^eps q(x))^+ for p = N(0, s^2),
// q = N(d, s^2), by the trapezoid rule.
double DeltaByQuadrature(double eps, double s, double d) {
  const double lo = -40.0 * s, hi = d + 40.0 * s;
  const int steps = 400000;
  const double h = (hi - lo) / steps;
  double sum = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double x = lo + i * h;
    const double p = NormalPdf(x / s) / s;
    const double q = NormalPdf((x - d) / s) / s;
    sum += (i == 0 || i == steps ? 0.5 : 1.0) * std::max(0.0, p - std::exp(eps) * q);
  }
  return sum * h;
}

TEST(GaussianMechanismTest, DeltaMatchesQuadrature) {
  for (auto [eps, s] : {std::pair{0.5, 1.0}, {1.0, 2.0}, {2.0, 0.7}, {0.1, 5.0}}) {
    EXPECT_NEAR(GaussianMechanismDelta(eps, s, 1.0), DeltaByQuadrature(eps, s, 1.0), 1e-8);
  }
}

TEST(GaussianMechanismTest, SigmaAndEpsilonInvert) {
  for (double eps : {0.1, 1.0, 4.0}) {
    for (double delta : {1e-5, 1e-3}) {
      const double s = GaussianMechanismSigma(eps, delta, 2.0);
      EXPECT_NEAR(GaussianMechanismDelta(eps, s, 2.0), delta, 1e-6 * delta);
      EXPECT_NEAR(GaussianMechanismEpsilon(s, delta, 2.0), eps, 1e-6 * eps);
    }
  }
  EXPECT_EQ(GaussianMechanismEpsilon(0.0, 1e-5, 1.0), INFINITY);
  // More privacy needs more noise.
  EXPECT_GT(GaussianMechanismSigma(0.5, 1e-5, 1.0), GaussianMechanismSigma(1.0, 1e-5, 1.0));
}

TEST(GaussianMechanismTest, NoiseHasProfileMoments) {
  PrivacyProfile profile;
  profile.dp_sigma = {0.0, 1.5, 4.0};
  const auto noise = GaussianMechanismNoise(profile, 17, 200000);
  EXPECT_EQ(noise, GaussianMechanismNoise(profile, 17, 200000));
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& v = noise[i];
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    const double var = SumSquares(v) / v.size() - mean * mean;
    const double s = profile.dp_sigma[i];
    EXPECT_NEAR(mean, 0.0, 5.0 * s / std::sqrt(v.size()) + 1e-15);
    EXPECT_NEAR(std::sqrt(var), s, 0.01 * s + 1e-15);
  }
}

Cs1Population TwoConsumers() {
  Cs1Population pop(2);
  pop[0] = {10.0, 2.0, 30.0, 1.0, 12.0};
  pop[1] = {20.0, 3.0, 40.0, 2.0, 17.0};
  return pop;
}

TEST(DpForecastTest, HandComputed) {
  const Cs1Population pop = TwoConsumers();
  const GaussianDist none = DpForecast(0, pop, nullptr);
  EXPECT_NEAR(none.mean, 100.0, 1e-12);
  EXPECT_NEAR(none.stddev, std::sqrt(4.0 + 1.0 + 9.0 + 4.0), 1e-12);
  const GaussianDist first = DpForecast(0b01, pop, nullptr);
  EXPECT_NEAR(first.mean, 12.0 + 30.0 + 20.0 + 40.0, 1e-12);
  EXPECT_NEAR(first.stddev, std::sqrt(1.0 + 9.0 + 4.0), 1e-12);
  PrivacyProfile profile;
  profile.dp_sigma = {0.5, 7.0};
  const GaussianDist noisy = DpForecast(0b11, pop, &profile);
  EXPECT_NEAR(noisy.mean, 12.0 + 17.0 + 70.0, 1e-12);
  EXPECT_NEAR(noisy.stddev, std::sqrt(1.0 + 4.0 + 0.25 + 49.0), 1e-12);
}

TEST(PopulationTest, FallbackTable) {
  const Cs1PopulationConfig config = DefaultCs1PopulationConfig();
  const Cs1Population pop = GeneratePopulation(8, nullptr, config, 1);
  ASSERT_EQ(pop.size(), 8u);
  EXPECT_NEAR(pop[2].scheduled_mean, 0.45 * 310, 1e-12);
  EXPECT_NEAR(pop[2].unscheduled_mean, 0.55 * 310, 1e-12);
  EXPECT_NEAR(pop[2].scheduled_sigma, 0.35 * 0.45 * 310, 1e-12);
  EXPECT_NEAR(pop[2].unscheduled_sigma, 0.08 * 0.55 * 310, 1e-12);
  EXPECT_EQ(ScheduledSigmas(pop).size(), 8u);
  // Deterministic per seed.
  EXPECT_EQ(pop[5].realized_scheduled,
            GeneratePopulation(8, nullptr, config, 1)[5].realized_scheduled);
  EXPECT_NE(pop[5].realized_scheduled,
            GeneratePopulation(8, nullptr, config, 2)[5].realized_scheduled);
}

TEST(PopulationTest, ProfilesScaleMeans) {
  Cs1PopulationConfig config = DefaultCs1PopulationConfig();
  config.load_scale = 10.0;
  const std::vector<std::vector<double>> profiles = {{1.0, 3.0}, {4.0}};
  const Cs1Population pop = GeneratePopulation(2, &profiles, config, 1);
  EXPECT_NEAR(pop[0].scheduled_mean + pop[0].unscheduled_mean, 20.0, 1e-12);
  EXPECT_NEAR(pop[1].scheduled_mean + pop[1].unscheduled_mean, 40.0, 1e-12);
}

TEST(PopulationTest, Errors) {
  Cs1PopulationConfig config = DefaultCs1PopulationConfig();
  EXPECT_THROW(GeneratePopulation(0, nullptr, config, 1), DomainError);
  config.scheduled_share = {1.2};
  EXPECT_THROW(GeneratePopulation(2, nullptr, config, 1), ConfigError);
}

}  // namespace
}  // namespace smartmarket
