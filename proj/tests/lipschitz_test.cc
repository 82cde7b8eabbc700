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


#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "smartmarket/errors.h"
#include "smartmarket/lipschitz.h"
#include "smartmarket/newsvendor.h"

namespace smartmarket {
namespace {

TEST(LipschitzTest, GlobalAndKantorovichConstants) {
  const MarketPrices p(0.20, 0.05, 0.02, 0.12);
  EXPECT_NEAR(GlobalK(1.0, p), 0.14, 1e-15);
  EXPECT_NEAR(GlobalK(0.5, p), 0.07, 1e-15);
  EXPECT_NEAR(KantorovichConstant(p), std::max(std::abs(0.2 - 0.07), 0.2 + 0.03), 1e-15);
  EXPECT_THROW(GlobalK(0.0, p), DomainError);
}

TEST(LipschitzTest, LocalKLimits) {
  const MarketPrices p(0.20, 0.05, 0.02, 0.12);  // underage 0.07 > overage 0.03
  EXPECT_NEAR(LocalKGaussian(p, 3.0, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(LocalKGaussian(p, 3.0, 1e6), p.underage_cost(), 1e-12);
  const MarketPrices q(0.20, 0.10, 0.02, 0.12);  // underage 0.02 < overage 0.08
  EXPECT_NEAR(LocalKGaussian(q, 3.0, 1e6), q.overage_cost(), 1e-12);
  EXPECT_THROW(LocalKGaussian(p, 0.0, 1.0), DomainError);
  EXPECT_THROW(LocalKGaussian(p, 1.0, -1.0), DomainError);
}

TEST(LipschitzTest, LocalKNonincreasingInSigmaAndNondecreasingInXi) {
  const MarketPrices p(0.20, 0.05, 0.02, 0.12);
  double previous = INFINITY;
  for (double s = 0.1; s < 50.0; s *= 1.3) {
    const double k = LocalKGaussian(p, s, 2.0);
    EXPECT_LE(k, previous + 1e-15);
    previous = k;
  }
  previous = 0.0;
  for (double xi = 0.0; xi < 30.0; xi += 0.25) {
    const double k = LocalKGaussian(p, 4.0, xi);
    EXPECT_GE(k + 1e-15, previous);
    previous = k;
  }
}

TEST(LipschitzTest, LocalKBoundsLossOnDenseGrid) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double sell = 0.3 * u(rng);
    const double wholesale = sell + u(rng);
    const MarketPrices p(u(rng), wholesale, sell, wholesale + u(rng));
    const GaussianDist d{50.0, 1.0 + 10.0 * u(rng)};
    const double xi = 3.0 * d.stddev * u(rng);
    const double k = LocalKGaussian(p, d.stddev, xi);
    const double q_star = OptimalBid(d, p);
    const double best = ExpectedProfit(q_star, d, p);
    for (int i = -200; i <= 200; ++i) {
      const double q = q_star + xi * i / 200.0;
      EXPECT_LE(best - ExpectedProfit(q, d, p), k * std::abs(q - q_star) + 1e-9);
    }
  }
}

TEST(LipschitzTest, BoundCurvesOrdering) {
  const MarketPrices p(0.20, 0.05, 0.02, 0.12);
  const GaussianDist d{100.0, 10.0};
  std::vector<double> bids;
  for (int i = 0; i <= 200; ++i) bids.push_back(70.0 + 0.3 * i);
  const BoundCurves c = ComputeBoundCurves(p, d, bids, 10.0);
  EXPECT_GT(c.k_actual, 0.0);
  EXPECT_LE(c.k_actual, c.k_local + 1e-12);
  EXPECT_LE(c.k_local, c.k_max);
  EXPECT_NEAR(c.k_max, p.underage_cost(), 1e-15);
  EXPECT_NEAR(c.k_global, 2.0 * c.k_max, 1e-15);
  for (const BoundPoint& b : c.points) {
    EXPECT_GE(b.loss, -1e-12);
    EXPECT_LE(b.loss, b.bound_max + 1e-12);
    EXPECT_LE(b.bound_max, b.bound_global);
    if (std::abs(b.deviation) <= 10.0) {
      EXPECT_LE(b.loss, b.bound_local + 1e-12);
    }
  }
}

TEST(EmpiricalKTest, PointMassesGiveImbalanceCosts) {
  const MarketPrices p(0.20, 0.05, 0.02, 0.12);
  const std::vector<DemandModel> d = {EmpiricalDist({2.0}, {1.0}), EmpiricalDist({5.0}, {1.0})};
  const EmpiricalK k = EstimateEmpiricalK(d, p);
  EXPECT_EQ(k.pairs, 2);
  // Bidding 2 against 5 loses underage * 3; bidding 5 against 2 loses overage * 3.
  EXPECT_NEAR(k.max_ratio, p.underage_cost(), 1e-12);
  EXPECT_NEAR(k.mean_ratio, 0.5 * (p.underage_cost() + p.overage_cost()), 1e-12);
}

TEST(EmpiricalKTest, ShiftedGaussiansStayBelowMaxCost) {
  const MarketPrices p(0.20, 0.05, 0.02, 0.12);
  std::vector<DemandModel> d;
  for (double m : {10.0, 12.0, 15.0, 30.0}) d.push_back(GaussianDist{m, 3.0});
  const EmpiricalK k = EstimateEmpiricalK(d, p);
  EXPECT_EQ(k.pairs, 12);
  EXPECT_LE(k.max_ratio, p.max_imbalance_cost() + 1e-12);
  EXPECT_GT(k.mean_ratio, 0.0);
}

TEST(EmpiricalKTest, Errors) {
  const MarketPrices p(0.20, 0.05, 0.02, 0.12);
  const std::vector<DemandModel> one = {GaussianDist{1.0, 1.0}};
  EXPECT_THROW(EstimateEmpiricalK(one, p), DomainError);
  const std::vector<DemandModel> same = {GaussianDist{1.0, 1.0}, GaussianDist{1.0, 1.0}};
  EXPECT_THROW(EstimateEmpiricalK(same, p), DomainError);
}

}  // namespace
}  // namespace smartmarket
