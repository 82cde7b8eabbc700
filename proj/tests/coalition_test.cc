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
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "smartmarket/coalition.h"
#include "smartmarket/cs1_population.h"
#include "smartmarket/errors.h"
#include "smartmarket/wasserstein.h"

namespace smartmarket {
namespace {

std::vector<double> RandomGame(std::mt19937_64& rng, int players) {
  std::vector<double> v(std::size_t{1} << players);
  std::normal_distribution<double> z;
  for (std::size_t m = 1; m < v.size(); ++m) v[m] = z(rng);
  return v;
}

// Oracle: average marginal contribution over all n! orderings.
std::vector<double> PermutationShapley(const std::vector<double>& v, int players) {
  std::vector<int> order(players);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> phi(players, 0.0);
  double count = 0.0;
  do {
    std::uint32_t mask = 0;
    for (int i : order) {
      phi[i] += v[mask | (1u << i)] - v[mask];
      mask |= 1u << i;
    }
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& p : phi) p /= count;
  return phi;
}

TEST(ShapleyTest, MatchesPermutationOracle) {
  std::mt19937_64 rng(1);
  for (int players = 1; players <= 6; ++players) {
    const std::vector<double> v = RandomGame(rng, players);
    const std::vector<double> phi = Shapley(v, players);
    const std::vector<double> oracle = PermutationShapley(v, players);
    for (int i = 0; i < players; ++i) EXPECT_NEAR(phi[i], oracle[i], 1e-12);
  }
}

TEST(ShapleyTest, Axioms) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int players = 2 + trial % 5;
    const std::size_t count = std::size_t{1} << players;
    std::vector<double> v = RandomGame(rng, players);
    const std::vector<double> w = RandomGame(rng, players);
    // Efficiency.
    const std::vector<double> phi = Shapley(v, players);
    EXPECT_NEAR(std::accumulate(phi.begin(), phi.end(), 0.0), v[count - 1], 1e-9);
    // Linearity.
    std::vector<double> mix(count);
    for (std::size_t m = 0; m < count; ++m) mix[m] = 2.0 * v[m] - 0.5 * w[m];
    const std::vector<double> phi_w = Shapley(w, players);
    const std::vector<double> phi_mix = Shapley(mix, players);
    for (int i = 0; i < players; ++i) {
      EXPECT_NEAR(phi_mix[i], 2.0 * phi[i] - 0.5 * phi_w[i], 1e-9);
    }
    // Dummy: make player 0 contribute exactly c to every coalition.
    std::vector<double> dummy = v;
    const double c = 0.37;
    for (std::size_t m = 0; m < count; ++m) {
      if (m & 1u) dummy[m] = dummy[m & ~std::size_t{1}] + c;
    }
    EXPECT_NEAR(Shapley(dummy, players)[0], c, 1e-9);
    // Symmetry: a game depending only on coalition size.
    std::vector<double> sym(count);
    std::vector<double> by_size(players + 1);
    for (double& s : by_size) s = std::normal_distribution<double>()(rng);
    by_size[0] = 0.0;
    for (std::size_t m = 0; m < count; ++m) {
      sym[m] = by_size[std::popcount(static_cast<std::uint32_t>(m))];
    }
    const std::vector<double> phi_sym = Shapley(sym, players);
    for (int i = 1; i < players; ++i) EXPECT_NEAR(phi_sym[i], phi_sym[0], 1e-9);
  }
}

TEST(ShapleyTest, RejectsBadTables) {
  EXPECT_THROW(Shapley(std::vector<double>(7), 3), DomainError);
  EXPECT_THROW(Shapley(std::vector<double>(1), 0), DomainError);
}

TEST(ShapleyTest, ZeroClipAndMask) {
  EXPECT_EQ(ZeroClip(std::vector<double>{-1.0, 2.0, 0.0}), (std::vector<double>{0, 2, 0}));
  EXPECT_EQ(GameMask(Coalition{0b101, true}, 3), 0b1101u);
  EXPECT_EQ(GameMask(Coalition{0b101, false}, 3), 0b0101u);
}

class Cs1GameTest : public ::testing::Test {
 protected:
  Cs1GameTest()
      : population_(GeneratePopulation(5, nullptr, DefaultCs1PopulationConfig(), 4)),
        prices_(0.20, 0.05, 0.02, 0.12) {
    context_.population = &population_;
    context_.prices = prices_;
    reference_ = ComputeCs1Reference(population_, prices_);
    context_.k = reference_.calibrated_k;
    context_.c_sigma = 0.01;
    context_.confidence = 0.95;
  }

  double Profit(double bid, const GaussianDist& d) const {
    return ExpectedProfit(bid, DemandModel{d}, prices_);
  }
  double Bid(const GaussianDist& d) const { return OptimalBid(DemandModel{d}, prices_); }

  Cs1Population population_;
  MarketPrices prices_;
  ValuationContext context_;
  Cs1Reference reference_;
};

TEST_F(Cs1GameTest, KindsMatchHandFormulas) {
  const GaussianDist best = ForecastFor(0b11111, population_);
  const GaussianDist none = ForecastFor(0, population_);
  const ConsumerMask c = 0b01010;
  const GaussianDist dc = ForecastFor(c, population_);
  const double base = Profit(Bid(none), best);
  const double k = *context_.k;
  EXPECT_NEAR(CoalitionValue({c, true}, ValueKind::kDeltaPi, context_),
              Profit(Bid(dc), best) - base, 1e-9);
  EXPECT_NEAR(CoalitionValue({c, true}, ValueKind::kDeltaSigma, context_),
              0.01 * (none.stddev - dc.stddev), 1e-12);
  EXPECT_NEAR(CoalitionValue({c, true}, ValueKind::kDro, context_),
              Profit(Bid(dc), dc) - prices_.underage_cost() * W1(dc, best) - base, 1e-9);
  EXPECT_NEAR(CoalitionValue({c, true}, ValueKind::kWRef, context_), k * W1(none, dc), 1e-9);
  EXPECT_NEAR(CoalitionValue({c, true}, ValueKind::kWTarget, context_),
              std::max(0.0, reference_.gap - k * W1(best, dc)), 1e-9);
  const IndividualValues iv = Cs1IndividualValues(population_, nullptr);
  HoeffdingConfig h;
  h.confidence = 0.95;
  h.mode = PopulationMode::kInfinite;
  EXPECT_NEAR(CoalitionValue({c, true}, ValueKind::kWInf, context_),
              std::max(0.0, reference_.gap - k * HoeffdingBound(c, iv, h)), 1e-9);
  for (ValueKind kind : kAllValueKinds) {
    EXPECT_EQ(CoalitionValue({c, false}, kind, context_), 0.0);
  }
}

TEST_F(Cs1GameTest, EmptyAndGrandCoalitions) {
  EXPECT_NEAR(CoalitionValue({0, true}, ValueKind::kDeltaPi, context_), 0.0, 1e-12);
  EXPECT_NEAR(CoalitionValue({0b11111, true}, ValueKind::kDeltaPi, context_), reference_.gap,
              1e-9);
  // The calibrated K makes the retailer alone worth exactly nothing.
  EXPECT_NEAR(CoalitionValue({0, true}, ValueKind::kWTarget, context_), 0.0, 1e-9);
  EXPECT_NEAR(CoalitionValue({0, true}, ValueKind::kWFin, context_), 0.0, 1e-9);
  EXPECT_NEAR(CoalitionValue({0b11111, true}, ValueKind::kWTarget, context_), reference_.gap,
              1e-9);
  // FIN has no deviation term for the grand coalition.
  EXPECT_NEAR(CoalitionValue({0b11111, true}, ValueKind::kWFin, context_), reference_.gap,
              1e-9);
}

TEST_F(Cs1GameTest, FinDominatesInf) {
  const std::vector<double> fin = BuildGame(ValueKind::kWFin, context_);
  const std::vector<double> inf = BuildGame(ValueKind::kWInf, context_);
  for (std::size_t m = 0; m < fin.size(); ++m) EXPECT_GE(fin[m] + 1e-12, inf[m]);
}

TEST_F(Cs1GameTest, WassersteinGamesAreClipped) {
  context_.k = 50.0 * *context_.k;
  for (ValueKind kind : kAllValueKinds) {
    if (!IsWassersteinKind(kind)) continue;
    for (double v : BuildGame(kind, context_)) EXPECT_GE(v, 0.0);
  }
}

TEST_F(Cs1GameTest, WTargetIsBudgetBalancedAgainstDeltaPi) {
  const std::vector<double> truth = BuildGame(ValueKind::kDeltaPi, context_);
  const std::vector<double> w = BuildGame(ValueKind::kWTarget, context_);
  const std::vector<double> phi_t = Shapley(truth, 6);
  const std::vector<double> phi_w = Shapley(w, 6);
  const MechanismMetrics m = ComputeMechanismMetrics(phi_w, phi_t, w, truth, reference_.gap);
  EXPECT_NEAR(m.total_difference, 0.0, 1e-9);
  ASSERT_TRUE(m.correlation.has_value());
  EXPECT_GT(*m.correlation, 0.0);
}

TEST_F(Cs1GameTest, CustomDroBid) {
  context_.dro_bid = [](const GaussianDist& f, const MarketPrices&) { return f.mean; };
  const GaussianDist best = ForecastFor(0b11111, population_);
  const GaussianDist dc = ForecastFor(0b1, population_);
  const double base = Profit(Bid(ForecastFor(0, population_)), best);
  EXPECT_NEAR(CoalitionValue({0b1, true}, ValueKind::kDro, context_),
              Profit(dc.mean, dc) - prices_.underage_cost() * W1(dc, best) - base, 1e-9);
}

TEST_F(Cs1GameTest, UpperBoundPenaltyAddsNoiseDistance) {
  PrivacyProfile profile;
  profile.dp_sigma = {1.0, 2.0, 3.0, 4.0, 5.0};
  context_.privacy = &profile;
  context_.dp_penalty = DpPenalty::kUpperBound;
  const GaussianDist best = ForecastFor(0b11111, population_);
  const double w = W1(best, ForecastFor(0b00101, population_)) + NoiseDistance(1.0) +
                   NoiseDistance(3.0);
  EXPECT_NEAR(CoalitionValue({0b00101, true}, ValueKind::kWTarget, context_),
              std::max(0.0, reference_.gap - *context_.k * w), 1e-9);
  context_.dp_penalty = DpPenalty::kExact;
  EXPECT_NEAR(CoalitionValue({0b00101, true}, ValueKind::kWTarget, context_),
              std::max(0.0, reference_.gap -
                                *context_.k * W1(best, ForecastFor(0b00101, population_,
                                                                   &profile))),
              1e-9);
}

TEST_F(Cs1GameTest, MissingContextIsConfigError) {
  ValuationContext bare;
  bare.population = &population_;
  EXPECT_THROW(CoalitionValue({1, true}, ValueKind::kDeltaPi, bare), ConfigError);
  EXPECT_THROW(CoalitionValue({1, true}, ValueKind::kDeltaSigma, bare), ConfigError);
  bare.prices = prices_;
  EXPECT_THROW(CoalitionValue({1, true}, ValueKind::kWTarget, bare), ConfigError);
  bare.k = 1.0;
  EXPECT_THROW(CoalitionValue({1, true}, ValueKind::kWFin, bare), ConfigError);
  EXPECT_THROW(ParseValueKind("shapley"), ConfigError);
  EXPECT_EQ(ParseValueKind("W_FIN"), ValueKind::kWFin);
}

TEST_F(Cs1GameTest, NinePlayerPipelineIsFast) {
  const Cs1Population pop = GeneratePopulation(8, nullptr, DefaultCs1PopulationConfig(), 4);
  context_.population = &pop;
  const auto start = std::chrono::steady_clock::now();
  for (ValueKind kind : kAllValueKinds) {
    const std::vector<double> game = BuildGame(kind, context_);
    EXPECT_EQ(Shapley(game, 9).size(), 9u);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(seconds, 1.0);
}

TEST(MechanismMetricsTest, HandComputed) {
  // Two players: consumer 0 and the retailer (bit 1). Coalitions with the
  // retailer and a consumer: only mask 3.
  const std::vector<double> truth = {0, 0, 0.5, 2.0};
  const std::vector<double> cand = {0, 0, 0.0, -1.0};
  const MechanismMetrics m = ComputeMechanismMetrics(std::vector<double>{-0.5, -0.5},
                                                     std::vector<double>{0.75, 1.25},
                                                     cand, truth, 2.0);
  EXPECT_FALSE(m.correlation.has_value());
  EXPECT_DOUBLE_EQ(m.nonpositive_share, 1.0);
  EXPECT_DOUBLE_EQ(m.total_difference, -3.0);
  EXPECT_DOUBLE_EQ(m.misallocation, 1.25 + 1.75);
  EXPECT_DOUBLE_EQ(m.misallocation_fraction, 1.5);
  EXPECT_DOUBLE_EQ(m.retailer_share, 0.5);
}

TEST(MechanismMetricsTest, PearsonOverRetailerCoalitions) {
  // Three players (two consumers + retailer bit 2): masks 5, 6, 7.
  std::vector<double> truth(8, 0.0), cand(8, 0.0);
  truth[5] = 1; truth[6] = 2; truth[7] = 3;
  cand[5] = 2; cand[6] = 4; cand[7] = 6;
  cand[1] = 100;  // ignored: no retailer
  const std::vector<double> phi = {1, 1, 1};
  const MechanismMetrics m = ComputeMechanismMetrics(phi, phi, cand, truth, 1.0);
  ASSERT_TRUE(m.correlation.has_value());
  EXPECT_NEAR(*m.correlation, 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(m.nonpositive_share, 0.0);
}

}  // namespace
}  // namespace smartmarket
