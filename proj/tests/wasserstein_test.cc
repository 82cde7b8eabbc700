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
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "smartmarket/errors.h"
#include "smartmarket/newsvendor.h"
#include "smartmarket/normal.h"
#include "smartmarket/wasserstein.h"

namespace smartmarket {
namespace {

// CDF of any supported distribution.
double Cdf(const Distribution& d, double x) {
  if (const auto* e = std::get_if<EmpiricalDist>(&d)) return e->Cdf(x);
  if (const auto* g = std::get_if<GaussianDist>(&d)) {
    if (g->stddev == 0.0) return x >= g->mean ? 1.0 : 0.0;
    return NormalCdf((x - g->mean) / g->stddev);
  }
  return x >= 0.0 ? 1.0 : 0.0;
}

// Oracle: integral over x of |F_a(x) - F_b(x)|. Exact for two step CDFs,
// otherwise Simpson's rule on each piece between consecutive atoms so no
// panel straddles a jump.
double CdfIntegral(const Distribution& a, const Distribution& b, double lo, double hi,
                   int steps) {
  std::vector<double> cuts = {lo, hi};
  for (const Distribution* d : {&a, &b}) {
    if (const auto* e = std::get_if<EmpiricalDist>(d)) {
      cuts.insert(cuts.end(), e->values().begin(), e->values().end());
    } else if (std::holds_alternative<DiracZero>(*d)) {
      cuts.push_back(0.0);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  auto f = [&](double x) { return std::abs(Cdf(a, x) - Cdf(b, x)); };
  const bool steps_only =
      !std::holds_alternative<GaussianDist>(a) && !std::holds_alternative<GaussianDist>(b);
  double sum = 0.0;
  if (steps_only) {
    // Both CDFs are constant between cuts.
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      sum += f(0.5 * (cuts[k] + cuts[k + 1])) * (cuts[k + 1] - cuts[k]);
    }
    return sum;
  }
  const int panels = std::max(2, steps / static_cast<int>(cuts.size()) / 2 * 2);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double x0 = cuts[k], x1 = cuts[k + 1];
    if (x1 <= x0) continue;
    // Evaluate just inside the piece so the CDF takes its interior value.
    const double eps = (x1 - x0) * 1e-12;
    const double h = (x1 - x0 - 2 * eps) / panels;
    double piece = f(x0 + eps) + f(x1 - eps);
    for (int i = 1; i < panels; ++i) piece += (i % 2 ? 4.0 : 2.0) * f(x0 + eps + i * h);
    sum += piece * h / 3.0;
  }
  return sum;
}

EmpiricalDist RandomEmpirical(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> z(std::uniform_real_distribution<double>(-2, 2)(rng),
                                     std::uniform_real_distribution<double>(0.3, 2)(rng));
  std::vector<double> v(n);
  for (double& x : v) x = z(rng);
  std::sort(v.begin(), v.end());
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) total += (x = std::uniform_real_distribution<double>(0.1, 1)(rng));
  for (double& x : w) x /= total;
  return EmpiricalDist(v, w);
}

TEST(W1Test, IdentityIsZero) {
  std::mt19937_64 rng(1);
  const EmpiricalDist e = RandomEmpirical(rng, 17);
  EXPECT_EQ(W1(e, e), 0.0);
  EXPECT_EQ(W1(GaussianDist{2.0, 3.0}, GaussianDist{2.0, 3.0}), 0.0);
  EXPECT_EQ(W1(DiracZero{}, DiracZero{}), 0.0);
}

TEST(W1Test, GaussianVersusDirac) {
  for (double s : {0.1, 1.0, 7.5}) {
    EXPECT_NEAR(W1(GaussianDist{0.0, s}, DiracZero{}), s * std::sqrt(2.0 / std::numbers::pi),
                1e-12);
    EXPECT_NEAR(NoiseDistance(s), s * std::sqrt(2.0 / std::numbers::pi), 1e-12);
  }
  // A shifted Dirac is a zero-stddev Gaussian.
  EXPECT_NEAR(W1(GaussianDist{3.0, 0.0}, DiracZero{}), 3.0, 1e-15);
}

TEST(W1Test, GaussianPairsMatchFoldedNormal) {
  EXPECT_NEAR(W1(GaussianDist{1.0, 2.0}, GaussianDist{1.0, 5.0}),
              3.0 * std::sqrt(2.0 / std::numbers::pi), 1e-12);
  EXPECT_NEAR(W1(GaussianDist{0.0, 1.0}, GaussianDist{4.0, 1.0}), 4.0, 1e-12);
}

TEST(W1Test, EmpiricalPairsMatchCdfIntegral) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const EmpiricalDist a = RandomEmpirical(rng, 1 + trial);
    const EmpiricalDist b = RandomEmpirical(rng, 3 + 2 * trial);
    const double lo = std::min(a.values().front(), b.values().front()) - 1;
    const double hi = std::max(a.values().back(), b.values().back()) + 1;
    EXPECT_NEAR(W1(a, b), CdfIntegral(a, b, lo, hi, 0), 1e-12);
  }
}

TEST(W1Test, GaussianEmpiricalMatchesCdfIntegral) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const EmpiricalDist e = RandomEmpirical(rng, 2 + 3 * trial);
    const GaussianDist g{std::uniform_real_distribution<double>(-1, 1)(rng),
                         std::uniform_real_distribution<double>(0.2, 2)(rng)};
    EXPECT_NEAR(W1(g, e), CdfIntegral(g, e, -25, 25, 400000), 1e-8);
    EXPECT_NEAR(W1(e, g), W1(g, e), 1e-14);
    EXPECT_NEAR(W1(e, DiracZero{}), CdfIntegral(e, DiracZero{}, -25, 25, 0), 1e-12);
  }
}

TEST(W1Test, MetricAxiomsOnRandomTriples) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Distribution> d;
    for (int k = 0; k < 3; ++k) {
      if (std::bernoulli_distribution(0.5)(rng)) {
        d.emplace_back(RandomEmpirical(rng, 1 + trial % 9));
      } else {
        d.emplace_back(GaussianDist{std::normal_distribution<double>()(rng),
                                    std::uniform_real_distribution<double>(0.1, 2)(rng)});
      }
    }
    const double ab = W1(d[0], d[1]), bc = W1(d[1], d[2]), ac = W1(d[0], d[2]);
    EXPECT_GE(ab, 0.0);
    EXPECT_NEAR(ab, W1(d[1], d[0]), 1e-9);
    EXPECT_LE(ac, ab + bc + 1e-9);
  }
}

TEST(W1Test, SamplesAreSortedDifferences) {
  const std::vector<double> a = {3, 1, 2}, b = {0, 5, 1};
  EXPECT_NEAR(W1Samples(a, b), (1.0 + 1.0 + 2.0) / 3.0, 1e-15);
  EXPECT_NEAR(W1Samples(a, b), W1(EmpiricalDist::FromSamples(a), EmpiricalDist::FromSamples(b)),
              1e-15);
  EXPECT_THROW(W1Samples(std::vector<double>{}, b), DomainError);
}

TEST(W1Test, RejectsBadGaussian) {
  EXPECT_THROW(W1(GaussianDist{0.0, -1.0}, DiracZero{}), DomainError);
  EXPECT_THROW(NoiseDistance(-1.0), DomainError);
}

TEST(W1Test, KantorovichBoundHolds) {
  std::mt19937_64 rng(5);
  const MarketPrices p(0.2, 0.05, 0.02, 0.12);
  const double k = std::max(std::abs(p.retail() - p.underage_cost()),
                            p.retail() + p.overage_cost());
  for (int trial = 0; trial < 50; ++trial) {
    const EmpiricalDist a = RandomEmpirical(rng, 30);
    const EmpiricalDist b = RandomEmpirical(rng, 25);
    const double q = std::abs(std::normal_distribution<double>()(rng));
    EXPECT_LE(std::abs(ExpectedProfit(q, a, p) - ExpectedProfit(q, b, p)),
              k * W1(a, b) + 1e-12);
  }
}

TEST(AggregateTest, TimeAlignedAverage) {
  const std::vector<std::vector<double>> s = {{1, 2, 3}, {3, 4, 5}};
  EXPECT_EQ(TimeAlignedAverage(s), (std::vector<double>{2, 3, 4}));
  EXPECT_THROW(TimeAlignedAverage(std::vector<std::vector<double>>{{1}, {1, 2}}), DomainError);
  EXPECT_THROW(TimeAlignedAverage(std::vector<std::vector<double>>{}), DomainError);
  EXPECT_NEAR(TargetAggregate(s).Mean(), 3.0, 1e-15);
}

TEST(AggregateTest, IndividualValueSumsTerms) {
  const EmpiricalDist c = EmpiricalDist::FromSamples(std::vector<double>{1, 2});
  const EmpiricalDist t = EmpiricalDist::FromSamples(std::vector<double>{2, 3});
  EXPECT_NEAR(IndividualValue(c, t, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(IndividualValue(c, t, 2.0, 0.5), 1.5 + NoiseDistance(2.0), 1e-15);
}

}  // namespace
}  // namespace smartmarket
