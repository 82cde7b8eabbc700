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

#include "smartmarket/newsvendor.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "smartmarket/errors.h"
#include "smartmarket/normal.h"

namespace smartmarket {

MarketPrices::MarketPrices(double retail, double wholesale, double balance_sell,
                           double balance_buy)
    : retail_(retail),
      wholesale_(wholesale),
      balance_sell_(balance_sell),
      balance_buy_(balance_buy) {
  const bool finite = std::isfinite(retail) && std::isfinite(wholesale) &&
                      std::isfinite(balance_sell) && std::isfinite(balance_buy);
  if (!finite || !(balance_buy > wholesale) || !(wholesale > balance_sell) ||
      !(balance_sell >= 0.0)) {
    throw DomainError(
        "market prices must satisfy balance_buy > wholesale > balance_sell >= 0");
  }
}

double MarketPrices::max_imbalance_cost() const {
  return std::max(underage_cost(), overage_cost());
}

double CriticalFractile(const MarketPrices& prices) {
  const double u = prices.underage_cost();
  const double o = prices.overage_cost();
  return u / (u + o);
}

double DemandQuantile(const DemandModel& demand, double tau) {
  ValidateDemand(demand);
  if (const auto* g = std::get_if<GaussianDist>(&demand)) {
    return g->mean + g->stddev * NormalQuantile(tau);
  }
  return std::get<EmpiricalDist>(demand).Quantile(tau);
}

double OptimalBid(const DemandModel& demand, const MarketPrices& prices) {
  return DemandQuantile(demand, CriticalFractile(prices));
}

double RealizedProfit(double bid, double demand, const MarketPrices& prices) {
  return prices.retail() * demand -
         prices.underage_cost() * std::max(demand - bid, 0.0) -
         prices.overage_cost() * std::max(bid - demand, 0.0);
}

double ExpectedShortfall(double bid, const DemandModel& demand) {
  ValidateDemand(demand);
  if (const auto* g = std::get_if<GaussianDist>(&demand)) {
    const double z = (bid - g->mean) / g->stddev;
    return g->stddev * (NormalPdf(z) - z * NormalSurvival(z));
  }
  const auto& e = std::get<EmpiricalDist>(demand);
  double total = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    total += e.weights()[i] * std::max(e.values()[i] - bid, 0.0);
  }
  return total;
}

double ExpectedSurplus(double bid, const DemandModel& demand) {
  ValidateDemand(demand);
  if (const auto* g = std::get_if<GaussianDist>(&demand)) {
    // (q - D)^+ = (D - q)^+ + q - D, mirrored so it stays accurate for q << mean.
    const double z = (g->mean - bid) / g->stddev;
    return g->stddev * (NormalPdf(z) - z * NormalSurvival(z));
  }
  const auto& e = std::get<EmpiricalDist>(demand);
  double total = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    total += e.weights()[i] * std::max(bid - e.values()[i], 0.0);
  }
  return total;
}

double ExpectedProfit(double bid, const DemandModel& demand,
                      const MarketPrices& prices) {
  if (!(bid >= 0.0)) {
    throw DomainError("bid must be nonnegative, got " + std::to_string(bid));
  }
  return prices.retail() * Mean(demand) -
         prices.underage_cost() * ExpectedShortfall(bid, demand) -
         prices.overage_cost() * ExpectedSurplus(bid, demand);
}

double ProfitGradientGaussian(double bid, const GaussianDist& demand,
                              const MarketPrices& prices) {
  ValidateDemand(demand);
  const double u = prices.underage_cost();
  const double o = prices.overage_cost();
  return u - (u + o) * NormalCdf((bid - demand.mean) / demand.stddev);
}

}  // namespace smartmarket
