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

#ifndef SMARTMARKET_NEWSVENDOR_H_
#define SMARTMARKET_NEWSVENDOR_H_

#include "smartmarket/distributions.h"

namespace smartmarket {

// Retail tariff, day-ahead wholesale price and the two balancing prices, all
// in currency/kWh. Construction enforces
//   balance_buy > wholesale > balance_sell >= 0
// so that both imbalance costs are strictly positive.
class MarketPrices {
 public:
  MarketPrices(double retail, double wholesale, double balance_sell,
               double balance_buy);

  double retail() const { return retail_; }
  double wholesale() const { return wholesale_; }
  double balance_sell() const { return balance_sell_; }
  double balance_buy() const { return balance_buy_; }

  // Cost per kWh of buying short in the balancing market.
  double underage_cost() const { return balance_buy_ - wholesale_; }
  // Cost per kWh of reselling surplus.
  double overage_cost() const { return wholesale_ - balance_sell_; }

  double max_imbalance_cost() const;

 private:
  double retail_;
  double wholesale_;
  double balance_sell_;
  double balance_buy_;
};

// underage / (underage + overage), in (0, 1).
double CriticalFractile(const MarketPrices& prices);

// tau-quantile of the demand model (left-continuous for empirical demand).
double DemandQuantile(const DemandModel& demand, double tau);

// Profit-maximizing day-ahead bid: the critical-fractile quantile of demand.
double OptimalBid(const DemandModel& demand, const MarketPrices& prices);

// Profit for one realized demand value:
//   retail * d - underage * (d - q)^+ - overage * (q - d)^+
double RealizedProfit(double bid, double demand, const MarketPrices& prices);

// Expected shortfall E[D - q]^+ and expected surplus E[q - D]^+.
double ExpectedShortfall(double bid, const DemandModel& demand);
double ExpectedSurplus(double bid, const DemandModel& demand);

// Expected profit of bidding `bid` (>= 0) against `demand`. Gaussian demand
// uses the standard-normal loss function; empirical demand is a weighted sum.
double ExpectedProfit(double bid, const DemandModel& demand,
                      const MarketPrices& prices);

// d/dq of ExpectedProfit for Gaussian demand:
//   underage - (underage + overage) * Phi((q - mean) / stddev)
double ProfitGradientGaussian(double bid, const GaussianDist& demand,
                              const MarketPrices& prices);

}  // namespace smartmarket

#endif  // SMARTMARKET_NEWSVENDOR_H_
