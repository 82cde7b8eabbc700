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

#ifndef SMARTMARKET_LIPSCHITZ_H_
#define SMARTMARKET_LIPSCHITZ_H_

#include <span>
#include <vector>

#include "smartmarket/distributions.h"
#include "smartmarket/newsvendor.h"

namespace smartmarket {

// 2 K_f max(underage, overage): worst-case profit change per unit of input
// Wasserstein distance for a K_f-Lipschitz bid forecaster.
double GlobalK(double k_f, const MarketPrices& prices);

// max(|retail - underage|, retail + overage): Lipschitz constant of realized
// profit in demand, hence of expected profit in W1 for a fixed bid.
double KantorovichConstant(const MarketPrices& prices);

struct EmpiricalK {
  double max_ratio = 0.0;
  // Mean ratio over the same pairs.
  double mean_ratio = 0.0;
  int pairs = 0;
};

// Ratios of decision regret Pi(q_j*, X_j) - Pi(q_i*, X_j) to W1(X_i, X_j)
// over ordered pairs with a positive distance. Throws DomainError for fewer
// than two distributions or when every pair is at distance zero.
EmpiricalK EstimateEmpiricalK(std::span<const DemandModel> distributions,
                              const MarketPrices& prices);

// Local Lipschitz constant of expected profit in the bid within radius xi of
// the optimum, for Gaussian demand with stddev sigma_d. Zero at xi = 0 and
// bounded by max(underage, overage).
double LocalKGaussian(const MarketPrices& prices, double sigma_d, double xi);

struct BoundPoint {
  double bid = 0.0;
  double deviation = 0.0;  // bid - q*
  double loss = 0.0;       // Pi(q*, D) - Pi(bid, D)
  double bound_global = 0.0;
  double bound_max = 0.0;
  double bound_local = 0.0;
  double bound_actual = 0.0;
};

struct BoundCurves {
  double optimal_bid = 0.0;
  double k_global = 0.0;  // 2 max(underage, overage)
  double k_max = 0.0;     // max(underage, overage)
  double k_local = 0.0;   // LocalKGaussian at xi
  // Largest loss / |q - q*| over grid points within xi of q*.
  double k_actual = 0.0;
  std::vector<BoundPoint> points;
};

// Loss of bidding away from the optimum and its linear bounds on `bids`.
BoundCurves ComputeBoundCurves(const MarketPrices& prices, const GaussianDist& demand,
                               std::span<const double> bids, double xi);

}  // namespace smartmarket

#endif  // SMARTMARKET_LIPSCHITZ_H_
