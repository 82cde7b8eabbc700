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

#include "smartmarket/lipschitz.h"

#include <algorithm>
#include <cmath>

#include "smartmarket/errors.h"
#include "smartmarket/normal.h"
#include "smartmarket/wasserstein.h"

namespace smartmarket {

namespace {

Distribution AsDistribution(const DemandModel& demand) {
  return std::visit([](const auto& d) -> Distribution { return d; }, demand);
}

}  // namespace

double GlobalK(double k_f, const MarketPrices& prices) {
  if (!(k_f > 0.0)) throw DomainError("forecaster Lipschitz constant must be > 0");
  return 2.0 * k_f * prices.max_imbalance_cost();
}

double KantorovichConstant(const MarketPrices& prices) {
  return std::max(std::abs(prices.retail() - prices.underage_cost()),
                  prices.retail() + prices.overage_cost());
}

EmpiricalK EstimateEmpiricalK(std::span<const DemandModel> distributions,
                              const MarketPrices& prices) {
  if (distributions.size() < 2) {
    throw DomainError("empirical K needs at least two distributions");
  }
  std::vector<double> bids;
  std::vector<Distribution> as_dist;
  for (const DemandModel& d : distributions) {
    bids.push_back(OptimalBid(d, prices));
    as_dist.push_back(AsDistribution(d));
  }
  EmpiricalK out;
  double sum = 0.0;
  for (std::size_t i = 0; i < distributions.size(); ++i) {
    for (std::size_t j = 0; j < distributions.size(); ++j) {
      if (i == j) continue;
      const double distance = W1(as_dist[i], as_dist[j]);
      if (!(distance > 1e-12)) continue;
      const double regret = ExpectedProfit(bids[j], distributions[j], prices) -
                            ExpectedProfit(std::max(bids[i], 0.0), distributions[j], prices);
      const double ratio = std::abs(regret) / distance;
      out.max_ratio = std::max(out.max_ratio, ratio);
      sum += ratio;
      ++out.pairs;
    }
  }
  if (out.pairs == 0) throw DomainError("all pairwise distances are zero");
  out.mean_ratio = sum / out.pairs;
  return out;
}

double LocalKGaussian(const MarketPrices& prices, double sigma_d, double xi) {
  if (!(sigma_d > 0.0)) throw DomainError("demand stddev must be > 0");
  if (!(xi >= 0.0)) throw DomainError("radius xi must be >= 0");
  if (xi == 0.0) return 0.0;
  const double u = prices.underage_cost();
  const double o = prices.overage_cost();
  const double z = NormalQuantile(u / (u + o));
  const double r = xi / sigma_d;
  const double below = u - (u + o) * NormalCdf(z - r);
  const double above = o - (u + o) * NormalCdf(-z - r);
  double k;
  if (u > o) {
    k = below;
  } else if (u < o) {
    k = above;
  } else {
    k = std::max(below, above);
  }
  return std::clamp(k, 0.0, std::max(u, o));
}

BoundCurves ComputeBoundCurves(const MarketPrices& prices, const GaussianDist& demand,
                               std::span<const double> bids, double xi) {
  const DemandModel model{demand};
  ValidateDemand(model);
  BoundCurves out;
  out.optimal_bid = OptimalBid(model, prices);
  out.k_max = prices.max_imbalance_cost();
  out.k_global = 2.0 * out.k_max;
  out.k_local = LocalKGaussian(prices, demand.stddev, xi);
  const double best = ExpectedProfit(out.optimal_bid, model, prices);
  for (double q : bids) {
    BoundPoint p;
    p.bid = q;
    p.deviation = q - out.optimal_bid;
    p.loss = best - ExpectedProfit(q, model, prices);
    const double gap = std::abs(p.deviation);
    if (gap > 0.0 && gap <= xi) out.k_actual = std::max(out.k_actual, p.loss / gap);
    out.points.push_back(p);
  }
  for (BoundPoint& p : out.points) {
    const double gap = std::abs(p.deviation);
    p.bound_global = out.k_global * gap;
    p.bound_max = out.k_max * gap;
    p.bound_local = out.k_local * gap;
    p.bound_actual = out.k_actual * gap;
  }
  return out;
}

}  // namespace smartmarket
