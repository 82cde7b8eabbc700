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

#ifndef SMARTMARKET_WASSERSTEIN_H_
#define SMARTMARKET_WASSERSTEIN_H_

#include <span>
#include <variant>
#include <vector>

#include "smartmarket/distributions.h"

namespace smartmarket {

using Distribution = std::variant<EmpiricalDist, GaussianDist, DiracZero>;

// Wasserstein-1 distance between two univariate distributions,
//   W1(a, b) = integral over u in (0, 1) of |F_a^-1(u) - F_b^-1(u)|.
//
// All pairings are evaluated in closed form:
//  * empirical vs empirical walks the merged cumulative weights;
//  * Gaussian vs Gaussian (and Dirac) is E|dmu + dsigma Z|;
//  * Gaussian vs empirical integrates |mu + sigma z - v| phi(z) exactly over
//    each atom's quantile interval.
double W1(const Distribution& a, const Distribution& b);

// W1 between equal-size equal-weight samples: mean absolute difference of the
// sorted samples. Inputs need not be sorted.
double W1Samples(std::span<const double> a, std::span<const double> b);

// Distance of zero-mean Gaussian noise to a point mass at zero:
// dp_sigma * sqrt(2 / pi).
double NoiseDistance(double dp_sigma);

// Individual data value: W1(consumer, target) + NoiseDistance(dp_sigma) +
// concentration_slack. The slack term accounts for train/test discrepancy and
// defaults to zero.
double IndividualValue(const EmpiricalDist& consumer_train,
                       const EmpiricalDist& target_train, double dp_sigma,
                       double concentration_slack = 0.0);

// Time-aligned average of equal-length series (the aggregate load).
// Throws DomainError on empty input or mismatched lengths.
std::vector<double> TimeAlignedAverage(std::span<const std::vector<double>> series);

// Distribution of the time-aligned average load.
EmpiricalDist TargetAggregate(std::span<const std::vector<double>> series);

}  // namespace smartmarket

#endif  // SMARTMARKET_WASSERSTEIN_H_
