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

#ifndef SMARTMARKET_DP_MECHANISM_H_
#define SMARTMARKET_DP_MECHANISM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smartmarket/cs1_types.h"
#include "smartmarket/distributions.h"

namespace smartmarket {

// How the population's total DP noise variance is split among consumers.
enum class AllocationScenario {
  kCorr,  // proportional to scheduled-load variance
  kInv,   // inversely proportional to scheduled-load variance
  kUni,   // equal shares
  kRand,  // seeded random shares
};

inline constexpr AllocationScenario kAllScenarios[] = {
    AllocationScenario::kCorr, AllocationScenario::kInv,
    AllocationScenario::kUni, AllocationScenario::kRand};

std::string_view ScenarioName(AllocationScenario scenario);
// Accepts corr|inv|uni|rand (case-insensitive). Throws ConfigError.
AllocationScenario ParseScenario(std::string_view name);

struct PrivacyProfile {
  // Privacy loss per consumer; metadata only (the case studies drive noise
  // through the multiplier). Empty when not computed.
  std::vector<double> epsilon;
  std::vector<double> dp_sigma;
  double noise_multiplier = 0.0;
};

// Per-consumer DP noise stddevs whose variances sum to
// gamma * sum(scheduled_sigma^2). Throws DomainError for gamma < 0 or a
// non-positive scheduled sigma.
std::vector<double> AllocateNoise(std::span<const double> scheduled_sigmas,
                                  double gamma, AllocationScenario scenario,
                                  std::uint64_t seed);

PrivacyProfile MakePrivacyProfile(std::span<const double> scheduled_sigmas,
                                  double gamma, AllocationScenario scenario,
                                  std::uint64_t seed);

// Independent zero-mean Gaussian draws, `draws` per consumer, with the
// profile's stddevs. Row i holds consumer i's draws. Deterministic in seed.
std::vector<std::vector<double>> GaussianMechanismNoise(
    const PrivacyProfile& profile, std::uint64_t seed, std::size_t draws = 1);

// Analytic Gaussian mechanism: the delta achieved by noise stddev `sigma` at
// privacy loss `epsilon` for the given L2 sensitivity.
double GaussianMechanismDelta(double epsilon, double sigma, double l2_sensitivity);

// Smallest stddev achieving (epsilon, delta)-DP, by bisection on
// GaussianMechanismDelta. Relative accuracy 1e-9.
double GaussianMechanismSigma(double epsilon, double delta, double l2_sensitivity);

// Inverse of the above: the epsilon certified by `sigma` at `delta`. Returns
// +inf for sigma == 0.
double GaussianMechanismEpsilon(double sigma, double delta, double l2_sensitivity);

// Retailer forecast when scheduled loads of `coalition` have been bought with
// DP noise:
//   mean     = sum mu_u + sum_{not C} mu_s + sum_{C} l_s
//   variance = sum sigma_u^2 + sum_{not C} sigma_s^2 + sum_{C} sigma_dp^2
// A null profile means noiseless data.
GaussianDist DpForecast(ConsumerMask coalition, const Cs1Population& population,
                        const PrivacyProfile* profile);

}  // namespace smartmarket

#endif  // SMARTMARKET_DP_MECHANISM_H_
