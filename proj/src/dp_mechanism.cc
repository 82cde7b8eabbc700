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

#include "smartmarket/dp_mechanism.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "smartmarket/errors.h"
#include "smartmarket/normal.h"

namespace smartmarket {

namespace {

constexpr double kBisectionRelativeAccuracy = 1e-9;

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

// e^a * Phi(x) without overflowing for large a.
double ExpTimesCdf(double a, double x) {
  const double cdf = NormalCdf(x);
  if (cdf == 0.0) return 0.0;
  return std::exp(a + std::log(cdf));
}

}  // namespace

std::string_view ScenarioName(AllocationScenario scenario) {
  switch (scenario) {
    case AllocationScenario::kCorr:
      return "corr";
    case AllocationScenario::kInv:
      return "inv";
    case AllocationScenario::kUni:
      return "uni";
    case AllocationScenario::kRand:
      return "rand";
  }
  return "unknown";
}

AllocationScenario ParseScenario(std::string_view name) {
  const std::string n = Lower(name);
  for (AllocationScenario s : kAllScenarios) {
    if (n == ScenarioName(s)) return s;
  }
  throw ConfigError("unknown allocation scenario '" + std::string(name) +
                    "' (expected corr, inv, uni or rand)");
}

std::vector<double> AllocateNoise(std::span<const double> scheduled_sigmas,
                                  double gamma, AllocationScenario scenario,
                                  std::uint64_t seed) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw DomainError("noise multiplier must be finite and >= 0");
  }
  for (double s : scheduled_sigmas) {
    if (!(s > 0.0)) throw DomainError("scheduled-load stddevs must be > 0");
  }
  const std::size_t n = scheduled_sigmas.size();
  std::vector<double> shares(n, 0.0);
  switch (scenario) {
    case AllocationScenario::kCorr:
      for (std::size_t i = 0; i < n; ++i) {
        shares[i] = scheduled_sigmas[i] * scheduled_sigmas[i];
      }
      break;
    case AllocationScenario::kInv:
      for (std::size_t i = 0; i < n; ++i) {
        shares[i] = 1.0 / (scheduled_sigmas[i] * scheduled_sigmas[i]);
      }
      break;
    case AllocationScenario::kUni:
      std::fill(shares.begin(), shares.end(), 1.0);
      break;
    case AllocationScenario::kRand: {
      std::seed_seq seq{seed, std::uint64_t{0x6e6f697365}};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      // Shifted away from zero so the normalization is always defined.
      for (double& s : shares) s = unit(rng) + 1e-12;
      break;
    }
  }
  double total_variance = 0.0;
  for (double s : scheduled_sigmas) total_variance += s * s;
  const double budget = gamma * total_variance;
  const double share_sum = std::accumulate(shares.begin(), shares.end(), 0.0);
  std::vector<double> sigmas(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    sigmas[i] = std::sqrt(budget * shares[i] / share_sum);
  }
  return sigmas;
}

PrivacyProfile MakePrivacyProfile(std::span<const double> scheduled_sigmas,
                                  double gamma, AllocationScenario scenario,
                                  std::uint64_t seed) {
  PrivacyProfile profile;
  profile.noise_multiplier = gamma;
  profile.dp_sigma = AllocateNoise(scheduled_sigmas, gamma, scenario, seed);
  return profile;
}

std::vector<std::vector<double>> GaussianMechanismNoise(
    const PrivacyProfile& profile, std::uint64_t seed, std::size_t draws) {
  std::vector<std::vector<double>> noise(profile.dp_sigma.size(),
                                         std::vector<double>(draws, 0.0));
  for (std::size_t i = 0; i < profile.dp_sigma.size(); ++i) {
    const double sigma = profile.dp_sigma[i];
    if (!(sigma >= 0.0)) throw DomainError("DP noise stddev must be >= 0");
    if (sigma == 0.0) continue;
    std::seed_seq seq{seed, static_cast<std::uint64_t>(i)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, sigma);
    for (double& v : noise[i]) v = normal(rng);
  }
  return noise;
}

double GaussianMechanismDelta(double epsilon, double sigma, double l2_sensitivity) {
  if (!(sigma > 0.0) || !(l2_sensitivity > 0.0) || !(epsilon >= 0.0)) {
    throw DomainError("Gaussian mechanism needs sigma > 0, sensitivity > 0, epsilon >= 0");
  }
  const double a = l2_sensitivity / (2.0 * sigma);
  const double b = epsilon * sigma / l2_sensitivity;
  return NormalCdf(a - b) - ExpTimesCdf(epsilon, -a - b);
}

double GaussianMechanismSigma(double epsilon, double delta, double l2_sensitivity) {
  if (!(epsilon > 0.0) || !(delta > 0.0 && delta < 1.0) || !(l2_sensitivity > 0.0)) {
    throw DomainError("Gaussian mechanism needs epsilon > 0, delta in (0,1), sensitivity > 0");
  }
  double lo = l2_sensitivity * 1e-6;
  double hi = l2_sensitivity;
  while (GaussianMechanismDelta(epsilon, hi, l2_sensitivity) > delta) hi *= 2.0;
  while (GaussianMechanismDelta(epsilon, lo, l2_sensitivity) <= delta && lo > 1e-300) {
    lo *= 0.5;
  }
  while (hi - lo > kBisectionRelativeAccuracy * lo) {
    const double mid = 0.5 * (lo + hi);
    if (GaussianMechanismDelta(epsilon, mid, l2_sensitivity) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double GaussianMechanismEpsilon(double sigma, double delta, double l2_sensitivity) {
  if (!(delta > 0.0 && delta < 1.0) || !(l2_sensitivity > 0.0) || !(sigma >= 0.0)) {
    throw DomainError("Gaussian mechanism needs delta in (0,1), sensitivity > 0");
  }
  if (sigma == 0.0) return std::numeric_limits<double>::infinity();
  if (GaussianMechanismDelta(0.0, sigma, l2_sensitivity) <= delta) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (GaussianMechanismDelta(hi, sigma, l2_sensitivity) > delta) hi *= 2.0;
  while (hi - lo > kBisectionRelativeAccuracy * std::max(hi, 1e-12)) {
    const double mid = 0.5 * (lo + hi);
    if (GaussianMechanismDelta(mid, sigma, l2_sensitivity) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

GaussianDist DpForecast(ConsumerMask coalition, const Cs1Population& population,
                        const PrivacyProfile* profile) {
  if (profile != nullptr && profile->dp_sigma.size() != population.size()) {
    throw DomainError("privacy profile size does not match population");
  }
  if (population.size() < 32 && (coalition >> population.size()) != 0) {
    throw DomainError("coalition refers to consumers outside the population");
  }
  double mean = 0.0;
  double variance = 0.0;
  for (std::size_t i = 0; i < population.size(); ++i) {
    const Cs1Consumer& c = population[i];
    mean += c.unscheduled_mean;
    variance += c.unscheduled_sigma * c.unscheduled_sigma;
    if (HasMember(coalition, static_cast<int>(i))) {
      mean += c.realized_scheduled;
      const double dp = profile ? profile->dp_sigma[i] : 0.0;
      variance += dp * dp;
    } else {
      mean += c.scheduled_mean;
      variance += c.scheduled_sigma * c.scheduled_sigma;
    }
  }
  return GaussianDist{mean, std::sqrt(variance)};
}

}  // namespace smartmarket
