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

#include "smartmarket/cs1_population.h"

#include <numeric>
#include <random>

#include "smartmarket/errors.h"

namespace smartmarket {

Cs1PopulationConfig DefaultCs1PopulationConfig() {
  Cs1PopulationConfig config;
  config.scheduled_share = {0.15, 0.25, 0.45, 0.20, 0.35, 0.30, 0.40, 0.10};
  config.scheduled_cv = 0.35;
  config.unscheduled_cv = 0.08;
  config.load_scale = 750.0;
  config.fallback_mean_load = {180, 240, 310, 150, 270, 200, 330, 220};
  return config;
}

Cs1Population GeneratePopulation(int n,
                                 const std::vector<std::vector<double>>* profiles,
                                 const Cs1PopulationConfig& config,
                                 std::uint64_t seed) {
  if (n < 1) throw DomainError("population size must be >= 1");
  if (config.scheduled_share.empty()) {
    throw ConfigError("scheduled_share table is empty");
  }
  if (!(config.scheduled_cv > 0.0) || !(config.unscheduled_cv > 0.0)) {
    throw ConfigError("scheduled_cv and unscheduled_cv must be > 0");
  }
  const bool use_profiles =
      profiles != nullptr && profiles->size() >= static_cast<std::size_t>(n);
  if (!use_profiles && config.fallback_mean_load.empty()) {
    throw ConfigError("no load profiles and no fallback mean-load table");
  }

  Cs1Population population(n);
  for (int i = 0; i < n; ++i) {
    double mean_load = 0.0;
    if (use_profiles) {
      const auto& p = (*profiles)[i];
      if (p.empty()) throw DomainError("empty load profile for consumer " + std::to_string(i));
      mean_load = config.load_scale * std::accumulate(p.begin(), p.end(), 0.0) /
                  static_cast<double>(p.size());
    } else {
      mean_load = config.fallback_mean_load[i % config.fallback_mean_load.size()];
    }
    const double share = config.scheduled_share[i % config.scheduled_share.size()];
    if (!(share > 0.0 && share < 1.0)) {
      throw ConfigError("scheduled share must lie in (0, 1)");
    }
    Cs1Consumer& c = population[i];
    c.scheduled_mean = share * mean_load;
    c.unscheduled_mean = (1.0 - share) * mean_load;
    c.scheduled_sigma = config.scheduled_cv * c.scheduled_mean;
    c.unscheduled_sigma = config.unscheduled_cv * c.unscheduled_mean;

    std::seed_seq seq{seed, static_cast<std::uint64_t>(i), std::uint64_t{0x637331}};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> draw(c.scheduled_mean, c.scheduled_sigma);
    c.realized_scheduled = draw(rng);
  }
  return population;
}

GaussianDist ForecastFor(ConsumerMask coalition, const Cs1Population& population,
                         const PrivacyProfile* profile) {
  return DpForecast(coalition, population, profile);
}

std::vector<double> ScheduledSigmas(const Cs1Population& population) {
  std::vector<double> sigmas;
  sigmas.reserve(population.size());
  for (const auto& c : population) sigmas.push_back(c.scheduled_sigma);
  return sigmas;
}

}  // namespace smartmarket
