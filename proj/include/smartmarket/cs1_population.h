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

#ifndef SMARTMARKET_CS1_POPULATION_H_
#define SMARTMARKET_CS1_POPULATION_H_

#include <cstdint>
#include <vector>

#include "smartmarket/cs1_types.h"
#include "smartmarket/distributions.h"
#include "smartmarket/dp_mechanism.h"

namespace smartmarket {

// How load profiles are turned into Gaussian scheduled/unscheduled
// components. Row i of the tables is used for consumer i (cycled when the
// population is larger than the table).
struct Cs1PopulationConfig {
  // Fraction of each consumer's mean load that is scheduled (bought data).
  std::vector<double> scheduled_share;
  // Coefficients of variation of the scheduled and unscheduled components.
  double scheduled_cv = 0.0;
  double unscheduled_cv = 0.0;
  // Multiplier from per-meter profile averages to the modelled load.
  double load_scale = 1.0;
  // Mean load per consumer used when no profiles are supplied.
  std::vector<double> fallback_mean_load;
};

// Documented default table (8 consumers):
//
//   consumer        1    2    3    4    5    6    7    8
//   mean load     180  240  310  150  270  200  330  220   kWh / period
//   sched. share  .15  .25  .45  .20  .35  .30  .40  .10
//
// scheduled_cv = 0.35, unscheduled_cv = 0.08, load_scale = 750 (meters per
// archetype profile).
Cs1PopulationConfig DefaultCs1PopulationConfig();

// Builds `n` consumers. Means come from the average of each supplied profile
// times load_scale; when `profiles` is null or has fewer than n rows the
// fallback mean-load table is used instead. Realized scheduled loads are
// drawn from N(mu_s, sigma_s^2), one seeded stream per consumer.
Cs1Population GeneratePopulation(int n,
                                 const std::vector<std::vector<double>>* profiles,
                                 const Cs1PopulationConfig& config,
                                 std::uint64_t seed);

// D_C: the retailer's forecast after buying coalition C's scheduled loads.
GaussianDist ForecastFor(ConsumerMask coalition, const Cs1Population& population,
                         const PrivacyProfile* profile = nullptr);

std::vector<double> ScheduledSigmas(const Cs1Population& population);

}  // namespace smartmarket

#endif  // SMARTMARKET_CS1_POPULATION_H_
