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

#include "smartmarket/synthetic.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "smartmarket/errors.h"

namespace smartmarket {

namespace {

struct Archetype {
  double level;  // mean kWh per half hour
  double base;
  double morning;
  double evening;
  double daytime;
  double night;
  double weekend;  // relative change on Saturday/Sunday
};

constexpr std::array<Archetype, 8> kArchetypes = {{
    {0.30, 0.5, 0.6, 1.0, 0.1, 0.0, 0.10},
    {0.22, 0.6, 0.3, 0.8, 0.5, 0.0, -0.05},
    {0.45, 0.4, 0.4, 1.4, 0.2, 0.3, 0.15},
    {0.15, 0.7, 0.2, 0.5, 0.6, 0.0, 0.00},
    {0.35, 0.3, 0.5, 1.0, 0.0, 1.2, 0.05},
    {0.28, 0.5, 0.8, 1.1, 0.2, 0.1, 0.20},
    {0.40, 0.4, 0.3, 1.2, 0.4, 0.2, 0.10},
    {0.20, 0.6, 0.5, 0.7, 0.3, 0.5, 0.00},
}};

// Mixing weights of the archetype shapes in the reference, plus the weight of
// a commercial daytime block.
constexpr std::array<double, 8> kReferenceMix = {0.20, 0.05, 0.20, 0.05,
                                                 0.05, 0.15, 0.20, 0.10};
constexpr double kCommercialWeight = 0.7;

double Bump(double hour, double centre, double width) {
  const double d = (hour - centre) / width;
  return std::exp(-0.5 * d * d);
}

double Block(double hour, double from, double to) {
  const double rise = 1.0 / (1.0 + std::exp(-(hour - from) * 2.0));
  const double fall = 1.0 / (1.0 + std::exp((hour - to) * 2.0));
  return rise * fall;
}

// Daily shape normalized to mean 1.
std::array<double, 48> Shape(const Archetype& a) {
  std::array<double, 48> s{};
  double sum = 0.0;
  for (int p = 0; p < 48; ++p) {
    const double hour = (p + 0.5) / 2.0;
    s[p] = a.base + a.morning * Bump(hour, 7.5, 1.2) + a.evening * Bump(hour, 18.5, 2.0) +
           a.daytime * Block(hour, 9.0, 17.0) + a.night * Block(hour, 0.5, 6.0);
    sum += s[p];
  }
  for (double& v : s) v *= 48.0 / sum;
  return s;
}

}  // namespace

SyntheticData GenerateSynthetic(const SyntheticConfig& config) {
  if (config.consumers < 1 || config.days < 1) {
    throw DomainError("synthetic data needs at least one consumer and one day");
  }
  if (!(config.noise >= 0.0)) throw DomainError("synthetic noise must be >= 0");
  std::int64_t start;
  if (!ParseTimestamp(config.start, &start) || start % kPeriodSeconds != 0) {
    throw ConfigError("synthetic start '" + config.start + "' is not a half-hour timestamp");
  }
  const int periods = config.days * 48;
  SyntheticData data;
  for (int t = 0; t < periods; ++t) {
    data.meters.timestamps.push_back(start + t * kPeriodSeconds);
  }

  // Shared weather factor, one value per day.
  std::vector<double> weather(config.days);
  {
    std::seed_seq seq{config.seed, std::uint64_t{0x77}};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> z(0.0, 0.04);
    double w = 0.0;
    for (int d = 0; d < config.days; ++d) {
      w = 0.7 * w + z(rng);
      weather[d] = w;
    }
  }
  auto calendar = [&](int t, double weekend) {
    const int day = t / 48;
    const std::int64_t day_index = (start / 86400) + day;
    // 1970-01-01 was a Thursday: weekday 5 and 6 are Saturday and Sunday.
    const int weekday = static_cast<int>(((day_index % 7) + 7 + 3) % 7);
    const double season = 1.0 + 0.15 * std::cos(2.0 * std::numbers::pi * day / 365.0);
    return season * (1.0 + weather[day]) * (weekday >= 5 ? 1.0 + weekend : 1.0);
  };

  for (int c = 0; c < config.consumers; ++c) {
    const Archetype& a = kArchetypes[c % kArchetypes.size()];
    const double level = a.level * (1.0 + 0.1 * (c / static_cast<int>(kArchetypes.size())));
    const std::array<double, 48> shape = Shape(a);
    std::seed_seq seq{config.seed, static_cast<std::uint64_t>(c), std::uint64_t{0x6d}};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> z(0.0, config.noise);
    std::vector<double> load(periods);
    double eta = 0.0;
    for (int t = 0; t < periods; ++t) {
      eta = 0.85 * eta + z(rng);
      load[t] = std::max(0.0, level * shape[t % 48] * calendar(t, a.weekend) * (1.0 + eta));
    }
    char id[16];
    std::snprintf(id, sizeof(id), "M%02d", c + 1);
    data.meters.ids.push_back(id);
    data.meters.loads.push_back(std::move(load));
  }

  std::array<double, 48> mix{};
  for (std::size_t k = 0; k < kArchetypes.size(); ++k) {
    const std::array<double, 48> s = Shape(kArchetypes[k]);
    for (int p = 0; p < 48; ++p) mix[p] += kReferenceMix[k] * s[p];
  }
  const std::array<double, 48> commercial =
      Shape(Archetype{1.0, 0.3, 0.2, 0.2, 1.5, 0.0, 0.0});
  std::seed_seq seq{config.seed, std::uint64_t{0x7265}};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> z(0.0, 0.5 * config.noise);
  data.reference.resize(periods);
  double eta = 0.0;
  for (int t = 0; t < periods; ++t) {
    eta = 0.85 * eta + z(rng);
    const int p = t % 48;
    const double domestic = mix[p] * calendar(t, 0.08);
    const double business = kCommercialWeight * commercial[p] * calendar(t, -0.45);
    data.reference[t] = 30000.0 * (domestic + business) * (1.0 + eta);
  }
  return data;
}

SmartMeterTable ReferenceTable(const SyntheticData& data) {
  SmartMeterTable table;
  table.ids = {"reference"};
  table.timestamps = data.meters.timestamps;
  table.loads = {data.reference};
  return table;
}

}  // namespace smartmarket
