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

#ifndef SMARTMARKET_SYNTHETIC_H_
#define SMARTMARKET_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "smartmarket/smart_meter.h"

namespace smartmarket {

// Synthetic stand-in for clustered smart-meter data: each meter is the mean
// load of one consumer archetype (cycled when there are more than eight).
struct SyntheticConfig {
  int consumers = 8;
  int days = 140;
  std::uint64_t seed = 1;
  std::string start = "2013-01-07 00:00";
  // Stddev of the per-archetype multiplicative AR(1) innovations.
  double noise = 0.05;
};

struct SyntheticData {
  SmartMeterTable meters;
  // National-demand-like reference series on the same index, in arbitrary
  // units (rescale before use).
  std::vector<double> reference;
};

// Archetypes differ in level, morning/evening/daytime/night bumps and weekend
// response; all share a weather factor. The reference mixes the archetype
// shapes with a commercial daytime component. Deterministic in the seed.
SyntheticData GenerateSynthetic(const SyntheticConfig& config);

// The reference as a one-meter table with id "reference".
SmartMeterTable ReferenceTable(const SyntheticData& data);

}  // namespace smartmarket

#endif  // SMARTMARKET_SYNTHETIC_H_
