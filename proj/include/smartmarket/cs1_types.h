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

#ifndef SMARTMARKET_CS1_TYPES_H_
#define SMARTMARKET_CS1_TYPES_H_

#include <cstdint>
#include <vector>

namespace smartmarket {

// Bit i set means consumer i is a member. At most 20 consumers are supported
// by the enumeration-based routines.
using ConsumerMask = std::uint32_t;

inline constexpr int kMaxEnumeratedConsumers = 20;

inline bool HasMember(ConsumerMask mask, int i) { return (mask >> i) & 1u; }
inline ConsumerMask FullMask(int n) {
  return n >= 32 ? ~ConsumerMask{0} : (ConsumerMask{1} << n) - 1;
}

// One consumer of the forecast-procurement case: Gaussian scheduled and
// unscheduled load components plus the realized scheduled load that the
// retailer can buy. All quantities in kWh.
struct Cs1Consumer {
  double scheduled_mean = 0.0;
  double scheduled_sigma = 0.0;
  double unscheduled_mean = 0.0;
  double unscheduled_sigma = 0.0;
  double realized_scheduled = 0.0;
};

using Cs1Population = std::vector<Cs1Consumer>;

}  // namespace smartmarket

#endif  // SMARTMARKET_CS1_TYPES_H_
