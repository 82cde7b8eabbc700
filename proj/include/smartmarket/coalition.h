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

#ifndef SMARTMARKET_COALITION_H_
#define SMARTMARKET_COALITION_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "smartmarket/cs1_types.h"
#include "smartmarket/distributions.h"
#include "smartmarket/dp_mechanism.h"
#include "smartmarket/newsvendor.h"
#include "smartmarket/procurement.h"

namespace smartmarket {

// A set of consumers plus whether the retailer takes part.
struct Coalition {
  ConsumerMask members = 0;
  bool retailer = true;
};

enum class ValueKind {
  kDeltaPi,     // Pi(q_C*, D_M) - Pi(q_0*, D_M)
  kDeltaSigma,  // C_sigma (sigma(D_0) - sigma(D_C))
  kDro,         // Pi(q_C*, D_C) - underage W1(D_C, D_M) - Pi(q_0*, D_M)
  kWRef,        // K W1(D_0, D_C)
  kWTarget,     // [Pi(q_M*, D_M) - Pi(q_0*, D_M) - K W1(D_M, D_C)]^+
  kWFin,        // W_target with the finite-population Hoeffding bound
  kWInf,        // W_target with the infinite-population Hoeffding bound
};

inline constexpr ValueKind kAllValueKinds[] = {
    ValueKind::kDeltaPi, ValueKind::kDeltaSigma, ValueKind::kDro,
    ValueKind::kWRef,    ValueKind::kWTarget,    ValueKind::kWFin,
    ValueKind::kWInf};

std::string_view ValueKindName(ValueKind kind);
// Throws ConfigError for unknown names.
ValueKind ParseValueKind(std::string_view name);
// Kinds built on a Wasserstein distance; these get the zero-Shapley policy.
bool IsWassersteinKind(ValueKind kind);

// How DP noise enters the Wasserstein distance to D_M.
enum class DpPenalty {
  // Exact W1 between Gaussian forecasts whose variance includes the noise.
  kExact,
  // Noiseless W1 plus sum_{i in C} dp_sigma_i sqrt(2 / pi).
  kUpperBound,
};

// Bid used for the DRO value; defaults to the critical-fractile quantile.
using BidRule = std::function<double(const GaussianDist& forecast,
                                     const MarketPrices& prices)>;

struct ValuationContext {
  const Cs1Population* population = nullptr;
  std::optional<MarketPrices> prices;
  std::optional<double> k;
  std::optional<double> c_sigma;
  // Confidence level for the Hoeffding kinds.
  std::optional<double> confidence;
  std::optional<double> range_proxy;
  // Null means noiseless data.
  const PrivacyProfile* privacy = nullptr;
  DpPenalty dp_penalty = DpPenalty::kExact;
  BidRule dro_bid;
};

// Value of one coalition. Coalitions without the retailer are worth 0.
// Throws ConfigError when the context lacks what `kind` needs.
double CoalitionValue(const Coalition& coalition, ValueKind kind,
                      const ValuationContext& context);

// Value table over the N consumers plus the retailer (player N). Entry m is
// the value of the game coalition whose player bits are m. Negative values
// are clipped to 0 for Wasserstein kinds.
std::vector<double> BuildGame(ValueKind kind, const ValuationContext& context);

// Game mask of a coalition (retailer is bit n).
std::uint32_t GameMask(const Coalition& coalition, int n);

// Replaces negative entries by 0.
std::vector<double> ZeroClip(std::span<const double> values);

// Exact Shapley values of a game given as a table over all 2^players
// coalitions (entry 0 must be the empty coalition). Throws DomainError when
// the table size is not 2^players or players exceeds the enumeration limit.
std::vector<double> Shapley(std::span<const double> values, int players);

// Pi(q_M*, D_M) - Pi(q_0*, D_M) and the pieces needed to calibrate K.
struct Cs1Reference {
  double best_profit = 0.0;       // Pi(q_M*, D_M)
  double reference_profit = 0.0;  // Pi(q_0*, D_M)
  double gap = 0.0;
  double reference_distance = 0.0;  // W1(D_0, D_M)
  // gap / reference_distance.
  double calibrated_k = 0.0;
};

Cs1Reference ComputeCs1Reference(const Cs1Population& population,
                                 const MarketPrices& prices);

// Hoeffding inputs for the population: data_distance[i] = W1(D_{i}, D_M) and
// noise_distance[i] = dp_sigma_i sqrt(2 / pi).
IndividualValues Cs1IndividualValues(const Cs1Population& population,
                                     const PrivacyProfile* privacy);

struct MechanismMetrics {
  // Pearson correlation between the truth and candidate values over
  // coalitions with the retailer and at least one consumer. Empty when either
  // side has zero variance.
  std::optional<double> correlation;
  // Share of those coalitions with a candidate value <= 0.
  double nonpositive_share = 0.0;
  // sum(candidate phi) - sum(truth phi).
  double total_difference = 0.0;
  // sum_i |truth phi_i - candidate phi_i|, and that divided by `normalizer`.
  double misallocation = 0.0;
  double misallocation_fraction = 0.0;
  // Retailer phi over total candidate phi (0 when the total is 0).
  double retailer_share = 0.0;
};

// `truth_values` and `candidate_values` are game tables over n consumers plus
// the retailer; the allocations are their Shapley values.
MechanismMetrics ComputeMechanismMetrics(std::span<const double> candidate_phi,
                                         std::span<const double> truth_phi,
                                         std::span<const double> candidate_values,
                                         std::span<const double> truth_values,
                                         double normalizer);

}  // namespace smartmarket

#endif  // SMARTMARKET_COALITION_H_
