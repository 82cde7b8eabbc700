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

#ifndef SMARTMARKET_PROCUREMENT_H_
#define SMARTMARKET_PROCUREMENT_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "smartmarket/cs1_types.h"

namespace smartmarket {

// Whether the consumers in the market are the whole population (finite
// population correction applies) or a sample from a larger one.
enum class PopulationMode { kFinite, kInfinite };

struct HoeffdingConfig {
  // Confidence level in (0, 1). Larger is more conservative: the deviation
  // term grows like sqrt(ln(2 / (1 - confidence))).
  double confidence = 0.95;
  PopulationMode mode = PopulationMode::kFinite;
  // Range of the per-consumer distances. Defaults to max_i W_i.
  std::optional<double> range_proxy;
};

// Per-consumer Wasserstein values W_i = data_distance[i] + noise_distance[i],
// where data_distance is W1(X_i, X_T) and noise_distance is W1(X_i^DP, 0).
struct IndividualValues {
  std::vector<double> data_distance;
  std::vector<double> noise_distance;

  std::size_t size() const { return data_distance.size(); }
  double total(std::size_t i) const;
  double max_total() const;
};

// Hoeffding deviation coefficient for a coalition of m out of n consumers:
//   INF: sqrt(ln(2 / (1 - confidence)) / (2 m))
//   FIN: INF * sqrt((n - m) / (n - 1))   (zero when m == n)
double DeviationCoefficient(int m, int n, double confidence, PopulationMode mode);

// Upper bound on the aggregate distance W1(X_T, X_C) built from individual
// values only:
//   mean_{i in C} noise_distance[i] + DeviationCoefficient(|C|, n) * R_W.
// Throws DomainError for an empty coalition.
double HoeffdingBound(ConsumerMask coalition, const IndividualValues& values,
                      const HoeffdingConfig& config);

// [b_ref - k * distance]^+.
double ClippedValue(double b_ref, double k, double distance);

// V_delta(C) = [b_ref - k * HoeffdingBound(C)]^+, and 0 for the empty set.
double CoalitionValueBound(ConsumerMask coalition, const IndividualValues& values,
                           double k, double b_ref, const HoeffdingConfig& config);

enum class MechanismVariant {
  kFin,    // Hoeffding bound, finite population; pays bids
  kInf,    // Hoeffding bound, infinite population; pays bids
  kCenIr,  // exact aggregate distance; pays bids (individually rational)
  kCenIc,  // exact aggregate distance; pays critical prices (incentive compatible)
};

inline constexpr MechanismVariant kAllVariants[] = {
    MechanismVariant::kFin, MechanismVariant::kInf, MechanismVariant::kCenIr,
    MechanismVariant::kCenIc};

std::string_view VariantName(MechanismVariant variant);
// Accepts fin|inf|cen-ir|cen-ic. Throws ConfigError.
MechanismVariant ParseVariant(std::string_view name);

enum class ClearingMode {
  // Select against the realized bids and pay each winner its bid.
  kRealizedBids,
  // Post one price chosen ex ante from the reserve-price prior; consumers
  // bidding at or below it are eligible and winners are paid the price.
  kPostedPrice,
};

// Reserve prices: independent uniform priors on [lower_i, upper_i].
struct ReserveModel {
  std::vector<double> lower;
  std::vector<double> upper;

  static ReserveModel Uniform(int n, double upper_bound);
  // Probability that consumer i accepts a posted price.
  double AcceptProbability(std::size_t i, double price) const;
};

// Everything the platform knows about one market.
struct MarketInstance {
  int n = 0;
  IndividualValues individual;
  // W1(D_M, D_C) indexed by mask. Required by the centralized variants.
  std::vector<double> exact_distance;
  // Realized (test) profit when the retailer uses coalition C's data, indexed
  // by mask; entry 0 is the reference-data profit. Optional.
  std::vector<double> realized_profit;
  double k = 0.0;
  double b_ref = 0.0;
  HoeffdingConfig hoeffding;
};

struct ProcurementOutcome {
  ConsumerMask selected = 0;
  std::vector<int> selections;
  std::vector<double> payments;
  // V(C) for the selected coalition under the variant's valuation.
  double value_bound = 0.0;
  double total_payment = 0.0;
  // value_bound - total_payment.
  double objective = 0.0;
  // Solve-time budget feasibility: total_payment <= value_bound.
  bool budget_feasible = true;
  double b_ref = 0.0;
  // Posted price when one was used, NaN otherwise.
  double posted_price = 0.0;
  // Filled when the instance carries realized profits.
  std::optional<double> realized_profit;
  std::optional<bool> ex_post_feasible;
};

// V(C) for every mask under the variant's valuation (FIN/INF: Hoeffding
// bound; CEN: exact distance). Throws DomainError when n exceeds the
// enumeration limit or CEN data is missing.
std::vector<double> ValueTable(const MarketInstance& instance,
                               MechanismVariant variant);

// argmax_C V(C) - sum_{i in C} bids_i  s.t. sum bids <= V(C). Ties go to
// smaller coalitions, then to the lexicographically smaller member list.
ConsumerMask SelectAgainstBids(std::span<const double> values,
                               std::span<const double> bids);

// Among consumers with bid <= price, argmax_C V(C) - |C| price subject to
// |C| price <= V(C), with the same tie-breaking.
ConsumerMask SelectAtPostedPrice(std::span<const double> values,
                                 std::span<const double> bids, double price);

// The posted price on a uniform grid of `grid_points` over
// [0, max upper] maximizing expected retailer surplus under the prior.
double OptimalPostedPrice(std::span<const double> values,
                          const ReserveModel& reserve, int grid_points = 100);

using AllocationRule = std::function<ConsumerMask(std::span<const double> bids)>;

// Largest bid of consumer i at which the allocation still selects i, all
// other bids fixed, found by bisection on [bids[i], upper]. Requires that i is
// selected at bids[i] and that the rule is monotone.
double CriticalPrice(const AllocationRule& rule, std::span<const double> bids,
                     int i, double upper);

// Clears one market. Centralized IC always uses the posted-price rule with
// critical-price payments; the other variants use `clearing`.
ProcurementOutcome SolveProcurement(std::span<const double> bids,
                                    const MarketInstance& instance,
                                    MechanismVariant variant,
                                    const ReserveModel& reserve,
                                    ClearingMode clearing = ClearingMode::kRealizedBids);

struct TrialConfig {
  std::vector<double> theta_bars;
  int n_trials = 50;
  std::uint64_t seed = 0;
  std::vector<MechanismVariant> variants;
  ClearingMode clearing = ClearingMode::kRealizedBids;
};

struct TrialRecord {
  double theta_bar = 0.0;
  int trial = 0;
  MechanismVariant variant = MechanismVariant::kFin;
  std::vector<double> bids;
  ProcurementOutcome outcome;
};

struct TrialSummary {
  double theta_bar = 0.0;
  MechanismVariant variant = MechanismVariant::kFin;
  double mean_profit = 0.0;
  double min_profit = 0.0;
  double max_profit = 0.0;
  // Fraction of trials that were budget feasible ex post.
  double feasibility_probability = 0.0;
  double mean_objective = 0.0;
  double mean_selected = 0.0;
  std::vector<double> mean_payment;
  double reference_profit = 0.0;
};

struct TrialTable {
  std::vector<TrialRecord> records;
  std::vector<TrialSummary> summaries;
};

// Reserve prices theta_i = theta_bar * u_i with u_i ~ U(0, 1) drawn from a
// stream keyed by (seed, trial), so every theta_bar and variant sees the same
// uniforms. Realized profit is realized_profit[C] - payments (or the
// solve-time objective when the instance carries no realized profits); ex
// post feasibility compares it with the reference profit.
TrialTable SimulateTrials(const MarketInstance& instance, const TrialConfig& config);

// The uniforms behind SimulateTrials for one trial.
std::vector<double> TrialUniforms(std::uint64_t seed, int trial, int n);

enum class SweepParameter { kConfidence, kLipschitz, kReferenceBudget };

std::string_view SweepParameterName(SweepParameter parameter);

struct SweepRow {
  double value = 0.0;
  double theta_bar = 0.0;
  MechanismVariant variant = MechanismVariant::kFin;
  double mean_profit = 0.0;
  double feasibility_probability = 0.0;
  double mean_selected = 0.0;
  double reference_profit = 0.0;
};

// Re-runs SimulateTrials for each parameter value at the single reserve
// ceiling theta_ratio * b_ref / n, with b_ref taken after the variation.
// Confidence values must lie in (0, 1), Lipschitz values > 0, budgets >= 0.
std::vector<SweepRow> SensitivitySweep(SweepParameter parameter,
                                       std::span<const double> values,
                                       const MarketInstance& instance,
                                       double theta_ratio, const TrialConfig& config);

}  // namespace smartmarket

#endif  // SMARTMARKET_PROCUREMENT_H_
