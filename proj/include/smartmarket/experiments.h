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

#ifndef SMARTMARKET_EXPERIMENTS_H_
#define SMARTMARKET_EXPERIMENTS_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smartmarket/coalition.h"
#include "smartmarket/config.h"
#include "smartmarket/forecaster.h"
#include "smartmarket/procurement.h"
#include "smartmarket/smart_meter.h"

namespace smartmarket {

inline constexpr double kPeriodsPerYear = 17520.0;

// Meter table plus the raw reference series, from the configured files or
// the synthetic generator.
struct MeterData {
  SmartMeterTable meters;
  std::vector<double> reference;
};

MeterData LoadMeterData(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Forecast valuation with Gaussian consumers.

struct Cs1KindResult {
  ValueKind kind;
  std::vector<double> game;  // over consumers + retailer (bit n)
  std::vector<double> shapley;
  MechanismMetrics metrics;  // against the delta-pi allocation
};

struct Cs1DpRow {
  DpPenalty penalty;
  AllocationScenario scenario;
  double gamma = 0.0;
  std::vector<double> dp_sigma;
  std::vector<double> shapley;  // consumers then retailer
  double total_value = 0.0;     // value of the grand coalition
  double consumer_value = 0.0;
  double retailer_share = 0.0;
};

struct Cs1Result {
  Cs1Population population;
  Cs1Reference reference;
  double k = 0.0;
  std::vector<Cs1KindResult> kinds;
  // Noiseless W_target allocation; the DP curves are relative to it.
  std::vector<double> baseline_shapley;
  std::vector<Cs1DpRow> dp;
};

// Builds the population from the first N meter profiles, values every
// configured kind and sweeps the DP noise multiplier per scenario with the
// W_target game under both penalties.
Cs1Result RunCs1(const ExperimentConfig& config, const MeterData& data);

// cs1_population.csv, cs1_coalitions.csv, cs1_shapley.csv, cs1_metrics.csv,
// cs1_dp_shapley.csv and cs1_dp_summary.csv.
void WriteCs1Report(const Cs1Result& result, const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Smart-meter data procurement.

struct Cs2Coalition {
  ConsumerMask mask = 0;
  double distance = 0.0;  // W1(X_C^tr, X_T^tr); X_0 is the reference
  // Annualized profit of bidding the model forecast fed with X_C.
  double profit_validation = 0.0;
  double profit_test = 0.0;
  double rmse_validation = 0.0;
  double mae_validation = 0.0;
};

struct Cs2Instance {
  MeterData data;
  std::vector<double> target;
  std::vector<double> reference;  // rescaled
  SplitIndices split;
  LagFeatureSpec lags;
  AnnModel model;
  std::vector<Cs2Coalition> coalitions;  // indexed by mask
  double k_global = 0.0;      // per year per kWh
  double k_calibrated = 0.0;  // B_validation / W1(X_R, X_T)
  double b_validation = 0.0;
  double test_gap = 0.0;
  // Grand-coalition test profit of a model trained on the other lag preset.
  double alternate_lag_profit_test = 0.0;
  MarketInstance market;  // K and B_ref per the configured policies
};

Cs2Instance PrepareCs2(const ExperimentConfig& config, const MeterData& data);

// Mean profit per period times kPeriodsPerYear, bidding `bids` against
// `demand` over [begin, end).
double AnnualizedProfit(std::span<const double> bids, std::span<const double> demand,
                        std::size_t begin, std::size_t end, const MarketPrices& prices);

struct ValuationCorrelation {
  std::string metric;
  std::optional<double> correlation;
};

// Pearson correlation of test delta-pi with validation delta-RMSE,
// delta-MAE and [B - K W]^+ under the global and calibrated K, over
// non-empty coalitions.
std::vector<ValuationCorrelation> ValuationCorrelations(const Cs2Instance& instance);

// 0, step, ..., max times B / N.
std::vector<double> ThetaGrid(const Cs2Settings& settings, double b_ref, int n);

struct Cs2Sweeps {
  std::vector<SweepRow> confidence;
  std::vector<SweepRow> lipschitz;
  std::vector<SweepRow> budget;
};

// Confidence on an even grid in (0, 1); K geometric from 1e-3 k_global to
// k_global; B_ref on [0, k_global W1(X_R, X_T)]. The reserve ceiling follows
// the swept B_ref.
Cs2Sweeps RunSweeps(const ExperimentConfig& config, const Cs2Instance& instance);

void WriteCs2Valuation(const Cs2Instance& instance, const std::filesystem::path& dir);
void WriteCs2Procurement(const Cs2Instance& instance, const TrialTable& table,
                         const std::filesystem::path& dir);
void WriteCs2Sweeps(const Cs2Sweeps& sweeps, const std::filesystem::path& dir);

// Lipschitz constants and bound curves for the case-study-1 best forecast,
// plus the case-study-2 constants when an instance is given.
void WriteCalibration(const Cs1Result& cs1, const Cs2Instance* cs2,
                      const MarketPrices& prices, const std::filesystem::path& dir);

}  // namespace smartmarket

#endif  // SMARTMARKET_EXPERIMENTS_H_
