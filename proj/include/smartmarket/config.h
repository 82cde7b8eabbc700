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

#ifndef SMARTMARKET_CONFIG_H_
#define SMARTMARKET_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "smartmarket/coalition.h"
#include "smartmarket/cs1_population.h"
#include "smartmarket/dp_mechanism.h"
#include "smartmarket/forecaster.h"
#include "smartmarket/newsvendor.h"
#include "smartmarket/procurement.h"
#include "smartmarket/smart_meter.h"
#include "smartmarket/synthetic.h"

namespace smartmarket {

// Flat key = value file. "[name]" starts a section whose name prefixes the
// following keys ("name.key"). '#' starts a comment. Values are bare words,
// numbers, "quoted strings" or [comma, separated, lists].
class KeyValueConfig {
 public:
  // Throws ConfigError naming the line of the first syntax error or
  // repeated key.
  static KeyValueConfig Parse(std::string_view text);

  bool Has(const std::string& key) const;
  std::string GetString(const std::string& key) const;
  std::string GetString(const std::string& key, const std::string& fallback) const;
  double GetDouble(const std::string& key) const;
  double GetDouble(const std::string& key, double fallback) const;
  int GetInt(const std::string& key, int fallback) const;
  std::uint64_t GetUint64(const std::string& key, std::uint64_t fallback) const;
  std::vector<std::string> GetList(const std::string& key) const;
  std::vector<double> GetDoubleList(const std::string& key) const;
  // Keys never read through a getter.
  std::vector<std::string> UnusedKeys() const;

 private:
  const std::string& Raw(const std::string& key) const;

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

enum class KPolicy { kGlobal, kCalibrated, kFixed };
enum class BudgetPolicy { kValidation, kFixed };
enum class LagPreset { kCorrect, kMisspecified };

struct Cs1Settings {
  std::vector<double> gammas = {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
  // Data value rate for the delta-sigma valuation; no default.
  std::optional<double> c_sigma;
  // Empty means the calibrated constant gap / W1(D_0, D_M).
  std::optional<double> k;
  double confidence = 0.95;
  std::vector<ValueKind> kinds = {std::begin(kAllValueKinds), std::end(kAllValueKinds)};
  std::vector<AllocationScenario> scenarios = {std::begin(kAllScenarios),
                                               std::end(kAllScenarios)};
  Cs1PopulationConfig population = DefaultCs1PopulationConfig();
};

struct Cs2Settings {
  double k_f = 1.0;
  double confidence = 0.95;
  KPolicy k_policy = KPolicy::kGlobal;
  double k_value = 0.0;  // per kWh, used with KPolicy::kFixed
  BudgetPolicy budget_policy = BudgetPolicy::kValidation;
  double b_ref_value = 0.0;  // per year, used with BudgetPolicy::kFixed
  // theta_bar grid: 0, step, ..., max in units of B / N.
  double theta_max_ratio = 4.0;
  double theta_step_ratio = 0.1;
  int n_trials = 50;
  LagPreset lags = LagPreset::kCorrect;
  std::vector<MechanismVariant> variants = {std::begin(kAllVariants),
                                            std::end(kAllVariants)};
  ClearingMode clearing = ClearingMode::kRealizedBids;
  int sweep_points = 10;
  // theta_bar of the delta and B_ref sweeps, and of the K sweep, in B / N.
  double sweep_theta_ratio = 1.44;
  double sweep_k_theta_ratio = 1.15;
  TrainConfig train;
  SplitSpec split;
};

struct ExperimentConfig {
  MarketPrices prices{0.20, 0.05, 0.02, 0.12};
  std::uint64_t seed = 1;
  // Empty paths select the synthetic generator.
  std::filesystem::path meters_path;
  std::filesystem::path reference_path;
  SyntheticConfig synthetic;
  Cs1Settings cs1;
  Cs2Settings cs2;
};

// Parses an experiment file; relative paths resolve against `base_dir`.
// Throws ConfigError on unknown keys, bad values, empty grids or missing
// data files.
ExperimentConfig ParseExperimentConfig(std::string_view text,
                                       const std::filesystem::path& base_dir);
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);

// Sets the run seed and every seed derived from it.
void SetSeed(ExperimentConfig* config, std::uint64_t seed);

std::string_view LagPresetName(LagPreset preset);
LagFeatureSpec LagSpecFor(LagPreset preset);

}  // namespace smartmarket

#endif  // SMARTMARKET_CONFIG_H_
