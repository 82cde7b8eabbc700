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

#include <cmath>
#include <limits>
#include <string>

#include "smartmarket/cs1_population.h"
#include "smartmarket/csv.h"
#include "smartmarket/errors.h"
#include "smartmarket/experiments.h"
#include "smartmarket/synthetic.h"
#include "smartmarket/wasserstein.h"

namespace smartmarket {

namespace {

std::string MemberList(std::uint32_t mask, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) {
    if ((mask >> i) & 1u) out += (out.empty() ? "" : "-") + std::to_string(i + 1);
  }
  if ((mask >> n) & 1u) out += out.empty() ? "R" : "-R";
  return out.empty() ? "none" : out;
}

std::string PlayerName(int i, int n) {
  return i == n ? "R" : "M" + std::to_string(i + 1);
}

std::string_view PenaltyName(DpPenalty penalty) {
  return penalty == DpPenalty::kExact ? "exact" : "upper_bound";
}

std::string Optional(const std::optional<double>& v) {
  return v ? FormatNumber(*v) : "nan";
}

}  // namespace

MeterData LoadMeterData(const ExperimentConfig& config) {
  MeterData out;
  if (config.meters_path.empty()) {
    SyntheticData synthetic = GenerateSynthetic(config.synthetic);
    out.meters = std::move(synthetic.meters);
    out.reference = std::move(synthetic.reference);
    return out;
  }
  out.meters = IngestCsv(config.meters_path);
  const SmartMeterTable reference = IngestCsv(config.reference_path);
  if (reference.ids.size() != 1) {
    throw DataError({"reference file must hold exactly one series"});
  }
  if (reference.timestamps != out.meters.timestamps) {
    throw DataError({"reference and meter files cover different time indices"});
  }
  out.reference = reference.loads.front();
  return out;
}

Cs1Result RunCs1(const ExperimentConfig& config, const MeterData& data) {
  const int n = static_cast<int>(data.meters.ids.size());
  if (n < 1 || n > kMaxEnumeratedConsumers) {
    throw DomainError("case study 1 needs 1.." + std::to_string(kMaxEnumeratedConsumers) +
                      " consumer profiles");
  }
  const Cs1Settings& s = config.cs1;
  Cs1Result result;
  result.population =
      GeneratePopulation(n, &data.meters.loads, s.population, config.seed);
  result.reference = ComputeCs1Reference(result.population, config.prices);
  result.k = s.k.value_or(result.reference.calibrated_k);

  ValuationContext context;
  context.population = &result.population;
  context.prices = config.prices;
  context.k = result.k;
  context.c_sigma = s.c_sigma;
  context.confidence = s.confidence;

  const int players = n + 1;
  const std::vector<double> truth = BuildGame(ValueKind::kDeltaPi, context);
  const std::vector<double> truth_phi = Shapley(truth, players);
  for (ValueKind kind : s.kinds) {
    Cs1KindResult r;
    r.kind = kind;
    r.game = BuildGame(kind, context);
    r.shapley = Shapley(r.game, players);
    r.metrics = ComputeMechanismMetrics(r.shapley, truth_phi, r.game, truth,
                                        result.reference.best_profit);
    result.kinds.push_back(std::move(r));
  }
  result.baseline_shapley = Shapley(BuildGame(ValueKind::kWTarget, context), players);

  const std::vector<double> sigmas = ScheduledSigmas(result.population);
  for (DpPenalty penalty : {DpPenalty::kExact, DpPenalty::kUpperBound}) {
    for (AllocationScenario scenario : s.scenarios) {
      for (double gamma : s.gammas) {
        const PrivacyProfile profile =
            MakePrivacyProfile(sigmas, gamma, scenario, config.seed);
        ValuationContext dp_context = context;
        dp_context.privacy = &profile;
        dp_context.dp_penalty = penalty;
        Cs1DpRow row;
        row.penalty = penalty;
        row.scenario = scenario;
        row.gamma = gamma;
        row.dp_sigma = profile.dp_sigma;
        const std::vector<double> game = BuildGame(ValueKind::kWTarget, dp_context);
        row.shapley = Shapley(game, players);
        row.total_value = game.back();
        for (int i = 0; i < n; ++i) row.consumer_value += row.shapley[i];
        row.retailer_share = row.total_value > 0.0 ? row.shapley[n] / row.total_value : 0.0;
        result.dp.push_back(std::move(row));
      }
    }
  }
  return result;
}

void WriteCs1Report(const Cs1Result& result, const std::filesystem::path& dir) {
  const int n = static_cast<int>(result.population.size());
  {
    CsvWriter csv(dir / "cs1_population.csv");
    csv.Row({"consumer", "scheduled_mean", "scheduled_sigma", "unscheduled_mean",
             "unscheduled_sigma", "realized_scheduled"});
    for (int i = 0; i < n; ++i) {
      const Cs1Consumer& c = result.population[i];
      csv.Row({PlayerName(i, n), FormatNumber(c.scheduled_mean),
               FormatNumber(c.scheduled_sigma), FormatNumber(c.unscheduled_mean),
               FormatNumber(c.unscheduled_sigma), FormatNumber(c.realized_scheduled)});
    }
  }
  {
    CsvWriter csv(dir / "cs1_reference.csv");
    csv.Row({"quantity", "value"});
    csv.Row({"best_profit", FormatNumber(result.reference.best_profit)});
    csv.Row({"reference_profit", FormatNumber(result.reference.reference_profit)});
    csv.Row({"gap", FormatNumber(result.reference.gap)});
    csv.Row({"reference_distance", FormatNumber(result.reference.reference_distance)});
    csv.Row({"calibrated_k", FormatNumber(result.reference.calibrated_k)});
    csv.Row({"k", FormatNumber(result.k)});
  }
  {
    CsvWriter csv(dir / "cs1_coalitions.csv");
    std::vector<std::string> header = {"mask", "members"};
    for (const Cs1KindResult& r : result.kinds) header.emplace_back(ValueKindName(r.kind));
    csv.Row(header);
    const std::size_t count = std::size_t{1} << (n + 1);
    for (std::size_t mask = 0; mask < count; ++mask) {
      std::vector<std::string> row = {std::to_string(mask),
                                      MemberList(static_cast<std::uint32_t>(mask), n)};
      for (const Cs1KindResult& r : result.kinds) row.push_back(FormatNumber(r.game[mask]));
      csv.Row(row);
    }
  }
  {
    CsvWriter csv(dir / "cs1_shapley.csv");
    csv.Row({"kind", "player", "phi"});
    for (const Cs1KindResult& r : result.kinds) {
      for (int i = 0; i <= n; ++i) {
        csv.Row({std::string(ValueKindName(r.kind)), PlayerName(i, n),
                 FormatNumber(r.shapley[i])});
      }
    }
  }
  {
    CsvWriter csv(dir / "cs1_metrics.csv");
    csv.Row({"kind", "correlation", "nonpositive_share", "total_difference",
             "misallocation", "misallocation_fraction", "retailer_share"});
    for (const Cs1KindResult& r : result.kinds) {
      const MechanismMetrics& m = r.metrics;
      csv.Row({std::string(ValueKindName(r.kind)), Optional(m.correlation),
               FormatNumber(m.nonpositive_share), FormatNumber(m.total_difference),
               FormatNumber(m.misallocation), FormatNumber(m.misallocation_fraction),
               FormatNumber(m.retailer_share)});
    }
  }
  {
    CsvWriter csv(dir / "cs1_dp_shapley.csv");
    csv.Row({"penalty", "scenario", "gamma", "player", "dp_sigma",
             "scheduled_sigma_minus_dp_sigma", "phi", "pct_change"});
    for (const Cs1DpRow& row : result.dp) {
      for (int i = 0; i <= n; ++i) {
        const double base = result.baseline_shapley[i];
        const double pct = base != 0.0 ? 100.0 * (row.shapley[i] - base) / std::abs(base)
                                       : std::numeric_limits<double>::quiet_NaN();
        const bool consumer = i < n;
        csv.Row({std::string(PenaltyName(row.penalty)),
                 std::string(ScenarioName(row.scenario)), FormatNumber(row.gamma),
                 PlayerName(i, n), consumer ? FormatNumber(row.dp_sigma[i]) : "0",
                 consumer ? FormatNumber(result.population[i].scheduled_sigma -
                                         row.dp_sigma[i])
                          : "0",
                 FormatNumber(row.shapley[i]), FormatNumber(pct)});
      }
    }
  }
  {
    CsvWriter csv(dir / "cs1_dp_summary.csv");
    csv.Row({"penalty", "scenario", "gamma", "total_value", "consumer_value",
             "retailer_share", "value_reduction_pct"});
    const double base = result.reference.gap;
    for (const Cs1DpRow& row : result.dp) {
      csv.Row({std::string(PenaltyName(row.penalty)), std::string(ScenarioName(row.scenario)),
               FormatNumber(row.gamma), FormatNumber(row.total_value),
               FormatNumber(row.consumer_value), FormatNumber(row.retailer_share),
               FormatNumber(base > 0.0 ? 100.0 * (base - row.total_value) / base : 0.0)});
    }
  }
}

}  // namespace smartmarket
