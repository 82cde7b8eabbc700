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

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "smartmarket/csv.h"
#include "smartmarket/errors.h"
#include "smartmarket/experiments.h"
#include "smartmarket/lipschitz.h"
#include "smartmarket/wasserstein.h"

namespace smartmarket {

namespace {

std::string Optional(const std::optional<double>& v) {
  return v ? FormatNumber(*v) : "nan";
}

std::optional<double> Pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0 && syy > 0.0)) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

// Model bids aligned with the series; entries before the largest lag are NaN.
std::vector<double> Bids(const AnnModel& model, const std::vector<double>& series,
                         const LagFeatureSpec& lags) {
  const Dataset rows = BuildLagFeatures(series, lags);
  const Eigen::VectorXd predicted = model.Predict(rows.features);
  std::vector<double> bids(series.size(), std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    bids[rows.time_index[static_cast<std::size_t>(r)]] = std::max(0.0, predicted(r));
  }
  return bids;
}

std::vector<double> CoalitionSeries(const MeterData& data,
                                    const std::vector<double>& reference,
                                    ConsumerMask mask) {
  if (mask == 0) return reference;
  std::vector<std::vector<double>> members;
  for (std::size_t i = 0; i < data.meters.loads.size(); ++i) {
    if (HasMember(mask, static_cast<int>(i))) members.push_back(data.meters.loads[i]);
  }
  return TimeAlignedAverage(members);
}

AnnModel TrainOn(const std::vector<double>& target, const LagFeatureSpec& lags,
                 const SplitIndices& split, const ExperimentConfig& config) {
  const Dataset all = BuildLagFeatures(target, lags);
  const Dataset train = all.Slice(0, split.train_end);
  if (train.rows() == 0) throw DomainError("training window is shorter than the largest lag");
  return Train(train, CriticalFractile(config.prices), config.cs2.train, config.cs2.k_f);
}

std::vector<SweepRow> FinInfSweep(SweepParameter parameter, const std::vector<double>& values,
                                  const Cs2Instance& instance, double theta_ratio,
                                  const ExperimentConfig& config) {
  TrialConfig trials;
  trials.n_trials = config.cs2.n_trials;
  trials.seed = config.seed;
  trials.variants = {MechanismVariant::kFin, MechanismVariant::kInf};
  trials.clearing = config.cs2.clearing;
  return SensitivitySweep(parameter, values, instance.market, theta_ratio, trials);
}

void WriteSweep(CsvWriter& csv, const std::vector<SweepRow>& rows,
                SweepParameter parameter) {
  for (const SweepRow& r : rows) {
    csv.Row({std::string(SweepParameterName(parameter)), FormatNumber(r.value),
             FormatNumber(r.theta_bar), std::string(VariantName(r.variant)),
             FormatNumber(r.mean_profit), FormatNumber(r.feasibility_probability),
             FormatNumber(r.mean_selected), FormatNumber(r.reference_profit)});
  }
}

}  // namespace

double AnnualizedProfit(std::span<const double> bids, std::span<const double> demand,
                        std::size_t begin, std::size_t end, const MarketPrices& prices) {
  if (bids.size() != demand.size() || begin >= end || end > demand.size()) {
    throw DomainError("profit window is empty or outside the series");
  }
  double sum = 0.0;
  for (std::size_t t = begin; t < end; ++t) {
    if (std::isnan(bids[t])) throw DomainError("no bid available in the profit window");
    sum += RealizedProfit(bids[t], demand[t], prices);
  }
  return kPeriodsPerYear * sum / static_cast<double>(end - begin);
}

Cs2Instance PrepareCs2(const ExperimentConfig& config, const MeterData& data) {
  const int n = static_cast<int>(data.meters.ids.size());
  if (n < 1 || n > kMaxEnumeratedConsumers) {
    throw DomainError("case study 2 needs 1.." + std::to_string(kMaxEnumeratedConsumers) +
                      " meters");
  }
  const Cs2Settings& s = config.cs2;
  Cs2Instance out;
  out.data = data;
  out.target = TimeAlignedAverage(data.meters.loads);
  out.split = ChronologicalSplit(out.target.size(), s.split);
  out.reference = RescaleReference(data.reference, out.target, out.split.train_end);
  out.lags = LagSpecFor(s.lags);
  if (static_cast<std::size_t>(out.lags.max_offset()) >= out.split.train_end) {
    throw DomainError("training window is shorter than the largest lag");
  }
  out.model = TrainOn(out.target, out.lags, out.split, config);

  const std::size_t train_end = out.split.train_end;
  const std::size_t val_end = out.split.validation_end;
  const std::size_t size = out.split.size;
  const std::span<const double> target_train(out.target.data(), train_end);
  const std::size_t count = std::size_t{1} << n;
  out.coalitions.resize(count);
  for (std::size_t m = 0; m < count; ++m) {
    const ConsumerMask mask = static_cast<ConsumerMask>(m);
    const std::vector<double> series = CoalitionSeries(data, out.reference, mask);
    const std::vector<double> bids = Bids(out.model, series, out.lags);
    Cs2Coalition& c = out.coalitions[m];
    c.mask = mask;
    c.distance = W1Samples(std::span<const double>(series.data(), train_end), target_train);
    c.profit_validation = AnnualizedProfit(bids, out.target, train_end, val_end, config.prices);
    c.profit_test = AnnualizedProfit(bids, out.target, val_end, size, config.prices);
    double se = 0.0, ae = 0.0;
    for (std::size_t t = train_end; t < val_end; ++t) {
      const double e = bids[t] - out.target[t];
      se += e * e;
      ae += std::abs(e);
    }
    c.rmse_validation = std::sqrt(se / static_cast<double>(val_end - train_end));
    c.mae_validation = ae / static_cast<double>(val_end - train_end);
  }

  const Cs2Coalition& grand = out.coalitions[count - 1];
  const Cs2Coalition& none = out.coalitions[0];
  out.k_global = GlobalK(s.k_f, config.prices) * kPeriodsPerYear;
  out.b_validation = grand.profit_validation - none.profit_validation;
  out.test_gap = grand.profit_test - none.profit_test;
  out.k_calibrated = none.distance > 0.0 ? std::max(out.b_validation, 0.0) / none.distance : 0.0;

  const LagPreset other =
      s.lags == LagPreset::kCorrect ? LagPreset::kMisspecified : LagPreset::kCorrect;
  const LagFeatureSpec other_lags = LagSpecFor(other);
  const AnnModel other_model = TrainOn(out.target, other_lags, out.split, config);
  out.alternate_lag_profit_test = AnnualizedProfit(Bids(other_model, out.target, other_lags),
                                                   out.target, val_end, size, config.prices);

  MarketInstance& market = out.market;
  market.n = n;
  market.individual.data_distance.resize(n);
  market.individual.noise_distance.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    market.individual.data_distance[i] = out.coalitions[std::size_t{1} << i].distance;
  }
  market.exact_distance.resize(count);
  market.realized_profit.resize(count);
  for (std::size_t m = 0; m < count; ++m) {
    market.exact_distance[m] = out.coalitions[m].distance;
    market.realized_profit[m] = out.coalitions[m].profit_test;
  }
  switch (s.k_policy) {
    case KPolicy::kGlobal:
      market.k = out.k_global;
      break;
    case KPolicy::kCalibrated:
      market.k = out.k_calibrated;
      break;
    case KPolicy::kFixed:
      market.k = s.k_value * kPeriodsPerYear;
      break;
  }
  if (!(market.k > 0.0)) throw DomainError("Lipschitz constant for procurement must be > 0");
  market.b_ref = s.budget_policy == BudgetPolicy::kValidation ? std::max(out.b_validation, 0.0)
                                                             : s.b_ref_value;
  market.hoeffding.confidence = s.confidence;
  return out;
}

std::vector<ValuationCorrelation> ValuationCorrelations(const Cs2Instance& instance) {
  const std::vector<Cs2Coalition>& c = instance.coalitions;
  const double b = instance.market.b_ref;
  std::vector<double> truth, rmse, mae, w, kw_global, kw_calibrated;
  for (std::size_t m = 1; m < c.size(); ++m) {
    truth.push_back(c[m].profit_test - c[0].profit_test);
    rmse.push_back(c[0].rmse_validation - c[m].rmse_validation);
    mae.push_back(c[0].mae_validation - c[m].mae_validation);
    w.push_back(-c[m].distance);
    kw_global.push_back(ClippedValue(b, instance.k_global, c[m].distance));
    kw_calibrated.push_back(ClippedValue(b, instance.k_calibrated, c[m].distance));
  }
  return {{"delta_rmse", Pearson(truth, rmse)},
          {"delta_mae", Pearson(truth, mae)},
          {"negative_distance", Pearson(truth, w)},
          {"kw_global", Pearson(truth, kw_global)},
          {"kw_calibrated", Pearson(truth, kw_calibrated)}};
}

std::vector<double> ThetaGrid(const Cs2Settings& settings, double b_ref, int n) {
  const int steps =
      static_cast<int>(std::floor(settings.theta_max_ratio / settings.theta_step_ratio + 1e-9));
  std::vector<double> grid;
  for (int k = 0; k <= steps; ++k) {
    grid.push_back(k * settings.theta_step_ratio * b_ref / n);
  }
  return grid;
}

Cs2Sweeps RunSweeps(const ExperimentConfig& config, const Cs2Instance& instance) {
  const int points = config.cs2.sweep_points;
  Cs2Sweeps out;
  std::vector<double> deltas, ks, budgets;
  const double b_max = instance.k_global * instance.coalitions[0].distance;
  for (int i = 0; i < points; ++i) {
    const double u = points > 1 ? static_cast<double>(i) / (points - 1) : 1.0;
    deltas.push_back((i + 0.5) / points);
    ks.push_back(instance.k_global * std::pow(10.0, -3.0 * (1.0 - u)));
    budgets.push_back(b_max * u);
  }
  const double ratio = config.cs2.sweep_theta_ratio;
  out.confidence = FinInfSweep(SweepParameter::kConfidence, deltas, instance, ratio, config);
  out.lipschitz = FinInfSweep(SweepParameter::kLipschitz, ks, instance,
                              config.cs2.sweep_k_theta_ratio, config);
  out.budget = FinInfSweep(SweepParameter::kReferenceBudget, budgets, instance, ratio, config);
  return out;
}

void WriteCs2Valuation(const Cs2Instance& instance, const std::filesystem::path& dir) {
  const int n = instance.market.n;
  const double b = instance.market.b_ref;
  {
    CsvWriter csv(dir / "cs2_coalitions.csv");
    csv.Row({"mask", "size", "distance", "profit_validation", "profit_test",
             "delta_profit_test", "rmse_validation", "mae_validation", "value_global_k",
             "value_calibrated_k", "value_fin", "value_inf"});
    const std::vector<double> fin = ValueTable(instance.market, MechanismVariant::kFin);
    const std::vector<double> inf = ValueTable(instance.market, MechanismVariant::kInf);
    const double base = instance.coalitions[0].profit_test;
    for (const Cs2Coalition& c : instance.coalitions) {
      const bool empty = c.mask == 0;
      csv.Row({std::to_string(c.mask), std::to_string(std::popcount(c.mask)),
               FormatNumber(c.distance), FormatNumber(c.profit_validation),
               FormatNumber(c.profit_test), FormatNumber(c.profit_test - base),
               FormatNumber(c.rmse_validation), FormatNumber(c.mae_validation),
               FormatNumber(empty ? 0.0 : ClippedValue(b, instance.k_global, c.distance)),
               FormatNumber(empty ? 0.0 : ClippedValue(b, instance.k_calibrated, c.distance)),
               FormatNumber(fin[c.mask]), FormatNumber(inf[c.mask])});
    }
  }
  {
    CsvWriter csv(dir / "cs2_individual.csv");
    csv.Row({"consumer", "id", "distance"});
    for (int i = 0; i < n; ++i) {
      csv.Row({"M" + std::to_string(i + 1), instance.data.meters.ids[i],
               FormatNumber(instance.market.individual.data_distance[i])});
    }
  }
  {
    CsvWriter csv(dir / "cs2_valuation.csv");
    csv.Row({"metric", "correlation_with_delta_profit"});
    for (const ValuationCorrelation& v : ValuationCorrelations(instance)) {
      csv.Row({v.metric, Optional(v.correlation)});
    }
  }
  {
    CsvWriter csv(dir / "cs2_summary.csv");
    csv.Row({"quantity", "value"});
    const Cs2Coalition& grand = instance.coalitions.back();
    const Cs2Coalition& none = instance.coalitions.front();
    csv.Row({"consumers", std::to_string(n)});
    csv.Row({"lags", instance.lags.offsets == LagFeatureSpec::Correct().offsets
                         ? "correct"
                         : "misspecified"});
    csv.Row({"model_lipschitz", FormatNumber(ModelLipschitz(instance.model))});
    csv.Row({"train_periods", std::to_string(instance.split.train_end)});
    csv.Row({"validation_periods",
             std::to_string(instance.split.validation_end - instance.split.train_end)});
    csv.Row({"test_periods", std::to_string(instance.split.size - instance.split.validation_end)});
    csv.Row({"profit_target_validation", FormatNumber(grand.profit_validation)});
    csv.Row({"profit_reference_validation", FormatNumber(none.profit_validation)});
    csv.Row({"profit_target_test", FormatNumber(grand.profit_test)});
    csv.Row({"profit_reference_test", FormatNumber(none.profit_test)});
    csv.Row({"profit_target_test_other_lags", FormatNumber(instance.alternate_lag_profit_test)});
    csv.Row({"budget_validation_gap", FormatNumber(instance.b_validation)});
    csv.Row({"test_gap", FormatNumber(instance.test_gap)});
    csv.Row({"b_ref", FormatNumber(b)});
    csv.Row({"reference_distance", FormatNumber(none.distance)});
    csv.Row({"k_global", FormatNumber(instance.k_global)});
    csv.Row({"k_calibrated", FormatNumber(instance.k_calibrated)});
    csv.Row({"k", FormatNumber(instance.market.k)});
    csv.Row({"confidence", FormatNumber(instance.market.hoeffding.confidence)});
  }
}

void WriteCs2Procurement(const Cs2Instance& instance, const TrialTable& table,
                         const std::filesystem::path& dir) {
  const int n = instance.market.n;
  const double unit = instance.market.b_ref > 0.0 ? instance.market.b_ref / n : 0.0;
  auto ratio = [&](double theta_bar) {
    return unit > 0.0 ? FormatNumber(theta_bar / unit) : "nan";
  };
  {
    CsvWriter csv(dir / "cs2_trials.csv");
    std::vector<std::string> header = {"theta_bar", "trial", "variant", "selected",
                                       "posted_price", "value_bound", "total_payment",
                                       "realized_profit", "ex_post_feasible"};
    for (int i = 0; i < n; ++i) header.push_back("bid_M" + std::to_string(i + 1));
    for (int i = 0; i < n; ++i) header.push_back("payment_M" + std::to_string(i + 1));
    csv.Row(header);
    for (const TrialRecord& r : table.records) {
      const ProcurementOutcome& o = r.outcome;
      std::vector<std::string> row = {
          FormatNumber(r.theta_bar), std::to_string(r.trial),
          std::string(VariantName(r.variant)), std::to_string(o.selected),
          FormatNumber(o.posted_price), FormatNumber(o.value_bound),
          FormatNumber(o.total_payment), FormatNumber(o.realized_profit.value_or(0.0)),
          o.ex_post_feasible.value_or(o.budget_feasible) ? "1" : "0"};
      for (double bid : r.bids) row.push_back(FormatNumber(bid));
      for (double p : o.payments) row.push_back(FormatNumber(p));
      csv.Row(row);
    }
  }
  {
    CsvWriter csv(dir / "cs2_procurement.csv");
    csv.Row({"theta_bar", "theta_ratio", "variant", "mean_profit", "min_profit",
             "max_profit", "feasibility_probability", "mean_selected", "reference_profit"});
    for (const TrialSummary& s : table.summaries) {
      csv.Row({FormatNumber(s.theta_bar), ratio(s.theta_bar),
               std::string(VariantName(s.variant)), FormatNumber(s.mean_profit),
               FormatNumber(s.min_profit), FormatNumber(s.max_profit),
               FormatNumber(s.feasibility_probability), FormatNumber(s.mean_selected),
               FormatNumber(s.reference_profit)});
    }
  }
  {
    CsvWriter csv(dir / "cs2_payments.csv");
    csv.Row({"theta_bar", "theta_ratio", "variant", "consumer", "mean_payment"});
    for (const TrialSummary& s : table.summaries) {
      for (int i = 0; i < n; ++i) {
        csv.Row({FormatNumber(s.theta_bar), ratio(s.theta_bar),
                 std::string(VariantName(s.variant)), "M" + std::to_string(i + 1),
                 FormatNumber(s.mean_payment[i])});
      }
    }
  }
}

void WriteCs2Sweeps(const Cs2Sweeps& sweeps, const std::filesystem::path& dir) {
  CsvWriter csv(dir / "cs2_sensitivity.csv");
  csv.Row({"parameter", "value", "theta_bar", "variant", "mean_profit",
           "feasibility_probability", "mean_selected", "reference_profit"});
  WriteSweep(csv, sweeps.confidence, SweepParameter::kConfidence);
  WriteSweep(csv, sweeps.lipschitz, SweepParameter::kLipschitz);
  WriteSweep(csv, sweeps.budget, SweepParameter::kReferenceBudget);
}

void WriteCalibration(const Cs1Result& cs1, const Cs2Instance* cs2,
                      const MarketPrices& prices, const std::filesystem::path& dir) {
  const int n = static_cast<int>(cs1.population.size());
  const GaussianDist best = ForecastFor(FullMask(n), cs1.population);
  const double xi = best.stddev;
  std::vector<double> grid;
  const double q_star = OptimalBid(DemandModel{best}, prices);
  for (int k = -100; k <= 100; ++k) {
    grid.push_back(std::max(0.0, q_star + 3.0 * best.stddev * k / 100.0));
  }
  const BoundCurves curves = ComputeBoundCurves(prices, best, grid, xi);
  std::vector<DemandModel> forecasts;
  for (ConsumerMask m = 0; m <= FullMask(n); ++m) {
    forecasts.emplace_back(ForecastFor(m, cs1.population));
  }
  const EmpiricalK empirical = EstimateEmpiricalK(forecasts, prices);
  {
    CsvWriter csv(dir / "lipschitz_constants.csv");
    csv.Row({"quantity", "value"});
    csv.Row({"demand_sigma", FormatNumber(best.stddev)});
    csv.Row({"xi", FormatNumber(xi)});
    csv.Row({"k_global", FormatNumber(curves.k_global)});
    csv.Row({"k_max", FormatNumber(curves.k_max)});
    csv.Row({"k_local", FormatNumber(curves.k_local)});
    csv.Row({"k_actual", FormatNumber(curves.k_actual)});
    csv.Row({"k_kantorovich", FormatNumber(KantorovichConstant(prices))});
    csv.Row({"cs1_k_calibrated", FormatNumber(cs1.reference.calibrated_k)});
    csv.Row({"cs1_k_empirical_max", FormatNumber(empirical.max_ratio)});
    csv.Row({"cs1_k_empirical_mean", FormatNumber(empirical.mean_ratio)});
    if (cs2 != nullptr) {
      csv.Row({"cs2_k_global_annual", FormatNumber(cs2->k_global)});
      csv.Row({"cs2_k_calibrated_annual", FormatNumber(cs2->k_calibrated)});
      csv.Row({"cs2_k_calibrated_per_kwh", FormatNumber(cs2->k_calibrated / kPeriodsPerYear)});
      csv.Row({"cs2_model_lipschitz", FormatNumber(ModelLipschitz(cs2->model))});
    }
  }
  {
    CsvWriter csv(dir / "lipschitz_curves.csv");
    csv.Row({"bid", "deviation", "loss", "bound_global", "bound_max", "bound_local",
             "bound_actual"});
    for (const BoundPoint& p : curves.points) {
      csv.Row({FormatNumber(p.bid), FormatNumber(p.deviation), FormatNumber(p.loss),
               FormatNumber(p.bound_global), FormatNumber(p.bound_max),
               FormatNumber(p.bound_local), FormatNumber(p.bound_actual)});
    }
  }
  {
    CsvWriter csv(dir / "lipschitz_local.csv");
    csv.Row({"xi_over_sigma", "k_local"});
    for (int k = 0; k <= 20; ++k) {
      const double r = 0.25 * k;
      csv.Row({FormatNumber(r), FormatNumber(LocalKGaussian(prices, best.stddev, r * best.stddev))});
    }
  }
}

}  // namespace smartmarket
