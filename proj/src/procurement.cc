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

#include "smartmarket/procurement.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "smartmarket/errors.h"

namespace smartmarket {

namespace {

constexpr int kBisectionIterations = 200;

void CheckEnumerable(int n) {
  if (n < 0 || n > kMaxEnumeratedConsumers) {
    throw DomainError("subset enumeration refused for " + std::to_string(n) +
                      " consumers (limit " +
                      std::to_string(kMaxEnumeratedConsumers) + ")");
  }
}

int CheckTable(std::span<const double> values, std::size_t n) {
  CheckEnumerable(static_cast<int>(n));
  if (values.size() != (std::size_t{1} << n)) {
    throw DomainError("value table has " + std::to_string(values.size()) +
                      " entries, expected 2^" + std::to_string(n));
  }
  return static_cast<int>(n);
}

// Equal-size coalitions compare by their sorted member lists.
bool LexicographicallySmaller(ConsumerMask a, ConsumerMask b) {
  const ConsumerMask diff = a ^ b;
  if (diff == 0) return false;
  const ConsumerMask lowest = diff & (~diff + 1);
  return (a & lowest) != 0;
}

bool Better(double objective, ConsumerMask mask, double best_objective,
            ConsumerMask best_mask) {
  const double tol =
      1e-12 * std::max({1.0, std::abs(objective), std::abs(best_objective)});
  if (objective > best_objective + tol) return true;
  if (objective < best_objective - tol) return false;
  const int size = std::popcount(mask);
  const int best_size = std::popcount(best_mask);
  if (size != best_size) return size < best_size;
  return LexicographicallySmaller(mask, best_mask);
}

std::vector<double> SubsetSums(std::span<const double> bids) {
  const std::size_t count = std::size_t{1} << bids.size();
  std::vector<double> sums(count, 0.0);
  for (std::size_t mask = 1; mask < count; ++mask) {
    const int low = std::countr_zero(static_cast<ConsumerMask>(mask));
    sums[mask] = sums[mask & (mask - 1)] + bids[low];
  }
  return sums;
}

struct Clearing {
  ConsumerMask selected = 0;
  std::vector<double> payments;
  double posted_price = std::numeric_limits<double>::quiet_NaN();
};

Clearing Clear(std::span<const double> values, std::span<const double> bids,
               bool posted, double posted_price) {
  const int n = static_cast<int>(bids.size());
  Clearing result;
  result.payments.assign(n, 0.0);
  if (!posted) {
    result.selected = SelectAgainstBids(values, bids);
    for (int i = 0; i < n; ++i) {
      if (HasMember(result.selected, i)) result.payments[i] = bids[i];
    }
    return result;
  }
  result.posted_price = posted_price;
  AllocationRule rule = [&](std::span<const double> b) {
    return SelectAtPostedPrice(values, b, posted_price);
  };
  result.selected = rule(bids);
  double upper = posted_price;
  for (double v : values) upper = std::max(upper, v);
  upper += 1.0;
  for (int i = 0; i < n; ++i) {
    if (HasMember(result.selected, i)) {
      result.payments[i] = CriticalPrice(rule, bids, i, upper);
    }
  }
  return result;
}

ProcurementOutcome Assemble(const Clearing& clearing, std::span<const double> values,
                            const MarketInstance& instance) {
  ProcurementOutcome out;
  const int n = static_cast<int>(clearing.payments.size());
  out.selected = clearing.selected;
  out.selections.assign(n, 0);
  out.payments = clearing.payments;
  for (int i = 0; i < n; ++i) {
    out.selections[i] = HasMember(clearing.selected, i) ? 1 : 0;
    out.total_payment += out.payments[i];
  }
  out.value_bound = values[clearing.selected];
  out.objective = out.value_bound - out.total_payment;
  out.budget_feasible =
      out.total_payment <= out.value_bound + 1e-12 * std::max(1.0, out.value_bound);
  out.b_ref = instance.b_ref;
  out.posted_price = clearing.posted_price;
  if (!instance.realized_profit.empty()) {
    const double reference = instance.realized_profit[0];
    const double realized =
        instance.realized_profit[clearing.selected] - out.total_payment;
    out.realized_profit = realized;
    out.ex_post_feasible =
        realized >= reference - 1e-9 * std::max(1.0, std::abs(reference));
  }
  return out;
}

void ValidateBids(std::span<const double> bids, const MarketInstance& instance) {
  if (static_cast<int>(bids.size()) != instance.n) {
    throw DomainError("expected one bid per consumer");
  }
  for (double b : bids) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw DomainError("bids must be finite and >= 0");
  }
}

bool UsesPostedPrice(MechanismVariant variant, ClearingMode clearing) {
  return variant == MechanismVariant::kCenIc ||
         clearing == ClearingMode::kPostedPrice;
}

}  // namespace

double IndividualValues::total(std::size_t i) const {
  const double noise = i < noise_distance.size() ? noise_distance[i] : 0.0;
  return data_distance[i] + noise;
}

double IndividualValues::max_total() const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i) m = std::max(m, total(i));
  return m;
}

double DeviationCoefficient(int m, int n, double confidence, PopulationMode mode) {
  if (n < 1 || m < 1 || m > n) {
    throw DomainError("deviation coefficient needs 1 <= m <= n");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw DomainError("Hoeffding confidence must lie in (0, 1)");
  }
  const double base =
      std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(m)));
  if (mode == PopulationMode::kInfinite) return base;
  if (m == n) return 0.0;
  return base * std::sqrt(static_cast<double>(n - m) / static_cast<double>(n - 1));
}

double HoeffdingBound(ConsumerMask coalition, const IndividualValues& values,
                      const HoeffdingConfig& config) {
  const int n = static_cast<int>(values.size());
  if (coalition == 0) throw DomainError("Hoeffding bound of an empty coalition");
  if (n < 32 && (coalition >> n) != 0) {
    throw DomainError("coalition refers to consumers outside the population");
  }
  if (config.range_proxy && !(*config.range_proxy > 0.0)) {
    throw DomainError("Hoeffding range proxy must be > 0");
  }
  const double range = config.range_proxy.value_or(values.max_total());
  int m = 0;
  double noise = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!HasMember(coalition, i)) continue;
    ++m;
    if (i < static_cast<int>(values.noise_distance.size())) {
      noise += values.noise_distance[i];
    }
  }
  return noise / m + DeviationCoefficient(m, n, config.confidence, config.mode) * range;
}

double ClippedValue(double b_ref, double k, double distance) {
  return std::max(0.0, b_ref - k * distance);
}

double CoalitionValueBound(ConsumerMask coalition, const IndividualValues& values,
                           double k, double b_ref, const HoeffdingConfig& config) {
  if (coalition == 0) return 0.0;
  return ClippedValue(b_ref, k, HoeffdingBound(coalition, values, config));
}

std::string_view VariantName(MechanismVariant variant) {
  switch (variant) {
    case MechanismVariant::kFin:
      return "fin";
    case MechanismVariant::kInf:
      return "inf";
    case MechanismVariant::kCenIr:
      return "cen-ir";
    case MechanismVariant::kCenIc:
      return "cen-ic";
  }
  return "unknown";
}

MechanismVariant ParseVariant(std::string_view name) {
  for (MechanismVariant v : kAllVariants) {
    if (name == VariantName(v)) return v;
  }
  throw ConfigError("unknown mechanism variant '" + std::string(name) +
                    "' (expected fin, inf, cen-ir or cen-ic)");
}

ReserveModel ReserveModel::Uniform(int n, double upper_bound) {
  if (!(upper_bound >= 0.0)) throw DomainError("reserve upper bound must be >= 0");
  ReserveModel model;
  model.lower.assign(n, 0.0);
  model.upper.assign(n, upper_bound);
  return model;
}

double ReserveModel::AcceptProbability(std::size_t i, double price) const {
  if (price >= upper[i]) return 1.0;
  if (price < lower[i]) return 0.0;
  return (price - lower[i]) / (upper[i] - lower[i]);
}

std::vector<double> ValueTable(const MarketInstance& instance,
                               MechanismVariant variant) {
  CheckEnumerable(instance.n);
  if (static_cast<int>(instance.individual.size()) != instance.n) {
    throw DomainError("individual values do not match the market size");
  }
  const std::size_t count = std::size_t{1} << instance.n;
  std::vector<double> values(count, 0.0);
  switch (variant) {
    case MechanismVariant::kFin:
    case MechanismVariant::kInf: {
      HoeffdingConfig config = instance.hoeffding;
      config.mode = variant == MechanismVariant::kFin ? PopulationMode::kFinite
                                                      : PopulationMode::kInfinite;
      for (std::size_t mask = 1; mask < count; ++mask) {
        values[mask] = CoalitionValueBound(static_cast<ConsumerMask>(mask),
                                           instance.individual, instance.k,
                                           instance.b_ref, config);
      }
      break;
    }
    case MechanismVariant::kCenIr:
    case MechanismVariant::kCenIc:
      if (instance.exact_distance.size() != count) {
        throw DomainError("centralized variants need the exact coalition distances");
      }
      for (std::size_t mask = 1; mask < count; ++mask) {
        values[mask] =
            ClippedValue(instance.b_ref, instance.k, instance.exact_distance[mask]);
      }
      break;
  }
  return values;
}

ConsumerMask SelectAgainstBids(std::span<const double> values,
                               std::span<const double> bids) {
  const int n = CheckTable(values, bids.size());
  const std::vector<double> sums = SubsetSums(bids);
  ConsumerMask best = 0;
  double best_objective = 0.0;
  const ConsumerMask count = ConsumerMask{1} << n;
  for (ConsumerMask mask = 1; mask < count; ++mask) {
    if (sums[mask] > values[mask]) continue;
    const double objective = values[mask] - sums[mask];
    if (Better(objective, mask, best_objective, best)) {
      best = mask;
      best_objective = objective;
    }
  }
  return best;
}

ConsumerMask SelectAtPostedPrice(std::span<const double> values,
                                 std::span<const double> bids, double price) {
  const int n = CheckTable(values, bids.size());
  ConsumerMask eligible = 0;
  for (int i = 0; i < n; ++i) {
    if (bids[i] <= price) eligible |= ConsumerMask{1} << i;
  }
  ConsumerMask best = 0;
  double best_objective = 0.0;
  // Walk the non-empty subsets of `eligible`.
  for (ConsumerMask mask = eligible; mask != 0; mask = (mask - 1) & eligible) {
    const double cost = std::popcount(mask) * price;
    if (cost > values[mask]) continue;
    const double objective = values[mask] - cost;
    if (Better(objective, mask, best_objective, best)) {
      best = mask;
      best_objective = objective;
    }
  }
  return best;
}

double OptimalPostedPrice(std::span<const double> values,
                          const ReserveModel& reserve, int grid_points) {
  const int n = CheckTable(values, reserve.upper.size());
  if (reserve.lower.size() != reserve.upper.size()) {
    throw DomainError("reserve model bounds have different sizes");
  }
  if (grid_points < 1) throw DomainError("posted-price grid needs >= 1 point");
  double top = 0.0;
  for (double u : reserve.upper) top = std::max(top, u);
  if (top == 0.0) return 0.0;

  const std::size_t count = std::size_t{1} << n;
  std::vector<double> best(count);
  std::vector<double> accept(n);
  double best_price = 0.0;
  double best_surplus = -std::numeric_limits<double>::infinity();
  for (int g = 0; g <= grid_points; ++g) {
    const double price = top * g / grid_points;
    // best[A]: retailer surplus when exactly the consumers in A accept.
    best[0] = 0.0;
    for (std::size_t a = 1; a < count; ++a) {
      const double cost = std::popcount(static_cast<ConsumerMask>(a)) * price;
      double b = cost <= values[a] ? values[a] - cost : 0.0;
      for (ConsumerMask rest = static_cast<ConsumerMask>(a); rest != 0; rest &= rest - 1) {
        const ConsumerMask bit = rest & (~rest + 1);
        b = std::max(b, best[a & ~bit]);
      }
      best[a] = b;
    }
    for (int i = 0; i < n; ++i) accept[i] = reserve.AcceptProbability(i, price);
    double expected = 0.0;
    for (std::size_t a = 0; a < count; ++a) {
      if (best[a] == 0.0) continue;
      double p = 1.0;
      for (int i = 0; i < n; ++i) {
        p *= HasMember(static_cast<ConsumerMask>(a), i) ? accept[i] : 1.0 - accept[i];
      }
      expected += p * best[a];
    }
    if (expected > best_surplus + 1e-12 * std::max(1.0, std::abs(expected))) {
      best_surplus = expected;
      best_price = price;
    }
  }
  return best_price;
}

double CriticalPrice(const AllocationRule& rule, std::span<const double> bids,
                     int i, double upper) {
  std::vector<double> probe(bids.begin(), bids.end());
  if (!HasMember(rule(probe), i)) {
    throw DomainError("critical price requested for an unselected consumer");
  }
  double lo = bids[i];
  double hi = std::max(upper, lo);
  probe[i] = hi;
  if (HasMember(rule(probe), i)) return hi;
  for (int iter = 0; iter < kBisectionIterations; ++iter) {
    if (hi - lo <= 1e-13 * std::max(1.0, hi)) break;
    const double mid = 0.5 * (lo + hi);
    probe[i] = mid;
    if (HasMember(rule(probe), i)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

ProcurementOutcome SolveProcurement(std::span<const double> bids,
                                    const MarketInstance& instance,
                                    MechanismVariant variant,
                                    const ReserveModel& reserve,
                                    ClearingMode clearing) {
  ValidateBids(bids, instance);
  const std::vector<double> values = ValueTable(instance, variant);
  const bool posted = UsesPostedPrice(variant, clearing);
  const double price = posted ? OptimalPostedPrice(values, reserve) : 0.0;
  return Assemble(Clear(values, bids, posted, price), values, instance);
}

std::vector<double> TrialUniforms(std::uint64_t seed, int trial, int n) {
  std::seed_seq seq{seed, static_cast<std::uint64_t>(trial), std::uint64_t{0x7472}};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> u(n);
  for (double& x : u) x = unit(rng);
  return u;
}

TrialTable SimulateTrials(const MarketInstance& instance, const TrialConfig& config) {
  if (config.n_trials < 1) throw DomainError("need at least one trial");
  CheckEnumerable(instance.n);
  const int n = instance.n;
  std::vector<std::vector<double>> uniforms;
  uniforms.reserve(config.n_trials);
  for (int t = 0; t < config.n_trials; ++t) {
    uniforms.push_back(TrialUniforms(config.seed, t, n));
  }
  const double reference =
      instance.realized_profit.empty() ? 0.0 : instance.realized_profit[0];

  TrialTable table;
  for (MechanismVariant variant : config.variants) {
    const std::vector<double> values = ValueTable(instance, variant);
    const bool posted = UsesPostedPrice(variant, config.clearing);
    for (double theta_bar : config.theta_bars) {
      const ReserveModel reserve = ReserveModel::Uniform(n, theta_bar);
      const double price = posted ? OptimalPostedPrice(values, reserve) : 0.0;
      TrialSummary summary;
      summary.theta_bar = theta_bar;
      summary.variant = variant;
      summary.reference_profit = reference;
      summary.mean_payment.assign(n, 0.0);
      summary.min_profit = std::numeric_limits<double>::infinity();
      summary.max_profit = -std::numeric_limits<double>::infinity();
      int feasible = 0;
      for (int t = 0; t < config.n_trials; ++t) {
        std::vector<double> bids(n);
        for (int i = 0; i < n; ++i) bids[i] = theta_bar * uniforms[t][i];
        ProcurementOutcome outcome =
            Assemble(Clear(values, bids, posted, price), values, instance);
        const double profit =
            outcome.realized_profit.value_or(reference + outcome.objective);
        const bool ok = outcome.ex_post_feasible.value_or(outcome.budget_feasible);
        summary.mean_profit += profit;
        summary.min_profit = std::min(summary.min_profit, profit);
        summary.max_profit = std::max(summary.max_profit, profit);
        summary.mean_objective += outcome.objective;
        summary.mean_selected += std::popcount(outcome.selected);
        for (int i = 0; i < n; ++i) summary.mean_payment[i] += outcome.payments[i];
        feasible += ok ? 1 : 0;
        table.records.push_back(
            TrialRecord{theta_bar, t, variant, std::move(bids), std::move(outcome)});
      }
      const double trials = config.n_trials;
      summary.mean_profit /= trials;
      summary.mean_objective /= trials;
      summary.mean_selected /= trials;
      for (double& p : summary.mean_payment) p /= trials;
      summary.feasibility_probability = feasible / trials;
      table.summaries.push_back(std::move(summary));
    }
  }
  return table;
}

std::string_view SweepParameterName(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::kConfidence:
      return "delta";
    case SweepParameter::kLipschitz:
      return "k";
    case SweepParameter::kReferenceBudget:
      return "b_ref";
  }
  return "unknown";
}

std::vector<SweepRow> SensitivitySweep(SweepParameter parameter,
                                       std::span<const double> values,
                                       const MarketInstance& instance,
                                       double theta_ratio, const TrialConfig& config) {
  if (!(theta_ratio >= 0.0)) throw DomainError("sweep reserve ratio must be >= 0");
  std::vector<SweepRow> rows;
  for (double value : values) {
    MarketInstance varied = instance;
    switch (parameter) {
      case SweepParameter::kConfidence:
        if (!(value > 0.0 && value < 1.0)) {
          throw DomainError("confidence sweep values must lie in (0, 1)");
        }
        varied.hoeffding.confidence = value;
        break;
      case SweepParameter::kLipschitz:
        if (!(value > 0.0)) throw DomainError("Lipschitz sweep values must be > 0");
        varied.k = value;
        break;
      case SweepParameter::kReferenceBudget:
        if (!(value >= 0.0)) throw DomainError("budget sweep values must be >= 0");
        varied.b_ref = value;
        break;
    }
    const double theta_bar = theta_ratio * varied.b_ref / varied.n;
    TrialConfig single = config;
    single.theta_bars = {theta_bar};
    const TrialTable table = SimulateTrials(varied, single);
    for (const TrialSummary& s : table.summaries) {
      rows.push_back(SweepRow{value, theta_bar, s.variant, s.mean_profit,
                              s.feasibility_probability, s.mean_selected,
                              s.reference_profit});
    }
  }
  return rows;
}

}  // namespace smartmarket
