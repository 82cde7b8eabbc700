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

#include "smartmarket/coalition.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <string>

#include "smartmarket/cs1_population.h"
#include "smartmarket/errors.h"
#include "smartmarket/wasserstein.h"

namespace smartmarket {

namespace {

double Profit(double bid, const GaussianDist& demand, const MarketPrices& prices) {
  return ExpectedProfit(bid, DemandModel{demand}, prices);
}

double Fractile(const GaussianDist& forecast, const MarketPrices& prices) {
  return OptimalBid(DemandModel{forecast}, prices);
}

const MarketPrices& RequirePrices(const ValuationContext& context) {
  if (!context.prices) throw ConfigError("coalition value needs market prices");
  return *context.prices;
}

double RequireK(const ValuationContext& context) {
  if (!context.k) throw ConfigError("coalition value needs a Lipschitz constant K");
  if (!(*context.k > 0.0)) throw ConfigError("Lipschitz constant K must be > 0");
  return *context.k;
}

// Quantities shared by every coalition of one population.
class Evaluator {
 public:
  Evaluator(ValueKind kind, const ValuationContext& context)
      : kind_(kind), context_(context) {
    if (context.population == nullptr || context.population->empty()) {
      throw ConfigError("coalition value needs a consumer population");
    }
    const Cs1Population& population = *context.population;
    n_ = static_cast<int>(population.size());
    if (n_ > kMaxEnumeratedConsumers) {
      throw DomainError("populations above " +
                        std::to_string(kMaxEnumeratedConsumers) +
                        " consumers cannot be enumerated");
    }
    best_ = ForecastFor(FullMask(n_), population);
    reference_ = ForecastFor(0, population);
    if (kind == ValueKind::kDeltaSigma) {
      if (!context.c_sigma) throw ConfigError("delta-sigma value needs c_sigma");
      return;
    }
    const MarketPrices& prices = RequirePrices(context);
    base_profit_ = Profit(Fractile(reference_, prices), best_, prices);
    gap_ = Profit(Fractile(best_, prices), best_, prices) - base_profit_;
    switch (kind) {
      case ValueKind::kWRef:
      case ValueKind::kWTarget:
        k_ = RequireK(context);
        break;
      case ValueKind::kWFin:
      case ValueKind::kWInf:
        k_ = RequireK(context);
        if (!context.confidence) {
          throw ConfigError("Hoeffding value needs a confidence level");
        }
        hoeffding_.confidence = *context.confidence;
        hoeffding_.range_proxy = context.range_proxy;
        hoeffding_.mode = kind == ValueKind::kWFin ? PopulationMode::kFinite
                                                   : PopulationMode::kInfinite;
        individual_ = Cs1IndividualValues(population, context.privacy);
        break;
      default:
        break;
    }
  }

  int n() const { return n_; }

  double Value(const Coalition& coalition) const {
    if (!coalition.retailer) return 0.0;
    if (n_ < 32 && (coalition.members >> n_) != 0) {
      throw DomainError("coalition refers to consumers outside the population");
    }
    const Cs1Population& population = *context_.population;
    const GaussianDist forecast =
        ForecastFor(coalition.members, population, context_.privacy);
    switch (kind_) {
      case ValueKind::kDeltaPi: {
        const MarketPrices& prices = *context_.prices;
        return Profit(Fractile(forecast, prices), best_, prices) - base_profit_;
      }
      case ValueKind::kDeltaSigma:
        return *context_.c_sigma * (reference_.stddev - forecast.stddev);
      case ValueKind::kDro: {
        const MarketPrices& prices = *context_.prices;
        const double bid = context_.dro_bid ? context_.dro_bid(forecast, prices)
                                            : Fractile(forecast, prices);
        return Profit(bid, forecast, prices) -
               prices.underage_cost() * W1(forecast, best_) - base_profit_;
      }
      case ValueKind::kWRef:
        return k_ * W1(reference_, forecast);
      case ValueKind::kWTarget:
        return std::max(0.0, gap_ - k_ * TargetDistance(coalition.members, forecast));
      case ValueKind::kWFin:
      case ValueKind::kWInf: {
        // The retailer alone knows its own reference forecast exactly.
        const double distance =
            coalition.members == 0
                ? W1(best_, reference_)
                : HoeffdingBound(coalition.members, individual_, hoeffding_);
        return std::max(0.0, gap_ - k_ * distance);
      }
    }
    return 0.0;
  }

 private:
  double TargetDistance(ConsumerMask members, const GaussianDist& forecast) const {
    if (context_.privacy == nullptr || context_.dp_penalty == DpPenalty::kExact) {
      return W1(best_, forecast);
    }
    const Cs1Population& population = *context_.population;
    double distance = W1(best_, ForecastFor(members, population));
    for (int i = 0; i < n_; ++i) {
      if (HasMember(members, i)) {
        distance += NoiseDistance(context_.privacy->dp_sigma[i]);
      }
    }
    return distance;
  }

  ValueKind kind_;
  const ValuationContext& context_;
  int n_ = 0;
  GaussianDist best_;
  GaussianDist reference_;
  double base_profit_ = 0.0;
  double gap_ = 0.0;
  double k_ = 0.0;
  HoeffdingConfig hoeffding_;
  IndividualValues individual_;
};

}  // namespace

std::string_view ValueKindName(ValueKind kind) {
  switch (kind) {
    case ValueKind::kDeltaPi:
      return "delta_pi";
    case ValueKind::kDeltaSigma:
      return "delta_sigma";
    case ValueKind::kDro:
      return "dro";
    case ValueKind::kWRef:
      return "w_ref";
    case ValueKind::kWTarget:
      return "w_target";
    case ValueKind::kWFin:
      return "w_fin";
    case ValueKind::kWInf:
      return "w_inf";
  }
  return "unknown";
}

ValueKind ParseValueKind(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (ValueKind kind : kAllValueKinds) {
    if (lower == ValueKindName(kind)) return kind;
  }
  throw ConfigError("unknown value function '" + std::string(name) + "'");
}

bool IsWassersteinKind(ValueKind kind) {
  return kind == ValueKind::kWRef || kind == ValueKind::kWTarget ||
         kind == ValueKind::kWFin || kind == ValueKind::kWInf;
}

double CoalitionValue(const Coalition& coalition, ValueKind kind,
                      const ValuationContext& context) {
  return Evaluator(kind, context).Value(coalition);
}

std::uint32_t GameMask(const Coalition& coalition, int n) {
  return coalition.members | (coalition.retailer ? (std::uint32_t{1} << n) : 0u);
}

std::vector<double> BuildGame(ValueKind kind, const ValuationContext& context) {
  const Evaluator evaluator(kind, context);
  const int n = evaluator.n();
  const std::uint32_t retailer_bit = std::uint32_t{1} << n;
  std::vector<double> values(std::size_t{1} << (n + 1), 0.0);
  for (std::uint32_t members = 0; members < retailer_bit; ++members) {
    values[members | retailer_bit] = evaluator.Value(Coalition{members, true});
  }
  return IsWassersteinKind(kind) ? ZeroClip(values) : values;
}

std::vector<double> ZeroClip(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v = std::max(v, 0.0);
  return out;
}

std::vector<double> Shapley(std::span<const double> values, int players) {
  if (players < 1 || players > kMaxEnumeratedConsumers + 1) {
    throw DomainError("Shapley enumeration supports 1.." +
                      std::to_string(kMaxEnumeratedConsumers + 1) + " players");
  }
  const std::size_t count = std::size_t{1} << players;
  if (values.size() != count) {
    throw DomainError("Shapley needs a value for each of the 2^" +
                      std::to_string(players) + " coalitions");
  }
  // weight[s] = s! (n - s - 1)! / n!
  std::vector<double> weight(players);
  for (int s = 0; s < players; ++s) {
    double binom = 1.0;
    for (int j = 1; j <= s; ++j) binom = binom * (players - 1 - s + j) / j;
    weight[s] = 1.0 / (players * binom);
  }
  std::vector<double> phi(players, 0.0);
  for (std::size_t mask = 0; mask < count; ++mask) {
    const double w = weight[std::popcount(static_cast<std::uint32_t>(mask)) %
                            players];
    for (int i = 0; i < players; ++i) {
      const std::size_t bit = std::size_t{1} << i;
      if (mask & bit) continue;
      phi[i] += w * (values[mask | bit] - values[mask]);
    }
  }
  return phi;
}

Cs1Reference ComputeCs1Reference(const Cs1Population& population,
                                 const MarketPrices& prices) {
  if (population.empty()) throw DomainError("empty population");
  const int n = static_cast<int>(population.size());
  const GaussianDist best = ForecastFor(FullMask(n), population);
  const GaussianDist reference = ForecastFor(0, population);
  Cs1Reference out;
  out.best_profit = Profit(Fractile(best, prices), best, prices);
  out.reference_profit = Profit(Fractile(reference, prices), best, prices);
  out.gap = out.best_profit - out.reference_profit;
  out.reference_distance = W1(reference, best);
  if (!(out.reference_distance > 0.0)) {
    throw DomainError("reference and best forecasts coincide; K is undefined");
  }
  out.calibrated_k = out.gap / out.reference_distance;
  return out;
}

IndividualValues Cs1IndividualValues(const Cs1Population& population,
                                     const PrivacyProfile* privacy) {
  const int n = static_cast<int>(population.size());
  const GaussianDist best = ForecastFor(FullMask(n), population);
  IndividualValues values;
  values.data_distance.resize(n);
  values.noise_distance.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    values.data_distance[i] = W1(ForecastFor(ConsumerMask{1} << i, population), best);
    if (privacy != nullptr) {
      values.noise_distance[i] = NoiseDistance(privacy->dp_sigma.at(i));
    }
  }
  return values;
}

MechanismMetrics ComputeMechanismMetrics(std::span<const double> candidate_phi,
                                         std::span<const double> truth_phi,
                                         std::span<const double> candidate_values,
                                         std::span<const double> truth_values,
                                         double normalizer) {
  const std::size_t players = truth_phi.size();
  if (players < 2 || candidate_phi.size() != players) {
    throw DomainError("allocations must cover the same players (>= 2)");
  }
  const std::size_t count = std::size_t{1} << players;
  if (candidate_values.size() != count || truth_values.size() != count) {
    throw DomainError("value tables do not match the player set");
  }
  if (!(normalizer > 0.0)) throw DomainError("misallocation normalizer must be > 0");

  MechanismMetrics m;
  const std::size_t retailer = std::size_t{1} << (players - 1);
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t mask = retailer + 1; mask < count; ++mask) {
    x.push_back(truth_values[mask]);
    y.push_back(candidate_values[mask]);
  }
  const double size = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  int nonpositive = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    mx += x[j];
    my += y[j];
    nonpositive += y[j] <= 0.0 ? 1 : 0;
  }
  mx /= size;
  my /= size;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    sxy += (x[j] - mx) * (y[j] - my);
    sxx += (x[j] - mx) * (x[j] - mx);
    syy += (y[j] - my) * (y[j] - my);
  }
  if (sxx > 0.0 && syy > 0.0) m.correlation = sxy / std::sqrt(sxx * syy);
  m.nonpositive_share = nonpositive / size;

  double candidate_total = 0.0;
  double truth_total = 0.0;
  for (std::size_t i = 0; i < players; ++i) {
    candidate_total += candidate_phi[i];
    truth_total += truth_phi[i];
    m.misallocation += std::abs(truth_phi[i] - candidate_phi[i]);
  }
  m.total_difference = candidate_total - truth_total;
  m.misallocation_fraction = m.misallocation / normalizer;
  m.retailer_share =
      candidate_total != 0.0 ? candidate_phi[players - 1] / candidate_total : 0.0;
  return m;
}

}  // namespace smartmarket
