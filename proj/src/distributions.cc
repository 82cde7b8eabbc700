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

#include "smartmarket/distributions.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "smartmarket/errors.h"

namespace smartmarket {

namespace {

constexpr double kWeightSumTolerance = 1e-12;
// Slack when comparing cumulative weights against a quantile level.
constexpr double kCumulativeSlack = 1e-12;

}  // namespace

EmpiricalDist::EmpiricalDist(std::vector<double> values,
                             std::vector<double> weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
  if (values_.empty()) throw DomainError("empirical distribution has empty support");
  if (values_.size() != weights_.size()) {
    throw DomainError("empirical distribution: values/weights size mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DomainError("empirical distribution: non-finite support point");
    }
    if (i > 0 && values_[i] < values_[i - 1]) {
      throw DomainError("empirical distribution: support not sorted");
    }
    if (!(weights_[i] >= 0.0)) {
      throw DomainError("empirical distribution: negative weight");
    }
    total += weights_[i];
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw DomainError("empirical distribution: weights sum to " +
                      std::to_string(total));
  }
  equal_weights_ = std::all_of(weights_.begin(), weights_.end(),
                               [&](double w) { return w == weights_.front(); });
}

EmpiricalDist::EmpiricalDist(SortedEqualWeights, std::vector<double> sorted_values)
    : values_(std::move(sorted_values)),
      weights_(values_.size(), 1.0 / static_cast<double>(values_.size())),
      equal_weights_(true) {}

EmpiricalDist EmpiricalDist::FromSamples(std::vector<double> samples) {
  if (samples.empty()) throw DomainError("empirical distribution has empty support");
  for (double v : samples) {
    if (!std::isfinite(v)) {
      throw DomainError("empirical distribution: non-finite support point");
    }
  }
  std::sort(samples.begin(), samples.end());
  return EmpiricalDist(SortedEqualWeights{}, std::move(samples));
}

EmpiricalDist EmpiricalDist::FromSamples(std::span<const double> samples) {
  return FromSamples(std::vector<double>(samples.begin(), samples.end()));
}

double EmpiricalDist::Mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) m += values_[i] * weights_[i];
  return m;
}

double EmpiricalDist::Quantile(double u) const {
  if (equal_weights_) {
    const double n = static_cast<double>(values_.size());
    auto k = static_cast<std::size_t>(std::ceil(u * n - kCumulativeSlack * n));
    k = std::clamp<std::size_t>(k, 1, values_.size());
    return values_[k - 1];
  }
  double cumulative = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    cumulative += weights_[i];
    if (cumulative >= u - kCumulativeSlack) return values_[i];
  }
  return values_.back();
}

double EmpiricalDist::Cdf(double x) const {
  double cumulative = 0.0;
  for (std::size_t i = 0; i < values_.size() && values_[i] <= x; ++i) {
    cumulative += weights_[i];
  }
  return std::min(cumulative, 1.0);
}

void ValidateDemand(const DemandModel& demand) {
  if (const auto* g = std::get_if<GaussianDist>(&demand)) {
    if (!std::isfinite(g->mean) || !std::isfinite(g->stddev) || g->stddev <= 0.0) {
      throw DomainError("Gaussian demand requires finite mean and stddev > 0");
    }
  }
}

double Mean(const DemandModel& demand) {
  return std::visit(
      [](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, GaussianDist>) {
          return d.mean;
        } else {
          return d.Mean();
        }
      },
      demand);
}

}  // namespace smartmarket
