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

#include "smartmarket/wasserstein.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "smartmarket/errors.h"
#include "smartmarket/normal.h"

namespace smartmarket {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double EmpiricalEmpirical(const EmpiricalDist& a, const EmpiricalDist& b) {
  if (a.equal_weights() && b.equal_weights() && a.size() == b.size()) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      total += std::abs(a.values()[i] - b.values()[i]);
    }
    return total / static_cast<double>(a.size());
  }
  // Both quantile functions are step functions in u; walk the union of their
  // breakpoints.
  std::size_t i = 0;
  std::size_t j = 0;
  double left_a = a.weights()[0];
  double left_b = b.weights()[0];
  double total = 0.0;
  while (i < a.size() && j < b.size()) {
    const double step = std::min(left_a, left_b);
    total += step * std::abs(a.values()[i] - b.values()[j]);
    left_a -= step;
    left_b -= step;
    if (left_a <= 0.0) {
      if (++i < a.size()) left_a = a.weights()[i];
    }
    if (left_b <= 0.0) {
      if (++j < b.size()) left_b = b.weights()[j];
    }
  }
  return total;
}

// Integral of (z - c) phi(z) over [lo, hi].
double LinearMoment(double lo, double hi, double c) {
  const double pdf_lo = std::isfinite(lo) ? NormalPdf(lo) : 0.0;
  const double pdf_hi = std::isfinite(hi) ? NormalPdf(hi) : 0.0;
  // Phi(hi) - Phi(lo), computed on the side of zero with less cancellation.
  const double mass = (lo >= 0.0) ? NormalSurvival(lo) - NormalSurvival(hi)
                                  : NormalCdf(hi) - NormalCdf(lo);
  return pdf_lo - pdf_hi - c * mass;
}

// Integral of |z - c| phi(z) over [lo, hi].
double AbsMoment(double lo, double hi, double c) {
  if (c <= lo) return LinearMoment(lo, hi, c);
  if (c >= hi) return -LinearMoment(lo, hi, c);
  return -LinearMoment(lo, c, c) + LinearMoment(c, hi, c);
}

double GaussianEmpirical(const GaussianDist& g, const EmpiricalDist& e) {
  if (g.stddev == 0.0) {
    return EmpiricalEmpirical(EmpiricalDist({g.mean}, {1.0}), e);
  }
  double total = 0.0;
  double cumulative = 0.0;
  double z_lo = -kInf;
  for (std::size_t k = 0; k < e.size(); ++k) {
    cumulative += e.weights()[k];
    const double z_hi = (k + 1 == e.size()) ? kInf : NormalQuantile(cumulative);
    if (z_hi > z_lo) {
      const double c = (e.values()[k] - g.mean) / g.stddev;
      total += g.stddev * AbsMoment(z_lo, z_hi, c);
    }
    z_lo = std::max(z_lo, z_hi);
  }
  return total;
}

struct W1Visitor {
  double operator()(const EmpiricalDist& a, const EmpiricalDist& b) const {
    return EmpiricalEmpirical(a, b);
  }
  double operator()(const GaussianDist& a, const GaussianDist& b) const {
    return FoldedNormalMean(a.mean - b.mean, a.stddev - b.stddev);
  }
  double operator()(const GaussianDist& a, const EmpiricalDist& b) const {
    return GaussianEmpirical(a, b);
  }
  double operator()(const EmpiricalDist& a, const GaussianDist& b) const {
    return GaussianEmpirical(b, a);
  }
  double operator()(const GaussianDist& a, DiracZero) const {
    return FoldedNormalMean(a.mean, a.stddev);
  }
  double operator()(DiracZero, const GaussianDist& b) const {
    return FoldedNormalMean(b.mean, b.stddev);
  }
  double operator()(const EmpiricalDist& a, DiracZero) const {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      total += a.weights()[i] * std::abs(a.values()[i]);
    }
    return total;
  }
  double operator()(DiracZero z, const EmpiricalDist& b) const {
    return (*this)(b, z);
  }
  double operator()(DiracZero, DiracZero) const { return 0.0; }
};

void Validate(const Distribution& d) {
  if (const auto* g = std::get_if<GaussianDist>(&d)) {
    if (!std::isfinite(g->mean) || !std::isfinite(g->stddev) || g->stddev < 0.0) {
      throw DomainError("Gaussian distribution requires finite mean, stddev >= 0");
    }
  }
}

}  // namespace

double W1(const Distribution& a, const Distribution& b) {
  Validate(a);
  Validate(b);
  return std::visit(W1Visitor{}, a, b);
}

double W1Samples(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("W1 of empty sample");
  return EmpiricalEmpirical(EmpiricalDist::FromSamples(a),
                            EmpiricalDist::FromSamples(b));
}

double NoiseDistance(double dp_sigma) {
  if (!(dp_sigma >= 0.0)) throw DomainError("DP noise stddev must be >= 0");
  return dp_sigma * std::sqrt(2.0 / std::numbers::pi);
}

double IndividualValue(const EmpiricalDist& consumer_train,
                       const EmpiricalDist& target_train, double dp_sigma,
                       double concentration_slack) {
  return W1(consumer_train, target_train) + NoiseDistance(dp_sigma) +
         concentration_slack;
}

std::vector<double> TimeAlignedAverage(std::span<const std::vector<double>> series) {
  if (series.empty()) throw DomainError("aggregate of zero series");
  const std::size_t length = series.front().size();
  if (length == 0) throw DomainError("aggregate of empty series");
  std::vector<double> average(length, 0.0);
  for (const auto& s : series) {
    if (s.size() != length) {
      throw DomainError("aggregate: series lengths differ (" +
                        std::to_string(s.size()) + " vs " +
                        std::to_string(length) + ")");
    }
    for (std::size_t t = 0; t < length; ++t) average[t] += s[t];
  }
  const double n = static_cast<double>(series.size());
  for (double& v : average) v /= n;
  return average;
}

EmpiricalDist TargetAggregate(std::span<const std::vector<double>> series) {
  return EmpiricalDist::FromSamples(TimeAlignedAverage(series));
}

}  // namespace smartmarket
