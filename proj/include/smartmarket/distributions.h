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

#ifndef SMARTMARKET_DISTRIBUTIONS_H_
#define SMARTMARKET_DISTRIBUTIONS_H_

#include <span>
#include <variant>
#include <vector>

namespace smartmarket {

// Univariate normal. A zero stddev is a point mass at `mean`; demand models
// require stddev > 0 (see ValidateDemand).
struct GaussianDist {
  double mean = 0.0;
  double stddev = 1.0;
};

// Point mass at zero.
struct DiracZero {};

// Discrete distribution on sorted support points with probability weights.
class EmpiricalDist {
 public:
  // Validates: non-empty, nondecreasing values, nonnegative weights summing
  // to 1 within 1e-12. Throws DomainError otherwise.
  EmpiricalDist(std::vector<double> values, std::vector<double> weights);

  // Equal-weight distribution over `samples` (sorted internally).
  static EmpiricalDist FromSamples(std::vector<double> samples);
  static EmpiricalDist FromSamples(std::span<const double> samples);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return values_.size(); }
  bool equal_weights() const { return equal_weights_; }

  double Mean() const;

  // Left-continuous generalized inverse: smallest support point whose
  // cumulative weight reaches u.
  double Quantile(double u) const;

  // Cumulative weight at or below x.
  double Cdf(double x) const;

 private:
  struct SortedEqualWeights {};
  EmpiricalDist(SortedEqualWeights, std::vector<double> sorted_values);

  std::vector<double> values_;
  std::vector<double> weights_;
  bool equal_weights_ = false;
};

using DemandModel = std::variant<GaussianDist, EmpiricalDist>;

// Throws DomainError for a Gaussian with stddev <= 0 or non-finite params.
void ValidateDemand(const DemandModel& demand);

double Mean(const DemandModel& demand);

}  // namespace smartmarket

#endif  // SMARTMARKET_DISTRIBUTIONS_H_
