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

#ifndef SMARTMARKET_FORECASTER_H_
#define SMARTMARKET_FORECASTER_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace smartmarket {

inline constexpr int kPeriodsPerDay = 48;

// Lag offsets in periods: feature j of the row for time t is series[t - offsets[j]].
struct LagFeatureSpec {
  std::vector<int> offsets;

  // [h, h+1, 2h, 2h+1, 3h, 3h+1].
  static LagFeatureSpec Correct(int h = kPeriodsPerDay);
  // [h-6, h-10, 2h-6, 2h-10, 3h+10, 3h+4].
  static LagFeatureSpec Misspecified(int h = kPeriodsPerDay);
  int max_offset() const;
};

struct Dataset {
  Eigen::MatrixXd features;  // rows x lags
  Eigen::VectorXd targets;
  // Series index of each row's target.
  std::vector<std::size_t> time_index;

  Eigen::Index rows() const { return features.rows(); }
  // Rows whose target index lies in [begin, end).
  Dataset Slice(std::size_t begin, std::size_t end) const;
};

// One row per t in [max_offset, size). Throws DomainError when the series is
// not longer than the largest lag or an offset is not positive.
Dataset BuildLagFeatures(std::span<const double> series, const LagFeatureSpec& spec);

// Mean of (1 - tau)[q - d]^+ + tau [d - q]^+.
double PinballLoss(std::span<const double> predictions,
                   std::span<const double> targets, double tau);

struct TrainConfig {
  int epochs = 20;
  double learning_rate = 1e-3;
  int hidden_neurons = 3;
  // Mini-batch size; 0 uses the whole dataset per step.
  int batch_size = 32;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;
};

// Single hidden layer ReLU network with identity output. Inputs and output
// share one affine scaling (x - mean) / scale, so the network's Lipschitz
// constant in kWh equals that of the standardized map.
struct AnnModel {
  Eigen::MatrixXd w1;  // hidden x inputs
  Eigen::VectorXd b1;
  Eigen::RowVectorXd w2;  // 1 x hidden
  double b2 = 0.0;
  double scaler_mean = 0.0;
  double scaler_scale = 1.0;

  int inputs() const { return static_cast<int>(w1.cols()); }
  int hidden() const { return static_cast<int>(w1.rows()); }

  // Bid for one feature row in kWh. Throws DomainError on a dimension
  // mismatch.
  double Predict(std::span<const double> x) const;
  Eigen::VectorXd Predict(const Eigen::MatrixXd& features) const;
  // Forward pass in standardized units.
  double PredictStandardized(const Eigen::VectorXd& z) const;
};

// Gradients of the mean pinball loss (standardized units) with respect to
// the parameters.
struct AnnGradient {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::RowVectorXd w2;
  double b2 = 0.0;
};

// Mean pinball loss of the model on standardized inputs/targets and its
// gradient by backpropagation.
double LossAndGradient(const AnnModel& model, const Eigen::MatrixXd& z_features,
                       const Eigen::VectorXd& z_targets, double tau,
                       AnnGradient* gradient);

// Largest singular value.
double SpectralNorm(const Eigen::MatrixXd& m);

// ||w1|| ||w2||: Lipschitz bound of the network (activations are 1-Lipschitz).
double ModelLipschitz(const AnnModel& model);

// Scales each weight matrix by min(1, sqrt(k_f) / ||W||).
void ClipWeights(AnnModel* model, double k_f);

// Adam on the pinball loss with weight clipping after every step, so
// ModelLipschitz(model) <= k_f throughout. The scaler is fitted on the
// targets. Deterministic in config.seed. Throws DomainError on an empty
// dataset or bad config and NumericalError if the loss becomes non-finite.
AnnModel Train(const Dataset& data, double tau, const TrainConfig& config,
               double k_f);

// Plain-text model format:
//   smartmarket-ann 1
//   inputs <n> hidden <h>
//   activation relu identity
//   scaler <mean> <scale>
//   w1 then <h> rows of <n> values, b1, w2, b2 one line each.
void SaveModel(const AnnModel& model, std::ostream& out);
// Throws DataError on malformed input.
AnnModel LoadModel(std::istream& in);

}  // namespace smartmarket

#endif  // SMARTMARKET_FORECASTER_H_
