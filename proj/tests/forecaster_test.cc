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
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "smartmarket/errors.h"
#include "smartmarket/forecaster.h"

namespace smartmarket {
namespace {

// Oracle: power iteration on m^T m.
double PowerIterationNorm(const Eigen::MatrixXd& m) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m.cols());
  double lambda = 0.0;
  for (int i = 0; i < 5000; ++i) {
    const Eigen::VectorXd w = m.transpose() * (m * v);
    lambda = w.norm();
    v = w / lambda;
  }
  return std::sqrt(lambda);
}

AnnModel RandomModel(std::mt19937_64& rng, int inputs, int hidden) {
  std::normal_distribution<double> z;
  AnnModel m;
  m.w1 = Eigen::MatrixXd::NullaryExpr(hidden, inputs, [&] { return z(rng); });
  m.b1 = Eigen::VectorXd::NullaryExpr(hidden, [&] { return z(rng); });
  m.w2 = Eigen::RowVectorXd::NullaryExpr(hidden, [&] { return z(rng); });
  m.b2 = z(rng);
  m.scaler_mean = 2.0;
  m.scaler_scale = 3.0;
  return m;
}

TEST(LagFeaturesTest, OffsetsAndRows) {
  std::vector<double> s(10);
  for (int i = 0; i < 10; ++i) s[i] = i;
  const Dataset d = BuildLagFeatures(s, LagFeatureSpec{{1, 3}});
  ASSERT_EQ(d.rows(), 7);
  EXPECT_EQ(d.time_index.front(), 3u);
  EXPECT_DOUBLE_EQ(d.features(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(d.features(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(d.targets(6), 9.0);
  const Dataset tail = d.Slice(8, 10);
  ASSERT_EQ(tail.rows(), 2);
  EXPECT_DOUBLE_EQ(tail.targets(0), 8.0);
  EXPECT_THROW(BuildLagFeatures(std::vector<double>(3), LagFeatureSpec{{3}}), DomainError);
  EXPECT_THROW(BuildLagFeatures(s, LagFeatureSpec{{0}}), DomainError);
}

TEST(LagFeaturesTest, Presets) {
  EXPECT_EQ(LagFeatureSpec::Correct().offsets, (std::vector<int>{48, 49, 96, 97, 144, 145}));
  EXPECT_EQ(LagFeatureSpec::Misspecified().offsets,
            (std::vector<int>{42, 38, 90, 86, 154, 148}));
  EXPECT_EQ(LagFeatureSpec::Misspecified().max_offset(), 154);
}

TEST(PinballTest, HandComputed) {
  const std::vector<double> q = {1.0, 3.0}, d = {2.0, 2.0};
  // tau * 1 for the shortfall, (1 - tau) * 1 for the surplus.
  EXPECT_NEAR(PinballLoss(q, d, 0.3), 0.5 * (0.3 + 0.7), 1e-15);
  EXPECT_THROW(PinballLoss(q, std::vector<double>{1.0}, 0.3), DomainError);
  EXPECT_THROW(PinballLoss(q, d, 1.0), DomainError);
}

TEST(SpectralNormTest, MatchesPowerIteration) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    std::normal_distribution<double> z;
    const Eigen::MatrixXd m = Eigen::MatrixXd::NullaryExpr(1 + t % 4, 1 + t % 6,
                                                           [&] { return z(rng); });
    EXPECT_NEAR(SpectralNorm(m), PowerIterationNorm(m), 1e-9 * PowerIterationNorm(m));
  }
}

TEST(SpectralNormTest, ClippingBoundsLipschitz) {
  std::mt19937_64 rng(2);
  AnnModel m = RandomModel(rng, 6, 3);
  ClipWeights(&m, 1.0);
  EXPECT_LE(ModelLipschitz(m), 1.0 + 1e-12);
  EXPECT_LE(SpectralNorm(m.w1), 1.0 + 1e-12);
  // Already small weights are untouched.
  const Eigen::MatrixXd before = m.w1;
  ClipWeights(&m, 4.0);
  EXPECT_EQ(m.w1, before);
  EXPECT_THROW(ClipWeights(&m, 0.0), DomainError);
}

TEST(BackpropTest, MatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 5; ++trial) {
    AnnModel m = RandomModel(rng, 4, 3);
    const Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(20, 4, [&] { return z(rng); });
    const Eigen::VectorXd y = Eigen::VectorXd::NullaryExpr(20, [&] { return z(rng); });
    AnnGradient g;
    LossAndGradient(m, x, y, 0.7, &g);
    const double h = 1e-7;
    auto check = [&](double* param, double analytic) {
      const double saved = *param;
      *param = saved + h;
      const double up = LossAndGradient(m, x, y, 0.7, nullptr);
      *param = saved - h;
      const double down = LossAndGradient(m, x, y, 0.7, nullptr);
      *param = saved;
      const double numeric = (up - down) / (2 * h);
      EXPECT_LE(std::abs(numeric - analytic), 1e-5 * std::max(1.0, std::abs(analytic)));
    };
    for (Eigen::Index i = 0; i < m.w1.size(); ++i) check(m.w1.data() + i, g.w1.data()[i]);
    for (Eigen::Index i = 0; i < m.b1.size(); ++i) check(m.b1.data() + i, g.b1(i));
    for (Eigen::Index i = 0; i < m.w2.size(); ++i) check(m.w2.data() + i, g.w2(i));
    check(&m.b2, g.b2);
  }
}

TEST(TrainTest, ConstantFeaturesLearnQuantile) {
  std::mt19937_64 rng(4);
  std::lognormal_distribution<double> demand(3.0, 0.3);
  Dataset d;
  const int rows = 2000;
  d.features = Eigen::MatrixXd::Constant(rows, 2, 20.0);
  d.targets.resize(rows);
  for (int i = 0; i < rows; ++i) d.targets(i) = demand(rng);
  for (int i = 0; i < rows; ++i) d.time_index.push_back(i);
  std::vector<double> sorted(d.targets.data(), d.targets.data() + rows);
  std::sort(sorted.begin(), sorted.end());
  TrainConfig config;
  config.epochs = 300;
  config.learning_rate = 0.01;
  config.batch_size = 0;
  for (double tau : {0.3, 0.5, 0.9}) {
    const AnnModel m = Train(d, tau, config, 1.0);
    const double expected = sorted[static_cast<std::size_t>(std::ceil(tau * rows)) - 1];
    const std::vector<double> x = {20.0, 20.0};
    EXPECT_NEAR(m.Predict(x), expected, 0.01 * expected) << "tau " << tau;
  }
}

TEST(TrainTest, LipschitzHoldsOnSampledPairs) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z(5.0, 2.0);
  const int rows = 500;
  Dataset d;
  d.features = Eigen::MatrixXd::NullaryExpr(rows, 6, [&] { return z(rng); });
  d.targets = d.features.rowwise().mean() * 1.5;
  for (int i = 0; i < rows; ++i) d.time_index.push_back(i);
  TrainConfig config;
  config.epochs = 10;
  const AnnModel m = Train(d, 0.5, config, 1.0);
  EXPECT_LE(ModelLipschitz(m), 1.0 + 1e-9);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int pair = 0; pair < 10000; ++pair) {
    std::vector<double> a(6), b(6);
    double dist = 0.0;
    for (int j = 0; j < 6; ++j) {
      a[j] = u(rng);
      b[j] = a[j] + 0.1 * u(rng);
      dist += (a[j] - b[j]) * (a[j] - b[j]);
    }
    EXPECT_LE(std::abs(m.Predict(a) - m.Predict(b)), std::sqrt(dist) + 1e-9);
  }
}

TEST(TrainTest, DeterministicAndValidated) {
  Dataset d;
  d.features = Eigen::MatrixXd::Random(50, 3);
  d.targets = Eigen::VectorXd::Random(50);
  for (int i = 0; i < 50; ++i) d.time_index.push_back(i);
  TrainConfig config;
  config.seed = 9;
  const AnnModel a = Train(d, 0.5, config, 1.0);
  const AnnModel b = Train(d, 0.5, config, 1.0);
  EXPECT_EQ(a.w1, b.w1);
  EXPECT_EQ(a.b2, b.b2);
  EXPECT_THROW(Train(d, 0.0, config, 1.0), DomainError);
  config.epochs = 0;
  EXPECT_THROW(Train(d, 0.5, config, 1.0), DomainError);
  EXPECT_THROW(Train(Dataset{}, 0.5, TrainConfig{}, 1.0), DomainError);
}

TEST(TrainTest, NonFiniteLossIsNumericalError) {
  Dataset d;
  d.features = Eigen::MatrixXd::Constant(4, 1, 1.0);
  d.targets = Eigen::VectorXd::Constant(4, 1.0);
  d.targets(2) = INFINITY;
  for (int i = 0; i < 4; ++i) d.time_index.push_back(i);
  EXPECT_THROW(Train(d, 0.5, TrainConfig{}, 1.0), NumericalError);
}

TEST(ModelIoTest, RoundTrip) {
  std::mt19937_64 rng(6);
  const AnnModel m = RandomModel(rng, 6, 3);
  std::stringstream buffer;
  SaveModel(m, buffer);
  const AnnModel back = LoadModel(buffer);
  EXPECT_EQ(back.w1, m.w1);
  EXPECT_EQ(back.b1, m.b1);
  EXPECT_EQ(back.w2, m.w2);
  EXPECT_EQ(back.b2, m.b2);
  EXPECT_EQ(back.scaler_mean, m.scaler_mean);
  EXPECT_EQ(back.scaler_scale, m.scaler_scale);
  const std::vector<double> x = {1, 2, 3, 4, 5, 6};
  EXPECT_EQ(back.Predict(x), m.Predict(x));
}

TEST(ModelIoTest, MalformedInputIsDataError) {
  std::stringstream bad("smartmarket-ann 2\n");
  EXPECT_THROW(LoadModel(bad), DataError);
  std::stringstream truncated("smartmarket-ann 1\ninputs 2 hidden 1\n");
  EXPECT_THROW(LoadModel(truncated), DataError);
}

TEST(PredictTest, DimensionMismatch) {
  std::mt19937_64 rng(7);
  const AnnModel m = RandomModel(rng, 3, 2);
  EXPECT_THROW(m.Predict(std::vector<double>{1.0}), DomainError);
  const Eigen::MatrixXd rows = Eigen::MatrixXd::Ones(4, 3);
  const Eigen::VectorXd out = m.Predict(rows);
  EXPECT_EQ(out(0), m.Predict(std::vector<double>{1, 1, 1}));
}

}  // namespace
}  // namespace smartmarket
