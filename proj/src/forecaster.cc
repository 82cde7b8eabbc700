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

#include "smartmarket/forecaster.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "smartmarket/errors.h"

namespace smartmarket {

namespace {

constexpr char kMagic[] = "smartmarket-ann";

double PinballDerivative(double q, double d, double tau) {
  if (q > d) return 1.0 - tau;
  if (q < d) return -tau;
  return 0.0;
}

void ValidateTau(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
}

template <typename T>
T Expect(std::istream& in, const std::string& what) {
  T value;
  if (!(in >> value)) throw DataError({"model file: cannot read " + what});
  return value;
}

void ExpectToken(std::istream& in, const std::string& token) {
  const std::string got = Expect<std::string>(in, "'" + token + "'");
  if (got != token) {
    throw DataError({"model file: expected '" + token + "', found '" + got + "'"});
  }
}

}  // namespace

LagFeatureSpec LagFeatureSpec::Correct(int h) {
  return LagFeatureSpec{{h, h + 1, 2 * h, 2 * h + 1, 3 * h, 3 * h + 1}};
}

LagFeatureSpec LagFeatureSpec::Misspecified(int h) {
  return LagFeatureSpec{{h - 6, h - 10, 2 * h - 6, 2 * h - 10, 3 * h + 10, 3 * h + 4}};
}

int LagFeatureSpec::max_offset() const {
  if (offsets.empty()) throw DomainError("lag spec has no offsets");
  return *std::max_element(offsets.begin(), offsets.end());
}

Dataset Dataset::Slice(std::size_t begin, std::size_t end) const {
  std::vector<Eigen::Index> rows_kept;
  for (std::size_t r = 0; r < time_index.size(); ++r) {
    if (time_index[r] >= begin && time_index[r] < end) {
      rows_kept.push_back(static_cast<Eigen::Index>(r));
    }
  }
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows_kept.size()), features.cols());
  out.targets.resize(static_cast<Eigen::Index>(rows_kept.size()));
  for (std::size_t k = 0; k < rows_kept.size(); ++k) {
    const auto r = rows_kept[k];
    out.features.row(static_cast<Eigen::Index>(k)) = features.row(r);
    out.targets(static_cast<Eigen::Index>(k)) = targets(r);
    out.time_index.push_back(time_index[r]);
  }
  return out;
}

Dataset BuildLagFeatures(std::span<const double> series, const LagFeatureSpec& spec) {
  for (int offset : spec.offsets) {
    if (offset <= 0) throw DomainError("lag offsets must be positive");
  }
  const std::size_t max_lag = static_cast<std::size_t>(spec.max_offset());
  if (series.size() <= max_lag) {
    throw DomainError("series of length " + std::to_string(series.size()) +
                      " is too short for lag " + std::to_string(max_lag));
  }
  const auto rows = static_cast<Eigen::Index>(series.size() - max_lag);
  const auto cols = static_cast<Eigen::Index>(spec.offsets.size());
  Dataset out;
  out.features.resize(rows, cols);
  out.targets.resize(rows);
  out.time_index.resize(static_cast<std::size_t>(rows));
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::size_t t = max_lag + static_cast<std::size_t>(r);
    for (Eigen::Index j = 0; j < cols; ++j) {
      out.features(r, j) = series[t - static_cast<std::size_t>(spec.offsets[j])];
    }
    out.targets(r) = series[t];
    out.time_index[static_cast<std::size_t>(r)] = t;
  }
  return out;
}

double PinballLoss(std::span<const double> predictions,
                   std::span<const double> targets, double tau) {
  ValidateTau(tau);
  if (predictions.size() != targets.size() || predictions.empty()) {
    throw DomainError("pinball loss needs equal, non-empty inputs");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    const double diff = targets[k] - predictions[k];
    sum += diff > 0.0 ? tau * diff : (tau - 1.0) * diff;
  }
  return sum / static_cast<double>(predictions.size());
}

double AnnModel::PredictStandardized(const Eigen::VectorXd& z) const {
  const Eigen::VectorXd hidden = (w1 * z + b1).cwiseMax(0.0);
  return w2.dot(hidden) + b2;
}

double AnnModel::Predict(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != inputs()) {
    throw DomainError("feature dimension " + std::to_string(x.size()) +
                      " does not match model input " + std::to_string(inputs()));
  }
  Eigen::VectorXd z(inputs());
  for (int j = 0; j < inputs(); ++j) z(j) = (x[j] - scaler_mean) / scaler_scale;
  return scaler_mean + scaler_scale * PredictStandardized(z);
}

Eigen::VectorXd AnnModel::Predict(const Eigen::MatrixXd& features) const {
  if (features.cols() != inputs()) {
    throw DomainError("feature dimension does not match model input");
  }
  const Eigen::MatrixXd z = (features.array() - scaler_mean) / scaler_scale;
  const Eigen::MatrixXd hidden =
      ((z * w1.transpose()).rowwise() + b1.transpose()).cwiseMax(0.0);
  const Eigen::VectorXd out = (hidden * w2.transpose()).array() + b2;
  return (out.array() * scaler_scale + scaler_mean).matrix();
}

double LossAndGradient(const AnnModel& model, const Eigen::MatrixXd& z_features,
                       const Eigen::VectorXd& z_targets, double tau,
                       AnnGradient* gradient) {
  ValidateTau(tau);
  const Eigen::Index batch = z_features.rows();
  if (batch == 0 || z_targets.size() != batch) {
    throw DomainError("gradient needs a non-empty batch with one target per row");
  }
  const Eigen::MatrixXd pre =
      (z_features * model.w1.transpose()).rowwise() + model.b1.transpose();
  const Eigen::MatrixXd act = pre.cwiseMax(0.0);
  const Eigen::VectorXd q = (act * model.w2.transpose()).array() + model.b2;
  double loss = 0.0;
  Eigen::VectorXd g(batch);
  for (Eigen::Index k = 0; k < batch; ++k) {
    const double diff = z_targets(k) - q(k);
    loss += diff > 0.0 ? tau * diff : (tau - 1.0) * diff;
    g(k) = PinballDerivative(q(k), z_targets(k), tau) / static_cast<double>(batch);
  }
  loss /= static_cast<double>(batch);
  if (gradient != nullptr) {
    gradient->b2 = g.sum();
    gradient->w2 = g.transpose() * act;
    const Eigen::MatrixXd back =
        ((g * model.w2).array() * (pre.array() > 0.0).cast<double>()).matrix();
    gradient->w1 = back.transpose() * z_features;
    gradient->b1 = back.colwise().sum().transpose();
  }
  return loss;
}

double SpectralNorm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

double ModelLipschitz(const AnnModel& model) {
  return SpectralNorm(model.w1) * SpectralNorm(model.w2);
}

void ClipWeights(AnnModel* model, double k_f) {
  if (!(k_f > 0.0)) throw DomainError("forecaster Lipschitz constant must be > 0");
  const double cap = std::sqrt(k_f);
  const double n1 = SpectralNorm(model->w1);
  if (n1 > cap) model->w1 *= cap / n1;
  const double n2 = SpectralNorm(model->w2);
  if (n2 > cap) model->w2 *= cap / n2;
}

AnnModel Train(const Dataset& data, double tau, const TrainConfig& config,
               double k_f) {
  ValidateTau(tau);
  if (data.rows() == 0) throw DomainError("training set is empty");
  if (config.epochs < 1 || config.hidden_neurons < 1 || config.batch_size < 0 ||
      !(config.learning_rate > 0.0)) {
    throw DomainError("training needs epochs >= 1, neurons >= 1, lr > 0");
  }
  const Eigen::Index rows = data.rows();
  const int inputs = static_cast<int>(data.features.cols());
  const int hidden = config.hidden_neurons;

  AnnModel model;
  model.scaler_mean = data.targets.mean();
  const double var =
      (data.targets.array() - model.scaler_mean).square().sum() / static_cast<double>(rows);
  model.scaler_scale = var > 1e-24 ? std::sqrt(var) : 1.0;
  const Eigen::MatrixXd z = (data.features.array() - model.scaler_mean) / model.scaler_scale;
  const Eigen::VectorXd zt =
      ((data.targets.array() - model.scaler_mean) / model.scaler_scale).matrix();

  std::mt19937_64 rng(config.seed);
  const double a1 = std::sqrt(6.0 / (inputs + hidden));
  const double a2 = std::sqrt(6.0 / (hidden + 1));
  std::uniform_real_distribution<double> u1(-a1, a1);
  std::uniform_real_distribution<double> u2(-a2, a2);
  model.w1.resize(hidden, inputs);
  for (Eigen::Index i = 0; i < model.w1.size(); ++i) model.w1.data()[i] = u1(rng);
  model.b1 = Eigen::VectorXd::Constant(hidden, 0.1);
  model.w2.resize(hidden);
  for (int i = 0; i < hidden; ++i) model.w2(i) = u2(rng);
  model.b2 = 0.0;
  ClipWeights(&model, k_f);

  AnnGradient m{Eigen::MatrixXd::Zero(hidden, inputs), Eigen::VectorXd::Zero(hidden),
                Eigen::RowVectorXd::Zero(hidden), 0.0};
  AnnGradient v = m;
  AnnGradient grad;
  const Eigen::Index batch =
      config.batch_size == 0 ? rows : std::min<Eigen::Index>(config.batch_size, rows);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(rows));
  std::iota(order.begin(), order.end(), 0);
  Eigen::MatrixXd bz(batch, inputs);
  Eigen::VectorXd bt(batch);
  long step = 0;
  const double b1c = config.beta1, b2c = config.beta2, eps = config.adam_epsilon;
  auto adam = [&](auto& param, auto& mom, auto& vel, const auto& g, double c1, double c2) {
    mom = b1c * mom + (1.0 - b1c) * g;
    vel = b2c * vel + (1.0 - b2c) * g.cwiseProduct(g);
    param -= (config.learning_rate *
              ((mom / c1).array() / ((vel / c2).array().sqrt() + eps)))
                 .matrix();
  };
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0; start < rows; start += batch) {
      const Eigen::Index size = std::min(batch, rows - start);
      bz.resize(size, inputs);
      bt.resize(size);
      for (Eigen::Index k = 0; k < size; ++k) {
        const Eigen::Index r = order[static_cast<std::size_t>(start + k)];
        bz.row(k) = z.row(r);
        bt(k) = zt(r);
      }
      const double loss = LossAndGradient(model, bz, bt, tau, &grad);
      if (!std::isfinite(loss)) {
        throw NumericalError("training loss became non-finite at epoch " +
                             std::to_string(epoch) + ", step " + std::to_string(step));
      }
      ++step;
      const double c1 = 1.0 - std::pow(b1c, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(b2c, static_cast<double>(step));
      adam(model.w1, m.w1, v.w1, grad.w1, c1, c2);
      adam(model.b1, m.b1, v.b1, grad.b1, c1, c2);
      adam(model.w2, m.w2, v.w2, grad.w2, c1, c2);
      m.b2 = b1c * m.b2 + (1.0 - b1c) * grad.b2;
      v.b2 = b2c * v.b2 + (1.0 - b2c) * grad.b2 * grad.b2;
      model.b2 -= config.learning_rate * (m.b2 / c1) / (std::sqrt(v.b2 / c2) + eps);
      ClipWeights(&model, k_f);
    }
  }
  return model;
}

void SaveModel(const AnnModel& model, std::ostream& out) {
  std::ostringstream s;
  s.precision(17);
  s << kMagic << " 1\n";
  s << "inputs " << model.inputs() << " hidden " << model.hidden() << "\n";
  s << "activation relu identity\n";
  s << "scaler " << model.scaler_mean << ' ' << model.scaler_scale << "\n";
  s << "w1\n";
  for (int i = 0; i < model.hidden(); ++i) {
    for (int j = 0; j < model.inputs(); ++j) s << (j ? " " : "") << model.w1(i, j);
    s << "\n";
  }
  s << "b1";
  for (int i = 0; i < model.hidden(); ++i) s << ' ' << model.b1(i);
  s << "\nw2";
  for (int i = 0; i < model.hidden(); ++i) s << ' ' << model.w2(i);
  s << "\nb2 " << model.b2 << "\n";
  out << s.str();
}

AnnModel LoadModel(std::istream& in) {
  ExpectToken(in, kMagic);
  if (Expect<int>(in, "version") != 1) throw DataError({"model file: unsupported version"});
  ExpectToken(in, "inputs");
  const int inputs = Expect<int>(in, "input count");
  ExpectToken(in, "hidden");
  const int hidden = Expect<int>(in, "hidden count");
  if (inputs < 1 || hidden < 1) throw DataError({"model file: bad dimensions"});
  ExpectToken(in, "activation");
  ExpectToken(in, "relu");
  ExpectToken(in, "identity");
  AnnModel model;
  ExpectToken(in, "scaler");
  model.scaler_mean = Expect<double>(in, "scaler mean");
  model.scaler_scale = Expect<double>(in, "scaler scale");
  if (!(model.scaler_scale > 0.0)) throw DataError({"model file: scaler scale must be > 0"});
  ExpectToken(in, "w1");
  model.w1.resize(hidden, inputs);
  for (int i = 0; i < hidden; ++i) {
    for (int j = 0; j < inputs; ++j) model.w1(i, j) = Expect<double>(in, "w1 entry");
  }
  ExpectToken(in, "b1");
  model.b1.resize(hidden);
  for (int i = 0; i < hidden; ++i) model.b1(i) = Expect<double>(in, "b1 entry");
  ExpectToken(in, "w2");
  model.w2.resize(hidden);
  for (int i = 0; i < hidden; ++i) model.w2(i) = Expect<double>(in, "w2 entry");
  ExpectToken(in, "b2");
  model.b2 = Expect<double>(in, "b2");
  return model;
}

}  // namespace smartmarket
