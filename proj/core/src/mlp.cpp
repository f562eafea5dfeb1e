// Copyright 2026 The tacforce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tacforce/mlp.hpp"

#include "tacforce/error.hpp"
#include "tacforce/lbfgs.hpp"

#include <cmath>
#include <random>
#include <string>

namespace tacforce
{

namespace
{

Eigen::MatrixXd activate(Activation a, const Eigen::MatrixXd & z)
{
  switch (a) {
    case Activation::Tanh:
      return z.array().tanh().matrix();
    case Activation::Relu:
      return z.array().max(0.0).matrix();
  }
  return z;
}

// Derivative expressed through the activation output where possible.
Eigen::MatrixXd activation_slope(Activation a, const Eigen::MatrixXd & z, const Eigen::MatrixXd & out)
{
  switch (a) {
    case Activation::Tanh:
      return (1.0 - out.array().square()).matrix();
    case Activation::Relu:
      return (z.array() > 0.0).cast<double>().matrix();
  }
  return Eigen::MatrixXd::Ones(z.rows(), z.cols());
}

Eigen::VectorXd vector_from_json(const nlohmann::json & j)
{
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    v(k) = j.at(static_cast<std::size_t>(k)).get<double>();
  }
  return v;
}

nlohmann::ordered_json vector_to_json(const Eigen::VectorXd & v)
{
  return nlohmann::ordered_json(std::vector<double>(v.data(), v.data() + v.size()));
}

void column_stats(const Eigen::MatrixXd & x, Eigen::VectorXd & mean, Eigen::VectorXd & scale)
{
  mean = x.rowwise().mean();
  scale.resize(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double var = (x.row(r).array() - mean(r)).square().mean();
    const double sd = std::sqrt(var);
    scale(r) = sd > 1e-12 ? sd : 1.0;
  }
}

}  // namespace

std::string_view to_string(Activation a)
{
  switch (a) {
    case Activation::Tanh:
      return "tanh";
    case Activation::Relu:
      return "relu";
  }
  return "unknown";
}

Activation activation_from_string(std::string_view name)
{
  if (name == "tanh") {
    return Activation::Tanh;
  }
  if (name == "relu") {
    return Activation::Relu;
  }
  throw InvalidArgument("unknown activation '" + std::string(name) + "'");
}

MLPModel::MLPModel(std::vector<int> layer_sizes, Activation activation)
: layer_sizes_(std::move(layer_sizes)), activation_(activation)
{
  if (layer_sizes_.size() < 2) {
    throw InvalidArgument("an MLP needs at least an input and an output layer");
  }
  for (int n : layer_sizes_) {
    if (n < 1) {
      throw InvalidArgument("MLP layer sizes must be positive");
    }
  }
  for (std::size_t l = 1; l < layer_sizes_.size(); ++l) {
    weights_.push_back(Eigen::MatrixXd::Zero(layer_sizes_[l], layer_sizes_[l - 1]));
    biases_.push_back(Eigen::VectorXd::Zero(layer_sizes_[l]));
  }
  in_mean_ = Eigen::VectorXd::Zero(input_dim());
  in_scale_ = Eigen::VectorXd::Ones(input_dim());
  out_mean_ = Eigen::VectorXd::Zero(output_dim());
  out_scale_ = Eigen::VectorXd::Ones(output_dim());
}

Eigen::Index MLPModel::parameter_count() const
{
  Eigen::Index n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    n += weights_[l].size() + biases_[l].size();
  }
  return n;
}

Eigen::VectorXd MLPModel::parameters() const
{
  Eigen::VectorXd theta(parameter_count());
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    theta.segment(at, weights_[l].size()) = weights_[l].reshaped();
    at += weights_[l].size();
    theta.segment(at, biases_[l].size()) = biases_[l];
    at += biases_[l].size();
  }
  return theta;
}

void MLPModel::set_parameters(const Eigen::VectorXd & theta)
{
  if (theta.size() != parameter_count()) {
    throw InvalidArgument("parameter vector has the wrong length");
  }
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    weights_[l].reshaped() = theta.segment(at, weights_[l].size());
    at += weights_[l].size();
    biases_[l] = theta.segment(at, biases_[l].size());
    at += biases_[l].size();
  }
}

void MLPModel::initialize(std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const double limit = std::sqrt(6.0 / static_cast<double>(weights_[l].rows() + weights_[l].cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index k = 0; k < weights_[l].size(); ++k) {
      weights_[l].data()[k] = dist(rng);
    }
    biases_[l].setZero();
  }
}

void MLPModel::set_standardization(
  Eigen::VectorXd in_mean, Eigen::VectorXd in_scale, Eigen::VectorXd out_mean,
  Eigen::VectorXd out_scale)
{
  if (in_mean.size() != input_dim() || in_scale.size() != input_dim() ||
    out_mean.size() != output_dim() || out_scale.size() != output_dim())
  {
    throw InvalidArgument("standardisation vectors do not match the layer sizes");
  }
  in_mean_ = std::move(in_mean);
  in_scale_ = std::move(in_scale);
  out_mean_ = std::move(out_mean);
  out_scale_ = std::move(out_scale);
}

Eigen::MatrixXd MLPModel::forward_standardized(const Eigen::MatrixXd & x) const
{
  Eigen::MatrixXd a = x;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd z = weights_[l] * a;
    z.colwise() += biases_[l];
    a = (l + 1 < weights_.size()) ? activate(activation_, z) : z;
  }
  return a;
}

Eigen::MatrixXd MLPModel::predict(const Eigen::MatrixXd & inputs) const
{
  if (layer_sizes_.empty() || inputs.rows() != input_dim()) {
    throw InvalidArgument(
            "MLP expects " + std::to_string(layer_sizes_.empty() ? 0 : input_dim()) +
            " inputs, got " + std::to_string(inputs.rows()));
  }
  Eigen::MatrixXd x = (inputs.colwise() - in_mean_).array().colwise() / in_scale_.array();
  Eigen::MatrixXd y = forward_standardized(x);
  return (y.array().colwise() * out_scale_.array()).matrix().colwise() + out_mean_;
}

Eigen::VectorXd MLPModel::predict(const Eigen::VectorXd & input) const
{
  return predict(Eigen::MatrixXd(input)).col(0);
}

double MLPModel::loss_and_gradient(
  const Eigen::VectorXd & theta, const Eigen::MatrixXd & inputs, const Eigen::MatrixXd & targets,
  Eigen::VectorXd & grad) const
{
  if (inputs.rows() != input_dim() || targets.rows() != output_dim() ||
    inputs.cols() != targets.cols() || inputs.cols() == 0)
  {
    throw InvalidArgument("training data does not match the network dimensions");
  }
  MLPModel net = *this;
  net.set_parameters(theta);

  const Eigen::MatrixXd x = (inputs.colwise() - in_mean_).array().colwise() / in_scale_.array();
  const Eigen::MatrixXd y = (targets.colwise() - out_mean_).array().colwise() / out_scale_.array();

  const std::size_t layers = net.weights_.size();
  std::vector<Eigen::MatrixXd> pre(layers);
  std::vector<Eigen::MatrixXd> post(layers + 1);
  post[0] = x;
  for (std::size_t l = 0; l < layers; ++l) {
    pre[l] = net.weights_[l] * post[l];
    pre[l].colwise() += net.biases_[l];
    post[l + 1] = (l + 1 < layers) ? activate(activation_, pre[l]) : pre[l];
  }

  const double count = static_cast<double>(y.size());
  const Eigen::MatrixXd residual = post[layers] - y;
  const double loss = residual.squaredNorm() / count;

  grad.resize(theta.size());
  std::vector<Eigen::Index> offsets(layers);
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    offsets[l] = at;
    at += net.weights_[l].size() + net.biases_[l].size();
  }

  Eigen::MatrixXd delta = (2.0 / count) * residual;
  for (std::size_t l = layers; l-- > 0; ) {
    if (l + 1 < layers) {
      delta = delta.cwiseProduct(activation_slope(activation_, pre[l], post[l + 1]));
    }
    const Eigen::MatrixXd gw = delta * post[l].transpose();
    grad.segment(offsets[l], gw.size()) = gw.reshaped();
    grad.segment(offsets[l] + gw.size(), net.biases_[l].size()) = delta.rowwise().sum();
    if (l > 0) {
      delta = net.weights_[l].transpose() * delta;
    }
  }
  return loss;
}

nlohmann::ordered_json MLPModel::to_json() const
{
  nlohmann::ordered_json j;
  j["type"] = "mlp";
  j["layer_sizes"] = layer_sizes_;
  j["activation"] = std::string(to_string(activation_));
  j["weights"] = nlohmann::ordered_json::array();
  j["biases"] = nlohmann::ordered_json::array();
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < weights_[l].rows(); ++r) {
      rows.push_back(vector_to_json(weights_[l].row(r).transpose()));
    }
    j["weights"].push_back(std::move(rows));
    j["biases"].push_back(vector_to_json(biases_[l]));
  }
  j["input_mean"] = vector_to_json(in_mean_);
  j["input_scale"] = vector_to_json(in_scale_);
  j["output_mean"] = vector_to_json(out_mean_);
  j["output_scale"] = vector_to_json(out_scale_);
  return j;
}

MLPModel MLPModel::from_json(const nlohmann::json & j)
{
  MLPModel m(j.at("layer_sizes").get<std::vector<int>>(),
    activation_from_string(j.at("activation").get<std::string>()));
  const auto & w = j.at("weights");
  const auto & b = j.at("biases");
  if (w.size() != m.weights_.size() || b.size() != m.biases_.size()) {
    throw InvalidArgument("MLP json layer count does not match layer_sizes");
  }
  for (std::size_t l = 0; l < m.weights_.size(); ++l) {
    if (w[l].size() != static_cast<std::size_t>(m.weights_[l].rows())) {
      throw InvalidArgument("MLP json weight rows do not match layer_sizes");
    }
    for (Eigen::Index r = 0; r < m.weights_[l].rows(); ++r) {
      const Eigen::VectorXd row = vector_from_json(w[l][static_cast<std::size_t>(r)]);
      if (row.size() != m.weights_[l].cols()) {
        throw InvalidArgument("MLP json weight columns do not match layer_sizes");
      }
      m.weights_[l].row(r) = row.transpose();
    }
    const Eigen::VectorXd bias = vector_from_json(b[l]);
    if (bias.size() != m.biases_[l].size()) {
      throw InvalidArgument("MLP json bias length does not match layer_sizes");
    }
    m.biases_[l] = bias;
  }
  m.set_standardization(
    vector_from_json(j.at("input_mean")), vector_from_json(j.at("input_scale")),
    vector_from_json(j.at("output_mean")), vector_from_json(j.at("output_scale")));
  if (!m.parameters().allFinite()) {
    throw InvalidArgument("MLP json contains non-finite parameters");
  }
  return m;
}

MlpFitResult mlp_fit(
  const Eigen::MatrixXd & inputs, const Eigen::MatrixXd & targets, const MlpFitOptions & options)
{
  if (inputs.cols() < 1 || inputs.cols() != targets.cols()) {
    throw InvalidArgument("mlp_fit needs at least one input/target pair");
  }
  std::vector<int> sizes;
  sizes.push_back(static_cast<int>(inputs.rows()));
  sizes.insert(sizes.end(), options.hidden.begin(), options.hidden.end());
  sizes.push_back(static_cast<int>(targets.rows()));

  MLPModel model(sizes, options.activation);
  model.initialize(options.seed);
  if (options.standardize) {
    Eigen::VectorXd im;
    Eigen::VectorXd is;
    Eigen::VectorXd om;
    Eigen::VectorXd os;
    column_stats(inputs, im, is);
    column_stats(targets, om, os);
    model.set_standardization(im, is, om, os);
  }

  const Objective objective = [&](const Eigen::VectorXd & theta, Eigen::VectorXd & grad) {
      return model.loss_and_gradient(theta, inputs, targets, grad);
    };
  LbfgsOptions lb;
  lb.max_iter = options.max_iter;
  lb.grad_tol = options.tol;
  const LbfgsResult fit = lbfgs_minimize(objective, model.parameters(), lb);

  model.set_parameters(fit.x);
  return MlpFitResult{std::move(model), fit.loss, fit.iterations, fit.loss_history};
}

}  // namespace tacforce
