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

#ifndef TACFORCE__MLP_HPP_
#define TACFORCE__MLP_HPP_

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <string_view>
#include <vector>

namespace tacforce
{

enum class Activation
{
  Tanh,
  Relu,
};

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view name);

/**
 * @brief Fully connected regressor: hidden layers use the activation,
 * the output layer is linear.
 *
 * Inputs and outputs pass through stored affine standardisation
 * (x - mean) / scale; a default-constructed network has identity
 * standardisation.
 */
class MLPModel
{
public:
  MLPModel() = default;
  /// Zero weights, identity standardisation.
  MLPModel(std::vector<int> layer_sizes, Activation activation);

  const std::vector<int> & layer_sizes() const {return layer_sizes_;}
  Activation activation() const {return activation_;}
  int input_dim() const {return layer_sizes_.front();}
  int output_dim() const {return layer_sizes_.back();}

  std::vector<Eigen::MatrixXd> & weights() {return weights_;}
  const std::vector<Eigen::MatrixXd> & weights() const {return weights_;}
  std::vector<Eigen::VectorXd> & biases() {return biases_;}
  const std::vector<Eigen::VectorXd> & biases() const {return biases_;}

  Eigen::Index parameter_count() const;
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd & theta);

  /// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
  void initialize(std::uint64_t seed);

  void set_standardization(
    Eigen::VectorXd in_mean, Eigen::VectorXd in_scale, Eigen::VectorXd out_mean,
    Eigen::VectorXd out_scale);

  /// Columns are samples. Throws InvalidArgument on a dimension mismatch.
  Eigen::MatrixXd predict(const Eigen::MatrixXd & inputs) const;
  Eigen::VectorXd predict(const Eigen::VectorXd & input) const;

  /**
   * Mean squared error over all samples and outputs in standardised
   * space, and its gradient with respect to parameters(). Inputs and
   * targets are raw (unstandardised), columns are samples.
   */
  double loss_and_gradient(
    const Eigen::VectorXd & theta, const Eigen::MatrixXd & inputs, const Eigen::MatrixXd & targets,
    Eigen::VectorXd & grad) const;

  nlohmann::ordered_json to_json() const;
  static MLPModel from_json(const nlohmann::json & j);

private:
  Eigen::MatrixXd forward_standardized(const Eigen::MatrixXd & x) const;

  std::vector<int> layer_sizes_;
  Activation activation_{Activation::Tanh};
  std::vector<Eigen::MatrixXd> weights_;   // weights_[l] is out x in
  std::vector<Eigen::VectorXd> biases_;
  Eigen::VectorXd in_mean_;
  Eigen::VectorXd in_scale_;
  Eigen::VectorXd out_mean_;
  Eigen::VectorXd out_scale_;
};

struct MlpFitOptions
{
  std::vector<int> hidden{10};
  Activation activation{Activation::Tanh};
  std::uint64_t seed{0};
  int max_iter{500};
  double tol{1e-6};
  /// Fit input/output standardisation from the training data.
  bool standardize{true};
};

struct MlpFitResult
{
  MLPModel model;
  double final_loss{0.0};
  int iterations{0};
  std::vector<double> loss_history;
};

/// Full-batch L-BFGS on mean squared error. Columns of inputs/targets are samples.
MlpFitResult mlp_fit(
  const Eigen::MatrixXd & inputs, const Eigen::MatrixXd & targets, const MlpFitOptions & options);

}  // namespace tacforce

#endif  // TACFORCE__MLP_HPP_
