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

#ifndef TACFORCE__CALIB_HPP_
#define TACFORCE__CALIB_HPP_

#include "tacforce/features.hpp"
#include "tacforce/mlp.hpp"
#include "tacforce/wrench.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace tacforce
{

struct XYPair
{
  double x{0.0};
  double y{0.0};
};

/// y = slope * x + intercept.
struct LinearModel
{
  double slope{0.0};
  double intercept{0.0};
  /// Consensus set of the fit, one flag per training pair.
  std::vector<bool> inlier_mask;

  double predict(double x) const {return slope * x + intercept;}
  std::size_t inlier_count() const;
};

struct RansacOptions
{
  int iters{200};
  /// Defaults to 1.5 * MAD of the residuals of a preliminary least-squares fit.
  std::optional<double> inlier_tol;
  /// Defaults to half the pairs, rounded up.
  std::optional<std::size_t> min_inliers;
  std::uint64_t seed{0};
};

/**
 * Two-point RANSAC line fit with a least-squares refit on the best
 * consensus set. Larger consensus wins; equal consensus goes to the lower
 * inlier squared error. When every pair of points fits in the iteration
 * budget the hypotheses are enumerated instead of sampled.
 *
 * Throws InvalidArgument for fewer than 2 pairs or a single distinct x;
 * FitError when the best consensus is below min_inliers.
 */
LinearModel ransac_fit(std::span<const XYPair> pairs, const RansacOptions & options = {});

/// Ordinary least squares, used for the preliminary and final fits.
LinearModel least_squares_fit(std::span<const XYPair> pairs);

/// sqrt(mean((p - t)^2)). Throws InvalidArgument on empty or mismatched input.
double rmse(std::span<const double> predictions, std::span<const double> truths);

/// One regressor per axis on the matching scalar feature.
using AxisModel = std::variant<LinearModel, MLPModel>;

double predict_axis(const AxisModel & model, double feature);

/**
 * @brief Feature -> wrench mapping, one regressor per axis.
 *
 * Normal and tangential predictions are clamped at zero; the tangential
 * direction is the feature's vector-sum direction.
 */
struct WrenchModel
{
  std::array<AxisModel, 3> axes{LinearModel{}, LinearModel{}, LinearModel{}};

  WrenchEstimate predict(const FeatureTriple & features) const;

  nlohmann::ordered_json to_json() const;
  static WrenchModel from_json(const nlohmann::json & j);
};

/// Joint 3-output network on the flattened (u..., v...) field.
struct RawFieldModel
{
  MLPModel net;

  WrenchEstimate predict(const VectorField2D & field) const;
};

/// Flattened (u..., v...) field, the raw-baseline input layout.
Eigen::VectorXd flatten_field(const VectorField2D & field);

double feature_for_axis(const FeatureTriple & f, Axis axis);

/// One calibration observation.
struct CvSample
{
  FeatureTriple features;
  Eigen::VectorXd raw;    ///< flatten_field of the observed field; may be empty for feature models
  WrenchEstimate truth;
  int object_id{0};
};

enum class ModelKind
{
  RansacLinear,
  MlpFeatures,
  MlpRaw,
};

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

struct ModelSpec
{
  ModelKind kind{ModelKind::RansacLinear};
  std::string label;                ///< report column; defaults from kind
  RansacOptions ransac{};
  MlpFitOptions mlp{};

  static ModelSpec ransac_linear();
  static ModelSpec mlp_features();                 ///< [1, 10, 1] per axis
  static ModelSpec mlp_raw(std::vector<int> hidden = {512, 128, 10});

  std::string name() const;
};

/// Fits a feature model on every sample. Not valid for MlpRaw.
WrenchModel fit_wrench_model(std::span<const CvSample> samples, const ModelSpec & spec);
RawFieldModel fit_raw_model(std::span<const CvSample> samples, const ModelSpec & spec);

struct AxisStats
{
  double mean{0.0};
  double stdv{0.0};              ///< sample standard deviation across folds
  std::vector<double> per_fold;
};

struct CvReport
{
  std::string method;
  std::array<AxisStats, 3> axes;
  std::vector<std::vector<int>> fold_objects;
};

/**
 * Leave-objects-out cross validation. Distinct object ids are sorted and
 * dealt round-robin into folds; fold f trains on every other fold and
 * reports per-axis RMSE on its own samples.
 */
CvReport cross_validate(std::span<const CvSample> samples, const ModelSpec & spec, int folds);

/// Table with one row per (axis, statistic) and one column per method.
void write_report_csv(std::ostream & os, std::span<const CvReport> reports);

}  // namespace tacforce

#endif  // TACFORCE__CALIB_HPP_
