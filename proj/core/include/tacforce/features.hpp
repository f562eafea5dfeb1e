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

#ifndef TACFORCE__FEATURES_HPP_
#define TACFORCE__FEATURES_HPP_

#include "tacforce/field.hpp"
#include "tacforce/nhhd.hpp"

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace tacforce
{

/**
 * @brief Scalar summary of a displacement field.
 *
 * s_n   sum of vector norms over the curl-free component (mm)
 * s_t   norm of the vector sum over the raw field (mm)
 * s_tau signed total moment of the divergence-free component about the
 *       rotation centres (mm^2)
 */
struct FeatureTriple
{
  double s_n{0.0};
  double s_t{0.0};
  std::optional<Vec2> s_t_direction;
  double s_tau{0.0};
};

struct FeatureOptions
{
  double significance{kDefaultSignificance};
  PoissonOptions poisson{};
};

FeatureTriple compute_features(const VectorField2D & f, const FeatureOptions & options = {});

/// Same as compute_features but also hands back the decomposition and centres.
struct FeatureDetail
{
  FeatureTriple features;
  Decomposition decomposition;
  std::vector<RotationCenter> centers;
};
FeatureDetail compute_features_detailed(const VectorField2D & f, const FeatureOptions & options = {});

enum class PatternKind
{
  Divergence = 0,
  Unidirectional = 1,
  Rotational = 2,
};

std::string_view to_string(PatternKind kind);

struct LabeledField
{
  PatternKind kind;
  VectorField2D field;
};

/// rows: pattern kind; columns: (s_n, s_t, |s_tau|).
using CrosstalkMatrix = std::array<std::array<double, 3>, 3>;

/**
 * Normalised feature responses to labelled single-load patterns.
 *
 * Responses are averaged per label. Column k is divided by the response of
 * feature k to its own pattern, so the diagonal is 1 and entry (p, k) reads
 * "how strongly pattern p excites feature k, relative to the pattern that
 * feature is meant to measure". Every label must be present and every
 * diagonal response must be non-zero.
 */
CrosstalkMatrix feature_crosstalk_report(
  std::span<const LabeledField> patterns, const FeatureOptions & options = {});

}  // namespace tacforce

#endif  // TACFORCE__FEATURES_HPP_
