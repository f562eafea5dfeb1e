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

#include "tacforce/features.hpp"

#include "tacforce/error.hpp"

#include <cmath>
#include <string>

namespace tacforce
{

FeatureDetail compute_features_detailed(const VectorField2D & f, const FeatureOptions & options)
{
  const VectorSum shear = norm_of_sum(f);
  Decomposition dec = decompose(f, options.poisson);
  std::vector<RotationCenter> centers = locate_rotation_centers(dec.R, options.significance);

  FeatureTriple out;
  out.s_t = shear.magnitude;
  out.s_t_direction = shear.direction;
  out.s_n = sum_norms(dec.d);
  for (const auto & c : centers) {
    out.s_tau += moment_sum(dec.r, c.position);
  }
  return FeatureDetail{out, std::move(dec), std::move(centers)};
}

FeatureTriple compute_features(const VectorField2D & f, const FeatureOptions & options)
{
  return compute_features_detailed(f, options).features;
}

std::string_view to_string(PatternKind kind)
{
  switch (kind) {
    case PatternKind::Divergence:
      return "divergence";
    case PatternKind::Unidirectional:
      return "unidirectional";
    case PatternKind::Rotational:
      return "rotational";
  }
  return "unknown";
}

CrosstalkMatrix feature_crosstalk_report(
  std::span<const LabeledField> patterns, const FeatureOptions & options)
{
  CrosstalkMatrix sum{};
  std::array<int, 3> count{};
  for (const auto & p : patterns) {
    const auto row = static_cast<std::size_t>(p.kind);
    const FeatureTriple t = compute_features(p.field, options);
    sum[row][0] += t.s_n;
    sum[row][1] += t.s_t;
    sum[row][2] += std::abs(t.s_tau);
    ++count[row];
  }
  for (std::size_t row = 0; row < 3; ++row) {
    if (count[row] == 0) {
      throw InvalidArgument(
              "crosstalk report needs a " +
              std::string(to_string(static_cast<PatternKind>(row))) + " pattern");
    }
    for (auto & x : sum[row]) {
      x /= count[row];
    }
  }
  CrosstalkMatrix out{};
  for (std::size_t col = 0; col < 3; ++col) {
    const double own = sum[col][col];
    if (!(own > 0.0)) {
      throw InvalidArgument("pattern produced no response in its own feature");
    }
    for (std::size_t row = 0; row < 3; ++row) {
      out[row][col] = sum[row][col] / own;
    }
  }
  return out;
}

}  // namespace tacforce
